import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from geodete.errors import InputError, ResourceLimitError
from geodete.permgroup import (BOUND_ENV_VAR, Permutation, compose_and_order, dihedral_analysis,
                               direct_product, enumeration_bound, generate, is_prime, projective_group,
                               z2_character)

perms8 = st.permutations(range(8)).map(lambda p: Permutation(tuple(p)))


def test_compose_identity():
    e = Permutation.identity(5)
    prod, n = compose_and_order(e, e)
    assert prod == e and n == 1


def test_compose_seven_cycle():
    rho = Permutation.from_cycles(7, (0, 1, 2, 3, 4, 5, 6))
    prod, n = compose_and_order(rho, Permutation.identity(7))
    assert prod == rho and n == 7


def test_compose_convention():
    # (g * h)(i) = g(h(i))
    g = Permutation.from_cycles(3, (0, 1))
    h = Permutation.from_cycles(3, (1, 2))
    assert (g * h)(1) == g(h(1)) == 2


@given(perms8, perms8)
def test_product_and_order_match_brute_force(g, h):
    prod, n = compose_and_order(g, h)
    assert prod.images == oracles.mul(g.images, h.images)
    assert n == oracles.brute_order(prod.images)


@given(perms8)
def test_inverse_and_powers(g):
    assert (g * g.inverse()).is_identity()
    assert (g ** g.order()).is_identity()
    assert g ** -1 == g.inverse()
    assert g ** 0 == Permutation.identity(8)


@given(perms8, perms8)
def test_conjugate(g, x):
    assert x.conjugate(g) == g * x * g.inverse()
    assert x.conjugate(g).order() == x.order()


def test_cycles_roundtrip():
    p = Permutation.from_cycles(6, (0, 3), (1, 4, 5))
    assert Permutation.from_cycles(6, *p.cycles()) == p
    assert p.order() == 6


@pytest.mark.parametrize("images", [(0, 0, 1), (0, 2), (1, 2, 3)])
def test_malformed_permutation(images):
    with pytest.raises(InputError):
        Permutation(images)


def test_generate_small():
    assert generate(2, [Permutation((1, 0))]).order == 2
    rho = Permutation.from_cycles(7, (0, 1, 2, 3, 4, 5, 6))
    sigma = Permutation.from_cycles(7, (1, 6), (2, 5), (3, 4))
    assert sigma * rho * sigma == rho.inverse()
    assert generate(7, [rho, sigma]).order == 14


def test_generate_matches_brute_closure():
    rng = random.Random(3)
    for _ in range(20):
        gens = [Permutation(tuple(rng.sample(range(6), 6))) for _ in range(2)]
        assert set(generate(6, gens).elements) == {Permutation(t) for t in oracles.brute_closure(gens)}


def test_bound_enforced():
    with pytest.raises(ResourceLimitError, match="100"):
        projective_group(7, "PGL", bound=100).order


def test_bound_from_environment(monkeypatch):
    monkeypatch.setenv(BOUND_ENV_VAR, "50")
    assert enumeration_bound() == 50
    with pytest.raises(ResourceLimitError):
        projective_group(7, "PSL").order
    monkeypatch.setenv(BOUND_ENV_VAR, "lots")
    with pytest.raises(InputError):
        enumeration_bound()


@pytest.mark.parametrize("q, psl, pgl", [(2, 6, 6), (3, 12, 24), (5, 60, 120), (7, 168, 336), (11, 660, 1320)])
def test_projective_orders(q, psl, pgl):
    # |PSL(2,q)| = q(q^2-1)/gcd(2,q-1), |PGL(2,q)| = q(q^2-1)
    assert q * (q * q - 1) // (2 if q > 2 else 1) == psl
    G, H = projective_group(q, "PSL"), projective_group(q, "PGL")
    assert (G.order, H.order) == (psl, pgl)
    assert G.degree == H.degree == q + 1


@pytest.mark.parametrize("q", [1, 4, 6, 9])
def test_projective_rejects_non_prime(q):
    assert not is_prime(q)
    with pytest.raises(InputError):
        projective_group(q)


def test_projective_prime_bound():
    with pytest.raises(InputError, match="bound"):
        projective_group(37)
    with pytest.raises(InputError):
        projective_group(5, "PSU")


def test_dihedral_degenerate():
    a = Permutation.from_cycles(4, (0, 1))
    d = dihedral_analysis(a, a)
    assert (d.rotation_order, d.subgroup_order, d.reflections) == (1, 2, (a,))
    with pytest.raises(InputError):
        dihedral_analysis(a, Permutation.from_cycles(4, (0, 1, 2)))


def test_dihedral_klein(klein_action):
    a1, _, a3 = klein_action.images
    d = dihedral_analysis(a1, a3)
    assert (d.rotation_order, d.subgroup_order, len(d.reflections)) == (7, 14, 7)
    assert d.is_faithful_dihedral


def _random_involution(rng, n=8):
    pts = list(range(n))
    rng.shuffle(pts)
    k = rng.randint(1, n // 2)
    return Permutation.from_cycles(n, *[(pts[2 * i], pts[2 * i + 1]) for i in range(k)])


def test_dihedral_vs_brute_force_200_pairs():
    rng = random.Random(20240)
    for _ in range(200):
        a, b = _random_involution(rng), _random_involution(rng)
        d = dihedral_analysis(a, b)
        closure = oracles.brute_closure([a, b])
        brute_refl = {x for x in closure if x != tuple(range(8)) and oracles.mul(x, x) == tuple(range(8))
                      and x not in oracles.brute_closure([(a * b).images])}
        assert d.subgroup_order == len(closure)
        assert {r.images for r in d.reflections} == brute_refl


def test_direct_product(psl27):
    z2 = generate(2, [Permutation((1, 0))])
    prod = direct_product(psl27, z2)
    assert prod.order == 336 and prod.degree == 10


def test_z2_character_trivial_cases(klein_action, psl27):
    z2 = generate(2, [Permutation((1, 0))])
    assert z2_character(z2, [Permutation((1, 0))]) == {Permutation((0, 1)): 1, Permutation((1, 0)): -1}
    chi = z2_character(klein_action.group, klein_action.images)
    assert sum(1 for v in chi.values() if v == 1) == 168
    assert {g for g, v in chi.items() if v == 1} == set(psl27.elements)


def test_z2_character_none_for_simple_group(psl27):
    from geodete.surface import TriangleSignature, search_epimorphisms
    action = search_epimorphisms(TriangleSignature(3, 3, 4), psl27)[0]
    assert z2_character(psl27, action.images) is None


def test_z2_character_errors(klein_action):
    G = klein_action.group
    with pytest.raises(InputError):
        z2_character(G, [])
    with pytest.raises(InputError):
        z2_character(G, [Permutation.identity(9)])
    with pytest.raises(InputError):
        z2_character(G, [klein_action.images[0]])


def _check_character(group, marked, chi):
    """Exhaustive homomorphism check; existence checked against the even subgroup index."""
    even = oracles.brute_closure([oracles.mul(m.images, n.images) for m in marked for n in marked])
    if chi is None:
        return len(even) == group.order
    if len(even) * 2 != group.order:
        return False
    if any(chi[m] != -1 for m in marked):
        return False
    return all(chi[g * h] == chi[g] * chi[h] for g in group.elements for h in group.elements)


def test_z2_character_homomorphism_battery():
    for name, action in oracles.battery_actions(1000):
        chi = z2_character(action.group, action.images)
        assert _check_character(action.group, action.images, chi), name
