import pytest

import oracles
from geodete.coxeter import build_tetrahedron
from geodete.errors import ConsistencyError, InputError
from geodete.extend import (ExtensionResult, Theorem, check_relations, extend_thm2, select_thm1,
                            thm1_candidates, verify_free_kernel)
from geodete.permgroup import dihedral_analysis


def test_candidates_klein(klein_action):
    a1, a2, a3 = klein_action.images
    cands = thm1_candidates(klein_action)
    assert 4 <= len(cands) <= 6
    refl = set(dihedral_analysis(a1, a3).reflections)
    for c in cands:
        assert c.b in refl and c.b not in (a1, a2, a3)
        assert oracles.brute_order(oracles.mul(a1.images, c.b.images)) == 7
        assert oracles.brute_order(oracles.mul(a3.images, c.b.images)) == 7
        assert oracles.brute_order(oracles.mul(a2.images, c.b.images)) == c.x
    # a2 commutes with a1, so it is not a reflection of <a1, a3>: exactly a1, a3 excluded
    assert len(cands) == 5
    assert sorted(c.x for c in cands) == [3, 4, 4, 7, 7]


def test_excluded_reflection_collapses(klein_action):
    _, _, a3 = klein_action.images
    assert (a3 * a3).order() == 1  # b = a3 would give ord(a3 b) = 1, not 7


def test_candidates_need_237(a5_action):
    with pytest.raises(InputError):
        thm1_candidates(a5_action)


def test_extension_restricts_to_action(klein_t1, klein_action):
    assert tuple(klein_t1.psi_images[f] for f in ("r1", "r2", "r3")) == klein_action.images
    x = klein_t1.polyhedron.label("r2", "r4")
    assert ((klein_t1.psi_images["r2"] * klein_t1.psi_images["r4"]) ** x).is_identity()
    assert klein_t1.to_dict()["x"] == x


def test_every_klein_candidate_is_free(klein_candidates):
    assert all(c.kernel_free for c in klein_candidates)
    chosen = select_thm1(klein_candidates)
    assert chosen.polyhedron.label("r2", "r4") == 3


def test_transcript_complete(klein_t1):
    entries = {e.subset: e for e in klein_t1.freeness_transcript}
    # rank <= 2 subsets of a tetrahedron with no finite rank-3 vertex (x = 3)
    assert len(entries) == 1 + 4 + 6
    e = entries[("r1", "r3")]
    assert (e.abstract_order, e.image_order, e.injective) == (14, 14, True)


def test_engineered_collapse(klein_t1, klein_action):
    psi = dict(klein_t1.psi_images)
    psi["r4"] = psi["r2"]
    broken = verify_free_kernel(ExtensionResult(Theorem.T1, klein_t1.polyhedron, klein_t1.coxeter, psi,
                                                klein_action))
    assert broken.kernel_free is False
    bad = [e for e in broken.freeness_transcript if not e.injective]
    assert any(e.subset == ("r2", "r4") and e.image_order == 2 < e.abstract_order for e in bad)


def test_spherical_vertex_comparison(klein_action):
    """x = 2 with b = a1: every relation holds, and {r1,r2,r4} = [2,2,7] is compared exactly."""
    a1, a2, a3 = klein_action.images
    poly, cm = build_tetrahedron(2)
    psi = {"r1": a1, "r2": a2, "r3": a3, "r4": a1}
    check_relations(poly, psi)
    res = verify_free_kernel(ExtensionResult(Theorem.T1, poly, cm, psi, klein_action))
    entry = {e.subset: e for e in res.freeness_transcript}[("r1", "r2", "r4")]
    assert entry.abstract_order == 28
    assert entry.image_order == len(oracles.brute_closure([a1, a2])) == 4
    assert not res.kernel_free


def test_check_relations_rejects(klein_t1):
    psi = dict(klein_t1.psi_images)
    psi["r4"] = psi["r1"] * psi["r2"] * psi["r3"]
    with pytest.raises(ConsistencyError):
        check_relations(klein_t1.polyhedron, psi)


def test_thm2(klein_t2, klein_action):
    assert klein_t2.kernel_free
    assert klein_t2.group.subgroup(klein_t2.distinct_images()).order == klein_action.group.order
    for f in ("r1", "r2", "r3"):
        assert klein_t2.psi_images[f] == klein_t2.psi_images[f + "'"]
    # finite parabolics of the double cone: rank <= 1, the nine edges, and the two cone vertices
    ranks = sorted(len(e.subset) for e in klein_t2.freeness_transcript)
    assert ranks == [0] + [1] * 6 + [2] * 9


def test_thm2_battery():
    for name, action in oracles.battery_actions(400):
        assert extend_thm2(action).kernel_free, name
