"""Finite permutation groups by brute-force closure.

Everything here is exact and small: groups are enumerated breadth-first into
a hash set, which is fine up to a few hundred thousand elements. There is no
stabilizer chain machinery.

Composition convention: ``g * h`` is ``g∘h``, i.e. apply ``h`` first.
"""
from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, Sequence

from .errors import InputError, ResourceLimitError

DEFAULT_ENUMERATION_BOUND = 10**6
DEFAULT_PRIME_BOUND = 31
BOUND_ENV_VAR = "GEODETE_MAX_GROUP_ORDER"


def enumeration_bound() -> int:
    """Default bound on enumerated group orders, overridable from the environment."""
    value = os.environ.get(BOUND_ENV_VAR)
    if value is None:
        return DEFAULT_ENUMERATION_BOUND
    try:
        bound = int(value)
    except ValueError:
        raise InputError(f"{BOUND_ENV_VAR} must be an integer, got {value!r}") from None
    if bound < 1:
        raise InputError(f"{BOUND_ENV_VAR} must be positive")
    return bound


@dataclass(frozen=True, order=True, slots=True)
class Permutation:
    """A bijection of ``{0, ..., degree-1}`` stored as its image list.

    Ordering is lexicographic on ``images``; searches rely on it for
    canonical choices.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise InputError(f"not a permutation: {list(self.images)}")

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> Permutation:
        images = list(range(degree))
        seen = set()
        for cycle in cycles:
            for i, point in enumerate(cycle):
                if not 0 <= point < degree or point in seen:
                    raise InputError(f"bad cycle {tuple(cycle)} for degree {degree}")
                seen.add(point)
                images[point] = cycle[(i + 1) % len(cycle)]
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: Permutation) -> Permutation:
        if len(other.images) != len(self.images):
            raise InputError(f"degree mismatch: {self.degree} vs {other.degree}")
        g = self.images
        return Permutation(tuple(g[j] for j in other.images))

    def __call__(self, point: int) -> int:
        return self.images[point]

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def __pow__(self, n: int) -> Permutation:
        if n < 0:
            return self.inverse() ** (-n)
        result = Permutation.identity(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self, g: Permutation) -> Permutation:
        """Return ``g self g^-1``."""
        return g * self * g.inverse()

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cycle = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cycle.append(j)
                seen[j] = True
                j = self.images[j]
            out.append(tuple(cycle))
        return out

    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles()), 1)

    def __repr__(self):
        nontrivial = [c for c in self.cycles() if len(c) > 1]
        if not nontrivial:
            return f"Permutation(id, degree={self.degree})"
        return "Permutation(" + "".join("(" + " ".join(map(str, c)) + ")" for c in nontrivial) + ")"


def compose_and_order(g: Permutation, h: Permutation) -> tuple[Permutation, int]:
    """Product ``g∘h`` together with its order (lcm of cycle lengths)."""
    product = g * h
    return product, product.order()


class GeneratedGroup:
    """Subgroup of a symmetric group given by generators.

    Elements are enumerated lazily, in breadth-first order from the identity,
    the first time they are needed.
    """

    def __init__(self, degree: int, generators: Iterable[Permutation], bound: int | None = None):
        self.degree = degree
        self.generators = tuple(generators)
        for g in self.generators:
            if g.degree != degree:
                raise InputError(f"generator {g!r} has degree {g.degree}, expected {degree}")
        self.bound = enumeration_bound() if bound is None else bound

    @cached_property
    def _closure(self) -> tuple[tuple[Permutation, ...], frozenset[Permutation]]:
        identity = Permutation.identity(self.degree)
        seen = {identity}
        order = [identity]
        queue = deque([identity])
        gens = [g.images for g in self.generators]
        while queue:
            x = queue.popleft().images
            for g in gens:
                y = Permutation(tuple(x[j] for j in g))
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    queue.append(y)
                    if len(seen) > self.bound:
                        raise ResourceLimitError(
                            f"group closure exceeds enumeration bound {self.bound}"
                        )
        return tuple(order), frozenset(seen)

    @property
    def elements(self) -> tuple[Permutation, ...]:
        return self._closure[0]

    @property
    def order(self) -> int:
        return len(self._closure[0])

    def __len__(self):
        return self.order

    def __contains__(self, g: Permutation) -> bool:
        return g in self._closure[1]

    def __iter__(self):
        return iter(self.elements)

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    @cached_property
    def involutions(self) -> tuple[Permutation, ...]:
        """Elements of order exactly 2, sorted lexicographically."""
        return tuple(sorted(g for g in self.elements if not g.is_identity() and (g * g).is_identity()))

    def subgroup(self, generators: Iterable[Permutation]) -> GeneratedGroup:
        return GeneratedGroup(self.degree, generators, bound=self.bound)

    def conjugacy_class(self, x: Permutation) -> frozenset[Permutation]:
        return frozenset(x.conjugate(g) for g in self.elements)

    def centralizer_order(self, x: Permutation) -> int:
        return sum(1 for g in self.elements if g * x == x * g)

    def __repr__(self):
        return f"GeneratedGroup(degree={self.degree}, ngens={len(self.generators)})"


def generate(degree: int, generators: Iterable[Permutation], bound: int | None = None) -> GeneratedGroup:
    """Build the group and enumerate it immediately, so bound errors surface here."""
    group = GeneratedGroup(degree, generators, bound=bound)
    group.elements
    return group


@dataclass(frozen=True)
class DihedralData:
    rotation_order: int
    subgroup_order: int
    reflections: tuple[Permutation, ...]
    is_faithful_dihedral: bool


def dihedral_analysis(a: Permutation, b: Permutation) -> DihedralData:
    """Structure of the group generated by two involutions.

    The reflections are listed as ``(ab)^k a`` for ``k = 0..n-1`` where ``n``
    is the order of ``ab``; the subgroup order comes from an actual closure.
    """
    for name, t in (("a", a), ("b", b)):
        if t.is_identity() or not (t * t).is_identity():
            raise InputError(f"{name} is not an involution: {t!r}")
    rotation, n = compose_and_order(a, b)
    reflections = []
    power = Permutation.identity(a.degree)
    for _ in range(n):
        reflections.append(power * a)
        power = power * rotation
    subgroup_order = generate(a.degree, [a, b]).order
    return DihedralData(n, subgroup_order, tuple(reflections), subgroup_order == 2 * n)


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def _primitive_root(q: int) -> int:
    factors = [d for d in range(2, q) if (q - 1) % d == 0 and is_prime(d)]
    for w in range(2, q):
        if all(pow(w, (q - 1) // d, q) != 1 for d in factors):
            return w
    return 1


def _mobius(q: int, a: int, b: int, c: int, d: int) -> Permutation:
    """The map z -> (az+b)/(cz+d) on the projective line {0..q-1, inf=q}."""
    inf = q
    images = []
    for z in range(q + 1):
        if z == inf:
            num, den = a % q, c % q
        else:
            num, den = (a * z + b) % q, (c * z + d) % q
        images.append(inf if den == 0 else num * pow(den, -1, q) % q)
    return Permutation(tuple(images))


def projective_group(q: int, kind: str = "PSL", prime_bound: int = DEFAULT_PRIME_BOUND,
                     bound: int | None = None) -> GeneratedGroup:
    """PSL(2,q) or PGL(2,q) acting on the q+1 points of the projective line.

    Point ``q`` is infinity. PSL is generated by z+1 and -1/z; PGL adds
    z -> wz for a primitive root w.
    """
    kind = kind.upper()
    if kind not in ("PSL", "PGL"):
        raise InputError(f"kind must be PSL or PGL, got {kind!r}")
    if not is_prime(q):
        raise InputError(f"q = {q} is not prime")
    if q > prime_bound:
        raise InputError(f"q = {q} exceeds configured bound {prime_bound}")
    gens = [_mobius(q, 1, 1, 0, 1), _mobius(q, 0, -1, 1, 0)]
    if kind == "PGL":
        w = _primitive_root(q)
        if w != 1:
            gens.append(_mobius(q, w, 0, 0, 1))
    return generate(q + 1, gens, bound=bound)


def direct_product(g: GeneratedGroup, h: GeneratedGroup, bound: int | None = None) -> GeneratedGroup:
    """G x H acting on the disjoint union of the two point sets."""
    n, m = g.degree, h.degree

    def left(x):
        return Permutation(x.images + tuple(range(n, n + m)))

    def right(y):
        return Permutation(tuple(range(n)) + tuple(n + j for j in y.images))

    gens = [left(x) for x in g.generators] + [right(y) for y in h.generators]
    return generate(n + m, gens, bound=bound)


def z2_character(group: GeneratedGroup, marked: Sequence[Permutation]) -> dict[Permutation, int] | None:
    """The homomorphism ``group -> {+1, -1}`` sending every marked element to -1.

    The candidate kernel is the subgroup of even-length words in the marked
    elements; the character exists iff that subgroup has index 2.
    """
    marked = list(marked)
    if not marked:
        raise InputError("no marked elements")
    for m in marked:
        if m not in group:
            raise InputError(f"marked element {m!r} is not in the group")
    if group.subgroup(marked).order != group.order:
        raise InputError("marked elements do not generate the group")
    even = group.subgroup([x * y for x in marked for y in marked])
    if 2 * even.order != group.order:
        return None
    return {g: (1 if g in even else -1) for g in group.elements}
