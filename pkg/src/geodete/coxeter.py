"""Labeled polyhedra and the Coxeter systems of their face reflections.

Two combinatorial types are used: a tetrahedron seen as a cone over a
triangle, and a double cone over a triangle. Face pairs that do not share an
edge get Coxeter label infinity (no relation).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConsistencyError, InputError, UnsupportedError

INF = math.inf
PD_TOL = 1e-10


@dataclass(frozen=True)
class Vertex:
    name: str
    faces: tuple[str, ...]  # cyclic order around the vertex


@dataclass(frozen=True)
class LabeledPolyhedron:
    name: str
    faces: tuple[str, ...]
    edges: tuple[tuple[tuple[str, str], int], ...]
    vertices: tuple[Vertex, ...]

    def __post_init__(self):
        pairs = [frozenset(pair) for pair, _ in self.edges]
        if any(len(p) != 2 for p in pairs):
            raise InputError(f"{self.name}: edge with coincident faces")
        if len(set(pairs)) != len(pairs):
            raise InputError(f"{self.name}: duplicate edge")
        if any(f not in self.faces for p in pairs for f in p):
            raise InputError(f"{self.name}: edge references unknown face")
        if any(m < 2 for _, m in self.edges):
            raise InputError(f"{self.name}: edge labels must be >= 2")
        if len(self.vertices) - len(self.edges) + len(self.faces) != 2:
            raise InputError(f"{self.name}: Euler relation fails")
        endpoints = {p: 0 for p in pairs}
        for v in self.vertices:
            k = len(v.faces)
            for i in range(k):
                pair = frozenset((v.faces[i], v.faces[(i + 1) % k]))
                if pair not in endpoints:
                    raise InputError(f"{self.name}: vertex {v.name} faces {sorted(pair)} share no edge")
                endpoints[pair] += 1
        if any(n != 2 for n in endpoints.values()):
            raise InputError(f"{self.name}: every edge needs exactly two endpoints")

    def label(self, f: str, g: str) -> float:
        """Edge label between two faces, or infinity if they are not adjacent."""
        key = frozenset((f, g))
        for pair, m in self.edges:
            if frozenset(pair) == key:
                return m
        return INF

    def vertex_type(self, v: Vertex) -> tuple[int, ...]:
        k = len(v.faces)
        return tuple(self.label(v.faces[i], v.faces[(i + 1) % k]) for i in range(k))

    def non_adjacent_pairs(self) -> list[tuple[str, str]]:
        return [(f, g) for f, g in itertools.combinations(self.faces, 2) if self.label(f, g) == INF]

    def presentation(self) -> list[str]:
        """Coxeter relators, involutions first, then one per edge in stored order."""
        rels = [f"{f}^2" for f in self.faces]
        rels += [f"({f}{g})^{m}" for (f, g), m in self.edges]
        return rels

    def to_dict(self):
        return {
            "name": self.name,
            "faces": list(self.faces),
            "edges": [{"faces": list(pair), "label": m} for pair, m in self.edges],
            "vertices": [
                {"name": v.name, "faces": list(v.faces), "type": list(self.vertex_type(v))}
                for v in self.vertices
            ],
        }


@dataclass(frozen=True)
class CoxeterMatrix:
    names: tuple[str, ...]
    m: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        n = len(self.names)
        if len(self.m) != n or any(len(row) != n for row in self.m):
            raise InputError("Coxeter matrix shape does not match generator count")
        for i in range(n):
            if self.m[i][i] != 1:
                raise InputError("Coxeter matrix diagonal must be 1")
            for j in range(i + 1, n):
                if self.m[i][j] != self.m[j][i] or self.m[i][j] < 2:
                    raise InputError(f"bad Coxeter entry at ({i}, {j})")

    @property
    def rank(self) -> int:
        return len(self.names)

    @classmethod
    def from_polyhedron(cls, poly: LabeledPolyhedron) -> CoxeterMatrix:
        faces = poly.faces
        m = tuple(
            tuple(1 if i == j else poly.label(f, g) for j, g in enumerate(faces))
            for i, f in enumerate(faces)
        )
        return cls(faces, m)

    def cosine_matrix(self, subset=None) -> np.ndarray:
        idx = range(self.rank) if subset is None else subset
        return np.array([[-math.cos(math.pi / self.m[i][j]) for j in idx] for i in idx])


def build_tetrahedron(x: int) -> tuple[LabeledPolyhedron, CoxeterMatrix]:
    """Cone over a triangle: cone vertex [2,3,7], fourth face r4 with labels 7, x, 7."""
    if not isinstance(x, int) or x < 2:
        raise InputError(f"x must be an integer >= 2, got {x!r}")
    poly = LabeledPolyhedron(
        name=f"tetrahedron(x={x})",
        faces=("r1", "r2", "r3", "r4"),
        edges=(
            (("r1", "r2"), 2),
            (("r2", "r3"), 3),
            (("r3", "r1"), 7),
            (("r1", "r4"), 7),
            (("r2", "r4"), x),
            (("r3", "r4"), 7),
        ),
        vertices=(
            Vertex("cone", ("r1", "r2", "r3")),
            Vertex("v234", ("r4", "r2", "r3")),
            Vertex("v134", ("r1", "r3", "r4")),
            Vertex("v124", ("r4", "r2", "r1")),
        ),
    )
    return poly, CoxeterMatrix.from_polyhedron(poly)


def is_hyperbolic_signature(p: int, q: int, r: int) -> bool:
    return Fraction(1, p) + Fraction(1, q) + Fraction(1, r) < 1


def build_double_cone(p: int, q: int, r: int) -> tuple[LabeledPolyhedron, CoxeterMatrix]:
    """Double cone over a triangle with upper faces r1,r2,r3 and lower r1',r2',r3'."""
    if any(not isinstance(v, int) or v < 2 for v in (p, q, r)):
        raise InputError(f"labels must be integers >= 2, got {(p, q, r)}")
    if not is_hyperbolic_signature(p, q, r):
        raise InputError(f"signature {(p, q, r)} is not hyperbolic")
    poly = LabeledPolyhedron(
        name=f"double_cone({p},{q},{r})",
        faces=("r1", "r2", "r3", "r1'", "r2'", "r3'"),
        edges=(
            (("r1", "r2"), p),
            (("r2", "r3"), q),
            (("r3", "r1"), r),
            (("r1'", "r2'"), p),
            (("r2'", "r3'"), q),
            (("r3'", "r1'"), r),
            (("r1", "r2'"), p),
            (("r2", "r3'"), q),
            (("r3", "r1'"), r),
        ),
        vertices=(
            Vertex("upper", ("r1", "r2", "r3")),
            Vertex("lower", ("r1'", "r2'", "r3'")),
            Vertex("eq12", ("r2'", "r1", "r2", "r3'")),
            Vertex("eq23", ("r3'", "r2", "r3", "r1'")),
            Vertex("eq31", ("r1'", "r3", "r1", "r2'")),
        ),
    )
    return poly, CoxeterMatrix.from_polyhedron(poly)


@dataclass(frozen=True)
class ParabolicSubset:
    indices: tuple[int, ...]
    names: tuple[str, ...]
    finite: bool
    abstract_order: float  # int when finite, INF otherwise
    blocks: tuple[str, ...] = ()


_RANK3_BLOCKS = {(3, 3): ("A3", 24), (3, 4): ("B3", 48), (3, 5): ("H3", 120)}


def _components(cm: CoxeterMatrix, subset: tuple[int, ...]) -> list[tuple[int, ...]]:
    left = set(subset)
    comps = []
    while left:
        stack = [min(left)]
        comp = set(stack)
        left -= comp
        while stack:
            i = stack.pop()
            for j in list(left):
                if cm.m[i][j] >= 3:
                    left.discard(j)
                    comp.add(j)
                    stack.append(j)
        comps.append(tuple(sorted(comp)))
    return comps


def _block_order(cm: CoxeterMatrix, block: tuple[int, ...]) -> tuple[str, int]:
    names = "{" + ",".join(cm.names[i] for i in block) + "}"
    if len(block) == 1:
        return "A1", 2
    if len(block) == 2:
        m = cm.m[block[0]][block[1]]
        return f"I2({m})", 2 * m
    if len(block) == 3:
        labels = sorted(cm.m[i][j] for i, j in itertools.combinations(block, 2))
        if labels[0] == 2 and tuple(labels[1:]) in _RANK3_BLOCKS:
            return _RANK3_BLOCKS[tuple(labels[1:])]
    raise UnsupportedError(f"finite block {names} is not in the supported table")


def _exact_finiteness(cm: CoxeterMatrix, subset: tuple[int, ...]) -> bool | None:
    if len(subset) <= 1:
        return True
    if len(subset) == 2:
        return cm.m[subset[0]][subset[1]] != INF
    if len(subset) == 3:
        s = sum(Fraction(0) if cm.m[i][j] == INF else Fraction(1, cm.m[i][j])
                for i, j in itertools.combinations(subset, 2))
        return s > 1
    return None


def classify_subset(cm: CoxeterMatrix, subset: tuple[int, ...]) -> ParabolicSubset:
    names = tuple(cm.names[i] for i in subset)
    if subset:
        finite = bool(np.linalg.eigvalsh(cm.cosine_matrix(subset)).min() > PD_TOL)
    else:
        finite = True
    exact = _exact_finiteness(cm, subset)
    if exact is not None and exact != finite:
        raise ConsistencyError(f"finiteness of {names}: eigenvalue test {finite}, exact test {exact}")
    if not finite:
        return ParabolicSubset(subset, names, False, INF)
    blocks = [_block_order(cm, b) for b in _components(cm, subset)]
    return ParabolicSubset(subset, names, True, math.prod(o for _, o in blocks), tuple(b for b, _ in blocks))


def parabolic_subsets(cm: CoxeterMatrix) -> list[ParabolicSubset]:
    """All generator subsets, ordered by size and then lexicographically."""
    if cm.rank > 8:
        raise InputError(f"rank {cm.rank} exceeds 8")
    return [
        classify_subset(cm, subset)
        for k in range(cm.rank + 1)
        for subset in itertools.combinations(range(cm.rank), k)
    ]


def finite_parabolics(cm: CoxeterMatrix) -> list[ParabolicSubset]:
    return [s for s in parabolic_subsets(cm) if s.finite]
