"""Realizing labeled polyhedra in the hyperboloid model.

A polyhedron with face normals e_i in R^{3,1} (form diag(+,+,+,-)) is
encoded by its Gram matrix G_ij = <e_i, e_j>, with -cos(pi/m) for an edge
labeled m. A realization exists when G has signature (3,1) and rank 4.

For a tetrahedron every entry is a label. For the double cone the six
non-adjacent entries are unknown and solved for: G must have rank 4, and the
four faces at each equatorial vertex must share a common perpendicular
(their 4x4 principal minor vanishes).

Each Gram matrix carries a 50-digit copy next to the float one. The polar
of a 4-face vertex is square-root sensitive to that vertex minor
(det G_S = -det(E_S)^2), so normals and truncating planes are computed from
the precise copy and rounded at the end.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .coxeter import INF, LabeledPolyhedron, build_double_cone, build_tetrahedron
from .errors import InputError, RealizationError, SolverError

J = np.diag([1.0, 1.0, 1.0, -1.0])

SIGNATURE_TOL = 1e-9
SOLVE_TOL = 1e-10
VALIDATION_TOL = 1e-8
ORTHOGONALITY_TOL = 1e-9
UNIT_TOL = 1e-12
PRECISE_DPS = 50

SPHERICAL, IDEAL, HYPERIDEAL = "spherical", "ideal", "hyperideal"


def minkowski(u, v) -> float:
    return float(u[0] * v[0] + u[1] * v[1] + u[2] * v[2] - u[3] * v[3])


def label_cosine(m) -> float:
    return 0.0 if m == 2 else -math.cos(math.pi / m)


def _label_cosine_precise(m) -> mpmath.mpf:
    # cos(pi/2) is not exactly zero in floating point; right angles are
    return mpmath.mpf(0) if m == 2 else -mpmath.cos(mpmath.pi / m)


@dataclass
class GramMatrix:
    names: tuple[str, ...]
    matrix: np.ndarray
    provenance: dict = field(default_factory=dict)  # (i, j) -> ("labeled", m) | ("solved", k)
    solve_info: dict | None = None
    precise: mpmath.matrix | None = field(default=None, repr=False)

    def entry(self, f: str, g: str) -> float:
        return float(self.matrix[self.names.index(f), self.names.index(g)])

    def solved_entries(self) -> list[float]:
        solved = sorted((k, ij) for ij, (kind, k) in self.provenance.items() if kind == "solved")
        return [float(self.matrix[ij]) for _, ij in solved]

    def to_dict(self):
        out = {
            "faces": list(self.names),
            "matrix": [[float(v) for v in row] for row in self.matrix],
        }
        if self.solve_info is not None:
            out["solve"] = self.solve_info
        return out


def gram_from_polyhedron(poly: LabeledPolyhedron, unknowns=None) -> GramMatrix:
    """Labeled entries from the edges; non-adjacent pairs take ``unknowns`` in order."""
    n = len(poly.faces)
    provenance = {}
    k = 0
    with mpmath.workdps(PRECISE_DPS):
        P = mpmath.eye(n)
        for i, j in itertools.combinations(range(n), 2):
            m = poly.label(poly.faces[i], poly.faces[j])
            if m == INF:
                if unknowns is None:
                    raise InputError(f"{poly.name}: entry ({poly.faces[i]}, {poly.faces[j]}) is undetermined")
                P[i, j] = P[j, i] = mpmath.mpf(unknowns[k])
                provenance[(i, j)] = ("solved", k)
                k += 1
            else:
                P[i, j] = P[j, i] = _label_cosine_precise(m)
                provenance[(i, j)] = ("labeled", m)
    G = np.array(P.tolist(), dtype=float)
    return GramMatrix(tuple(poly.faces), G, provenance, precise=P)


def gram_tetrahedron(x: int) -> GramMatrix:
    poly, _ = build_tetrahedron(x)
    return gram_from_polyhedron(poly)


def signature(matrix: np.ndarray, tol: float = SIGNATURE_TOL) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts after scaling by the largest |eigenvalue|."""
    ev = np.linalg.eigvalsh(matrix)
    scale = np.abs(ev).max()
    if scale == 0:
        return 0, 0, len(ev)
    ev = ev / scale
    return int((ev > tol).sum()), int((ev < -tol).sum()), int((np.abs(ev) <= tol).sum())


def _canonical_sign(v):
    k = max(range(len(v)), key=lambda i: abs(v[i]))
    return v if v[k] > 0 else -v


@dataclass
class PolyhedronRealization:
    face_normals: dict[str, np.ndarray]
    vertex_classes: dict[str, str]
    truncating_planes: dict[str, np.ndarray]
    residual: float

    def to_dict(self):
        return {
            "face_normals": {f: [float(c) for c in v] for f, v in self.face_normals.items()},
            "vertex_classes": dict(self.vertex_classes),
            "truncating_planes": {v: [float(c) for c in n] for v, n in self.truncating_planes.items()},
            "residual": float(self.residual),
        }


def _precise(gram: GramMatrix) -> mpmath.matrix:
    if gram.precise is not None:
        return gram.precise
    return mpmath.matrix(gram.matrix.tolist())


def face_normals(gram: GramMatrix, tol: float = SIGNATURE_TOL) -> mpmath.matrix:
    """4 x n matrix E with E^T J E = G, columns are the face normals (50 digits)."""
    sig = signature(gram.matrix, tol)
    n = len(gram.names)
    if sig != (3, 1, n - 4):
        raise RealizationError(f"Gram matrix has signature {sig}, expected (3, 1, {n - 4})")
    with mpmath.workdps(PRECISE_DPS):
        ev, Q = mpmath.eigsy(_precise(gram))
        order = sorted(range(n), key=lambda k: ev[k], reverse=True)
        picks = [(k, 1) for k in order[:3]] + [(order[-1], -1)]
        E = mpmath.matrix(4, n)
        for row, (k, s) in enumerate(picks):
            vec = _canonical_sign(Q[:, k])
            scale = mpmath.sqrt(s * ev[k])
            for i in range(n):
                E[row, i] = scale * vec[i]
    return E


def _polar(E: mpmath.matrix, idx: list[int]) -> tuple[mpmath.matrix, mpmath.mpf]:
    """Unit-length (Euclidean) vector Minkowski-orthogonal to the given columns."""
    with mpmath.workdps(PRECISE_DPS):
        A = mpmath.matrix(len(idx), 4)
        for r, i in enumerate(idx):
            for c in range(4):
                A[r, c] = E[c, i] * (-1 if c == 3 else 1)
        _, _, V = mpmath.svd_r(A, full_matrices=True)
        n = V[3, :].T
        return n, n[0] ** 2 + n[1] ** 2 + n[2] ** 2 - n[3] ** 2


def classify_vertex(sub: np.ndarray, tol: float = SIGNATURE_TOL) -> str:
    ev = np.linalg.eigvalsh(sub)
    k = len(ev)
    pos, neg = int((ev > tol).sum()), int((ev < -tol).sum())
    if pos == k:
        return SPHERICAL
    if neg == 0:
        return IDEAL
    if neg == 1 and pos == 2:
        return HYPERIDEAL
    raise RealizationError(f"vertex submatrix has {pos} positive, {neg} negative eigenvalues")


def classify_and_realize(gram: GramMatrix, poly: LabeledPolyhedron,
                         tol: float = SIGNATURE_TOL) -> PolyhedronRealization:
    """Face normals, vertex classes, and unit polar normals of the truncating planes.

    Ideal vertices are rejected: none of the polyhedra handled here have them.
    """
    if tuple(poly.faces) != tuple(gram.names):
        raise InputError("Gram matrix and polyhedron disagree on the face list")
    E = face_normals(gram, tol)
    Ef = np.array(E.tolist(), dtype=float)
    normals = {f: Ef[:, i] for i, f in enumerate(poly.faces)}
    residual = float(np.abs(Ef.T @ J @ Ef - gram.matrix).max())
    classes, planes = {}, {}
    for v in poly.vertices:
        idx = [poly.faces.index(f) for f in v.faces]
        kind = classify_vertex(gram.matrix[np.ix_(idx, idx)], tol)
        if kind == IDEAL:
            raise RealizationError(f"vertex {v.name} is ideal; not supported")
        classes[v.name] = kind
        if kind == HYPERIDEAL:
            n, norm = _polar(E, idx)
            if norm <= tol:
                raise RealizationError(f"polar of vertex {v.name} is not spacelike (<n,n> = {float(norm):.3g})")
            with mpmath.workdps(PRECISE_DPS):
                n = _canonical_sign(n / mpmath.sqrt(norm))
            planes[v.name] = np.array([float(c) for c in n])
    return PolyhedronRealization(normals, classes, planes, residual)


def _cross_section_angle(ei, ej, n) -> float:
    pi_ = ei - minkowski(ei, n) * n
    pj = ej - minkowski(ej, n) * n
    c = -minkowski(pi_, pj) / math.sqrt(minkowski(pi_, pi_) * minkowski(pj, pj))
    return math.acos(max(-1.0, min(1.0, c)))


def validate_realization(real: PolyhedronRealization, gram: GramMatrix, poly: LabeledPolyhedron,
                         tol: float = VALIDATION_TOL, orth_tol: float = ORTHOGONALITY_TOL) -> dict:
    """Recheck a realization from its normals alone and describe each truncation.

    Raises ``RealizationError`` listing every violated pair.
    """
    problems = []
    worst_gram = worst_angle = worst_orth = 0.0
    for i, f in enumerate(poly.faces):
        for j, g in enumerate(poly.faces):
            if j < i:
                continue
            err = abs(minkowski(real.face_normals[f], real.face_normals[g]) - gram.matrix[i, j])
            worst_gram = max(worst_gram, err)
            if err > (UNIT_TOL if i == j else tol):
                problems.append(f"<{f},{g}> off by {err:.3g}")
    for (f, g), m in poly.edges:
        c = -minkowski(real.face_normals[f], real.face_normals[g])
        err = abs(math.acos(max(-1.0, min(1.0, c))) - math.pi / m)
        worst_angle = max(worst_angle, err)
        if err > tol:
            problems.append(f"angle at edge ({f},{g}) off by {err:.3g}")

    sections = []
    for v in poly.vertices:
        vtype = [int(m) for m in poly.vertex_type(v)]
        entry = {"vertex": v.name, "class": real.vertex_classes[v.name], "type": vtype}
        n = real.truncating_planes.get(v.name)
        if n is not None:
            if abs(minkowski(n, n) - 1) > orth_tol:
                problems.append(f"truncating plane of {v.name} is not unit spacelike")
            for f in v.faces:
                err = abs(minkowski(n, real.face_normals[f]))
                worst_orth = max(worst_orth, err)
                if err > orth_tol:
                    problems.append(f"<n_{v.name},{f}> = {err:.3g}")
            k = len(v.faces)
            angles = [_cross_section_angle(real.face_normals[v.faces[i]],
                                           real.face_normals[v.faces[(i + 1) % k]], n)
                      for i in range(k)]
            for a, m in zip(angles, vtype):
                if abs(a - math.pi / m) > tol:
                    problems.append(f"cross-section angle at {v.name} off by {abs(a - math.pi / m):.3g}")
            entry["shape"] = {3: "triangle", 4: "quadrilateral"}.get(k, f"{k}-gon")
            entry["angles"] = angles
        sections.append(entry)
    if problems:
        raise RealizationError("realization failed validation: " + "; ".join(problems))
    return {
        "max_gram_error": worst_gram,
        "max_angle_error": worst_angle,
        "max_orthogonality_error": worst_orth,
        "cross_sections": sections,
        "tolerances": {"validation": tol, "orthogonality": orth_tol},
    }


# --- double cone solve -------------------------------------------------------

class _RankSystem:
    """Residuals and analytic Jacobian for the double-cone unknowns.

    Residuals are the six 5x5 principal minors and the 4x4 minors of the
    equatorial vertices. The full determinant vanishes to second order at
    rank 4, so it is reported but not driven.
    """

    def __init__(self, poly: LabeledPolyhedron):
        self.poly = poly
        n = len(poly.faces)
        self.base = gram_from_polyhedron(poly, unknowns=[0.0] * len(poly.non_adjacent_pairs()))
        self.unknown_pairs = sorted((k, ij) for ij, (kind, k) in self.base.provenance.items()
                                    if kind == "solved")
        self.unknown_pairs = [ij for _, ij in self.unknown_pairs]
        self.rank_sets = [tuple(i for i in range(n) if i != k) for k in range(n)]
        self.vertex_sets = [tuple(sorted(poly.faces.index(f) for f in v.faces))
                            for v in poly.vertices if len(v.faces) == 4]

    def matrix(self, c) -> np.ndarray:
        G = self.base.matrix.copy()
        for (i, j), v in zip(self.unknown_pairs, c):
            G[i, j] = G[j, i] = v
        return G

    def residuals(self, c) -> tuple[np.ndarray, np.ndarray]:
        G = self.matrix(c)
        sets = self.rank_sets + self.vertex_sets
        r = np.empty(len(sets))
        jac = np.zeros((len(sets), len(c)))
        for row, S in enumerate(sets):
            sub = G[np.ix_(S, S)]
            r[row] = np.linalg.det(sub)
            for col, (i, j) in enumerate(self.unknown_pairs):
                if i in S and j in S:
                    a, b = S.index(i), S.index(j)
                    minor = np.delete(np.delete(sub, a, 0), b, 1)
                    jac[row, col] = 2 * (-1) ** (a + b) * np.linalg.det(minor)
        return r, jac

    def residuals_precise(self, c) -> tuple[mpmath.matrix, mpmath.matrix]:
        G = gram_from_polyhedron(self.poly, unknowns=list(c)).precise
        sets = self.rank_sets + self.vertex_sets
        r = mpmath.matrix(len(sets), 1)
        jac = mpmath.matrix(len(sets), len(c))
        for row, S in enumerate(sets):
            sub = G.__class__([[G[i, j] for j in S] for i in S])
            r[row] = mpmath.det(sub)
            for col, (i, j) in enumerate(self.unknown_pairs):
                if i in S and j in S:
                    a, b = S.index(i), S.index(j)
                    minor = G.__class__([[sub[x, y] for y in range(len(S)) if y != b]
                                         for x in range(len(S)) if x != a])
                    jac[row, col] = 2 * (-1) ** (a + b) * mpmath.det(minor)
        return r, jac


def _newton_polish(system: _RankSystem, c: np.ndarray, steps: int = 30) -> list:
    """Gauss-Newton on the (consistent) residual system at 50 digits."""
    with mpmath.workdps(PRECISE_DPS):
        x = mpmath.matrix([mpmath.mpf(float(v)) for v in c])
        target = mpmath.mpf(10) ** (10 - PRECISE_DPS)
        for _ in range(steps):
            r, jac = system.residuals_precise(x)
            if max(abs(v) for v in r) < target:
                break
            x += mpmath.lu_solve(jac.T * jac, -(jac.T * r))
        return [x[i] for i in range(len(c))]


def _levenberg_marquardt(system: _RankSystem, t0: np.ndarray, tol: float, max_iter: int):
    """Damped Gauss-Newton in t, with unknowns c = -cosh(t) so every c stays <= -1."""

    def evaluate(t):
        with np.errstate(over="ignore", invalid="ignore"):
            r, jac = system.residuals(-np.cosh(t))
            return r, jac * -np.sinh(t)

    t = t0.copy()
    r, jac = evaluate(t)
    cost = float(r @ r)
    lam = 1e-3
    for _ in range(max_iter):
        if np.abs(r).max() < tol * 1e-3:
            break
        A = jac.T @ jac
        g = jac.T @ r
        try:
            step = np.linalg.solve(A + lam * (np.diag(np.diag(A)) + 1e-12 * np.eye(len(t))), -g)
        except np.linalg.LinAlgError:
            lam *= 10
            continue
        r_new, jac_new = evaluate(t + step)
        with np.errstate(over="ignore", invalid="ignore"):
            cost_new = float(r_new @ r_new)
        if np.isfinite(cost_new) and cost_new < cost:
            t, r, jac, cost = t + step, r_new, jac_new, cost_new
            lam = max(lam / 3, 1e-12)
        else:
            lam *= 4
            if lam > 1e12:
                break
    return -np.cosh(t), r


def solve_double_cone_gram(p: int, q: int, r: int, seed: int = 0, tol: float = SOLVE_TOL,
                           max_restarts: int = 20, t0: float = 1.0, max_iter: int = 500) -> GramMatrix:
    """Solve for the six non-adjacent Gram entries of the double cone.

    Restart 0 starts every unknown at -cosh(t0); later restarts draw
    per-entry multiplicative perturbations of t0 from a generator seeded with
    ``seed``, so the result is reproducible. A solution is accepted when all
    minors are below ``tol``, the signature is (3,1), and every solved entry
    is <= -1 (non-adjacent faces are ultraparallel).
    """
    poly, _ = build_double_cone(p, q, r)
    system = _RankSystem(poly)
    rng = np.random.default_rng(seed)
    nunk = len(system.unknown_pairs)
    best = math.inf
    wrong_branch = 0
    for attempt in range(max_restarts + 1):
        if attempt == 0:
            t = np.full(nunk, t0)
        else:
            t = t0 * np.exp(rng.normal(0.0, 0.5, nunk))
        c, res = _levenberg_marquardt(system, t, tol, max_iter)
        worst = float(np.abs(res).max())
        best = min(best, worst)
        if worst >= tol:
            continue
        G = system.matrix(c)
        if signature(G) != (3, 1, 2):
            continue
        if np.any(c > -1):
            wrong_branch += 1
            continue
        gram = gram_from_polyhedron(poly, unknowns=_newton_polish(system, c))
        final, _ = system.residuals(gram.solved_entries())
        nminor = len(system.rank_sets)
        gram.solve_info = {
            "seed": seed,
            "restart": attempt,
            "t0": t0,
            "tolerance": tol,
            "lm_residual": worst,
            "max_principal_minor": float(np.abs(final[:nminor]).max()),
            "determinant": float(abs(np.linalg.det(gram.matrix))),
            "max_vertex_minor": float(np.abs(final[nminor:]).max()),
            "unknown_pairs": [[poly.faces[i], poly.faces[j]] for i, j in system.unknown_pairs],
            "solved_entries": gram.solved_entries(),
        }
        return gram
    if wrong_branch:
        raise RealizationError(
            f"double cone {(p, q, r)}: converged only to solutions with an entry > -1 "
            f"({wrong_branch} times); geometrically inconsistent"
        )
    raise SolverError(f"double cone {(p, q, r)}: no convergence after {max_restarts} restarts", best)
