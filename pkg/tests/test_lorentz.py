import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from geodete.coxeter import build_double_cone, build_tetrahedron, is_hyperbolic_signature
from geodete.errors import RealizationError, SolverError
from geodete.lorentz import (HYPERIDEAL, SPHERICAL, J, classify_and_realize, classify_vertex, gram_tetrahedron,
                             minkowski, signature, solve_double_cone_gram, validate_realization)

DOUBLE_CONE_SET = [(2, 3, 7), (2, 3, 8), (2, 4, 5), (3, 3, 4)]


def test_gram_tetrahedron_entries():
    g2 = gram_tetrahedron(2)
    assert g2.entry("r1", "r2") == 0.0 and g2.entry("r2", "r4") == 0.0
    g7 = gram_tetrahedron(7)
    c7 = -math.cos(math.pi / 7)
    assert math.isclose(c7, -0.9009688679, abs_tol=1e-10)
    assert sum(math.isclose(v, c7) for v in g7.matrix[np.triu_indices(4, 1)]) == 4
    assert np.allclose(np.diag(g7.matrix), 1) and np.allclose(g7.matrix, g7.matrix.T)


@pytest.mark.parametrize("x", range(2, 11))
def test_tetrahedron_realization(x):
    gram = gram_tetrahedron(x)
    assert signature(gram.matrix, 1e-9) == (3, 1, 0)
    poly, _ = build_tetrahedron(x)
    real = classify_and_realize(gram, poly)
    assert real.vertex_classes["cone"] == HYPERIDEAL
    assert (real.vertex_classes["v124"] == SPHERICAL) == (x == 2)
    assert ("v124" in real.truncating_planes) == (x > 2)
    report = validate_realization(real, gram, poly)
    assert report["max_angle_error"] < 1e-8
    assert report["max_orthogonality_error"] < 1e-9


def test_cone_vertex_determinant():
    gram = gram_tetrahedron(7)
    det = np.linalg.det(gram.matrix[:3, :3])
    assert det == pytest.approx(oracles.cone_determinant(), abs=1e-12)
    assert det == pytest.approx(-0.0617449009, abs=1e-9)
    assert classify_vertex(gram.matrix[:3, :3]) == HYPERIDEAL


def test_all_hyperideal_at_x7():
    poly, _ = build_tetrahedron(7)
    real = classify_and_realize(gram_tetrahedron(7), poly)
    assert set(real.vertex_classes.values()) == {HYPERIDEAL}
    assert len(real.truncating_planes) == 4


def test_normals_reproduce_gram():
    gram = gram_tetrahedron(4)
    poly, _ = build_tetrahedron(4)
    real = classify_and_realize(gram, poly)
    E = np.column_stack([real.face_normals[f] for f in poly.faces])
    assert np.abs(E.T @ J @ E - gram.matrix).max() < 1e-12
    for v, n in real.truncating_planes.items():
        assert minkowski(n, n) == pytest.approx(1.0, abs=1e-12)


def test_angle_r3_r1():
    gram = gram_tetrahedron(5)
    poly, _ = build_tetrahedron(5)
    real = classify_and_realize(gram, poly)
    c = -minkowski(real.face_normals["r3"], real.face_normals["r1"])
    assert abs(math.acos(c) - math.pi / 7) < 1e-8


def test_validation_catches_tampering():
    gram = gram_tetrahedron(5)
    poly, _ = build_tetrahedron(5)
    real = classify_and_realize(gram, poly)
    real.face_normals["r1"] = real.face_normals["r1"] * 1.001
    with pytest.raises(RealizationError, match="r1"):
        validate_realization(real, gram, poly)


@pytest.mark.parametrize("pqr", DOUBLE_CONE_SET)
def test_double_cone_solve(pqr):
    gram = solve_double_cone_gram(*pqr, seed=0)
    info = gram.solve_info
    assert info["max_principal_minor"] < 1e-10 and info["max_vertex_minor"] < 1e-10
    assert all(c <= -1 for c in gram.solved_entries())
    assert np.allclose(gram.matrix, gram.matrix.T) and np.allclose(np.diag(gram.matrix), 1)
    assert signature(gram.matrix) == (3, 1, 2)
    poly, _ = build_double_cone(*pqr)
    real = classify_and_realize(gram, poly)
    report = validate_realization(real, gram, poly)
    assert report["max_angle_error"] < 1e-8
    assert set(real.vertex_classes.values()) == {HYPERIDEAL}
    shapes = {s["vertex"]: s["shape"] for s in report["cross_sections"]}
    assert shapes == {"upper": "triangle", "lower": "triangle", "eq12": "quadrilateral",
                      "eq23": "quadrilateral", "eq31": "quadrilateral"}


def test_double_cone_deterministic():
    a = solve_double_cone_gram(2, 4, 5, seed=3)
    b = solve_double_cone_gram(2, 4, 5, seed=3)
    assert a.solved_entries() == b.solved_entries()
    assert a.solve_info == b.solve_info


def test_solver_error_when_no_budget():
    with pytest.raises(SolverError) as exc:
        solve_double_cone_gram(2, 3, 7, max_restarts=0, max_iter=1)
    assert exc.value.best_residual > 0


hyperbolic = st.tuples(st.integers(2, 9), st.integers(2, 9), st.integers(2, 9)).filter(
    lambda t: is_hyperbolic_signature(*t))


@settings(max_examples=6)
@given(hyperbolic)
def test_double_cone_random_signatures(pqr):
    gram = solve_double_cone_gram(*pqr)
    poly, _ = build_double_cone(*pqr)
    report = validate_realization(classify_and_realize(gram, poly), gram, poly)
    assert report["max_angle_error"] < 1e-8


def test_x27_vertex_monotone_up_to_50():
    for x in range(2, 51):
        gram = gram_tetrahedron(x)
        idx = [0, 1, 3]  # faces r1, r2, r4 meet at the [x,2,7] vertex
        spherical = classify_vertex(gram.matrix[np.ix_(idx, idx)]) == SPHERICAL
        assert spherical == (1 / x + 1 / 2 + 1 / 7 > 1) == (x == 2)
