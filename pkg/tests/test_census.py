import json
from fractions import Fraction
from importlib import resources

import jsonschema
import pytest

from geodete.census import (Certificate, boundary_census, census_identities, certificate_document,
                            corollary_constructions, dumps, emit_certificate, orientability_3d,
                            truncated_orbifold_euler, vertex_orbifold_euler)
from geodete.coxeter import build_tetrahedron
from geodete.errors import EmissionError, InputError
from geodete.extend import Theorem, extend_thm2
from geodete.jobs import catalog_job
from geodete.lorentz import HYPERIDEAL, SPHERICAL
from geodete.pipeline import run_job
from geodete.surface import lift_double_cover

T1_CLASSES = {"cone": HYPERIDEAL, "v234": HYPERIDEAL, "v134": HYPERIDEAL, "v124": HYPERIDEAL}
T2_CLASSES = {v: HYPERIDEAL for v in ("upper", "lower", "eq12", "eq23", "eq31")}


@pytest.fixture(scope="module")
def klein_run():
    return run_job(catalog_job("klein-pgl27"))


def test_vertex_orbifold_euler():
    assert vertex_orbifold_euler((2, 3, 7)) == Fraction(-1, 84)
    assert vertex_orbifold_euler((7, 7, 7)) == Fraction(1, 2) * (-1 + Fraction(3, 7)) == Fraction(-2, 7)
    assert vertex_orbifold_euler((2, 2, 3, 3)) == -1 + Fraction(5, 6)


def test_klein_census(klein_t1):
    reports = {r.vertex: r for r in boundary_census(klein_t1, T1_CLASSES)}
    cone = reports["cone"]
    assert (cone.orbifold_euler, cone.total_euler, cone.component_count, cone.per_component_euler) == \
        (Fraction(-1, 84), -4, 1, 2 - 2 * 3)
    v = reports["v134"]
    a1, a3, b = (klein_t1.psi_images[f] for f in ("r1", "r3", "r4"))
    assert klein_t1.group.subgroup([a1, a3, b]).order == 14
    assert (v.total_euler, v.component_count, v.per_component_euler) == (-96, 24, -4)
    assert v.assumption and v.to_dict()["total_is_assumption_free"]
    assert sum(r.total_euler for r in reports.values()) % 2 == 0


def test_spherical_vertex_has_no_class(klein_t1):
    classes = dict(T1_CLASSES, v124=SPHERICAL)
    assert "v124" not in {r.vertex for r in boundary_census(klein_t1, classes)}


def test_identities(klein_t1, klein_t2):
    for ext, classes in ((klein_t1, T1_CLASSES), (klein_t2, T2_CLASSES)):
        ident = census_identities(ext, classes, boundary_census(ext, classes))
        assert all(ident["checks"].values())
        assert ident["boundary_euler"] == 2 * ident["manifold_euler"]


def test_truncated_euler_with_spherical_vertex():
    poly, _ = build_tetrahedron(2)
    classes = dict(T1_CLASSES, v124=SPHERICAL)
    # -1 + 2 - (1/4 + 1/6 + 1/14 + 1/14 + 1/4 + 1/14) + 1/28 + three truncation triangles
    edges = sum(Fraction(1, 2 * m) for m in (2, 3, 7, 7, 2, 7))
    tri = vertex_orbifold_euler((2, 3, 7)) + vertex_orbifold_euler((2, 3, 7)) + vertex_orbifold_euler((7, 7, 7))
    assert truncated_orbifold_euler(poly, classes) == 1 - edges + Fraction(1, 28) + tri


def test_orientability(klein_t1, klein_t2, a5_action):
    assert orientability_3d(klein_t1)[0]
    assert orientability_3d(klein_t2)[0]
    chi = orientability_3d(klein_t1)[1]
    assert chi[klein_t1.psi_images["r4"]] == -1
    assert not orientability_3d(extend_thm2(a5_action))[0]
    lift = lift_double_cover(a5_action)
    assert orientability_3d(extend_thm2(lift.lifted))[0]


def test_census_needs_free_kernel(klein_t1):
    from dataclasses import replace
    with pytest.raises(InputError):
        boundary_census(replace(klein_t1, kernel_free=False), T1_CLASSES)


def test_corollary2_klein(klein_run):
    _, cert, _ = klein_run
    recs = cert.corollaries
    assert recs and all(r["corollary"] == 2 for r in recs)
    assert all(r["result_kind"] in ("orbifold", "manifold") for r in recs)
    # the reflections a_i have fixed points, so their class yields an orbifold
    assert any(r["result_kind"] == "orbifold" and not r["tau_fixed_point_free"] for r in recs)
    assert sum(r["class_size"] for r in recs) == 28


def test_corollary4_record():
    status, cert, _ = run_job(catalog_job("a5-255"))
    assert status == 0
    rec = {r["corollary"]: r for r in cert.corollaries}
    assert rec[4]["result_kind"] == "manifold" and rec[4]["boundary"]["components"] == 1
    assert rec[4]["tau_fixed_point_free"] and rec[4]["tau_orientation_reversing"]
    assert rec[3]["two_sided_manifold_orientable"] is False
    assert rec[3]["one_sided_manifold_orientable"] is True


def test_corollaries_empty_without_action():
    assert corollary_constructions(Certificate("x", ("validate",))) == []


def test_certificate_contents(klein_run):
    status, _, text = klein_run
    doc = json.loads(text)
    assert status == 0
    assert doc["action"]["genus"] == 3 and doc["action"]["group_order"] == 336
    assert doc["manifold"]["T1"]["orientable"] is True
    cone = [c for c in doc["boundary_census"]["T1"] if c["vertex"] == "cone"][0]
    assert cone["total_euler"] == -4 and cone["component_count"] == 1
    assert all(doc["meta"]["verifications"].values())


def test_certificate_schema(klein_run):
    schema = json.loads(resources.files("geodete").joinpath("schema/certificate.schema.json").read_text())
    jsonschema.validate(json.loads(klein_run[2]), schema)
    _, _, text = run_job(catalog_job("psl27-334"))
    jsonschema.validate(json.loads(text), schema)


def test_certificate_byte_identical(klein_run):
    assert run_job(catalog_job("klein-pgl27"))[2] == klein_run[2]


def test_dumps_canonical():
    assert dumps({"b": 1, "a": [True, None, 0.1, Fraction(1, 3)]}) == \
        '{"a":[true,null,0.10000000000000001,{"den":3,"num":1}],"b":1}\n'
    assert dumps(2.0) == "2.0\n"
    with pytest.raises(ValueError):
        dumps(float("nan"))


def test_emission_needs_requested_stages():
    cert = Certificate("x", ("validate", "extend_t2"))
    with pytest.raises(EmissionError) as exc:
        certificate_document(cert)
    assert exc.value.missing == ["validate", "extend_t2"]
    cert.skipped.update({"validate": "test", "extend_t2": "test"})
    assert json.loads(emit_certificate(cert))["meta"]["skipped"] == {"validate": "test", "extend_t2": "test"}


def test_failing_flag_fails_run(klein_run):
    _, cert, _ = klein_run
    cert.failures.append("synthetic.failure")
    try:
        assert cert.verifications()["synthetic.failure"] is False
    finally:
        cert.failures.pop()
