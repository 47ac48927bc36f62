"""Bookkeeping for the quotient 3-manifold and its boundary, and the certificate.

Per-component boundary data assumes the setwise stabilizer of a truncating
plane is the vertex parabolic; totals (|G| times the orbifold Euler
characteristic) do not depend on that and are marked assumption-free.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .coxeter import CoxeterMatrix, LabeledPolyhedron, classify_subset
from .errors import ConsistencyError, EmissionError, InputError
from .extend import ExtensionResult, Theorem
from .lorentz import HYPERIDEAL, SPHERICAL
from .permgroup import Permutation, z2_character
from .surface import DoubleCoverLift, SurfaceAction, involution_analysis

SCHEMA_VERSION = "geodete-cert/1"
STABILIZER_ASSUMPTION = "setwise stabilizer of the truncating plane equals the vertex parabolic"
CONE_VERTICES = ("cone", "upper", "lower")


def orientability_3d(ext: ExtensionResult) -> tuple[bool, dict | None]:
    """The quotient is orientable iff some Z2-character sends every face reflection to -1."""
    if not ext.kernel_free:
        raise InputError("orientability is only defined for a free kernel")
    character = z2_character(ext.group, ext.distinct_images())
    return character is not None, character


def vertex_orbifold_euler(vertex_type) -> Fraction:
    """Euler characteristic of the reflection polygon cutting off a truncated vertex."""
    k = len(vertex_type)
    return 1 - Fraction(k, 2) + sum(Fraction(1, 2 * m) for m in vertex_type)


def truncated_orbifold_euler(poly: LabeledPolyhedron, vertex_classes: dict[str, str]) -> Fraction:
    """Orbifold Euler characteristic of the truncated polyhedron with mirrored faces.

    Cells: the interior, open faces (Z2), open edges (dihedral of order 2m),
    spherical vertices (their finite parabolic), and the truncation polygons.
    """
    chi = Fraction(-1) + Fraction(len(poly.faces), 2)
    chi -= sum(Fraction(1, 2 * m) for _, m in poly.edges)
    cm = CoxeterMatrix.from_polyhedron(poly)
    for v in poly.vertices:
        if vertex_classes[v.name] == SPHERICAL:
            sub = classify_subset(cm, tuple(sorted(poly.faces.index(f) for f in v.faces)))
            chi += Fraction(1, sub.abstract_order)
        elif vertex_classes[v.name] == HYPERIDEAL:
            chi += vertex_orbifold_euler(poly.vertex_type(v))
    return chi


@dataclass(frozen=True)
class BoundaryClassReport:
    vertex: str
    vertex_type: tuple[int, ...]
    orbifold_euler: Fraction
    total_euler: int
    image_order: int
    component_count: int
    per_component_euler: int
    assumption: str = STABILIZER_ASSUMPTION

    def to_dict(self):
        return {
            "vertex": self.vertex,
            "type": list(self.vertex_type),
            "orbifold_euler": self.orbifold_euler,
            "total_euler": self.total_euler,
            "total_is_assumption_free": True,
            "image_order": self.image_order,
            "component_count": self.component_count,
            "per_component_euler": self.per_component_euler,
            "assumption": self.assumption,
        }


def boundary_census(ext: ExtensionResult, vertex_classes: dict[str, str]) -> list[BoundaryClassReport]:
    if not ext.kernel_free:
        raise InputError("boundary census needs a free kernel")
    group = ext.group
    action = ext.base_action
    reports = []
    for v in ext.polyhedron.vertices:
        if vertex_classes[v.name] != HYPERIDEAL:
            continue
        vtype = ext.polyhedron.vertex_type(v)
        chi = vertex_orbifold_euler(vtype)
        image = group.subgroup([ext.psi_images[f] for f in v.faces]).order
        total = group.order * chi
        per = image * chi
        if total.denominator != 1 or per.denominator != 1:
            raise ConsistencyError(f"non-integral boundary Euler characteristic at {v.name}")
        rep = BoundaryClassReport(v.name, tuple(vtype), chi, int(total), image,
                                  group.order // image, int(per))
        if rep.component_count * rep.per_component_euler != rep.total_euler:
            raise ConsistencyError(f"component bookkeeping fails at {v.name}")
        if v.name in CONE_VERTICES and (rep.component_count != 1 or rep.per_component_euler != action.euler_char):
            raise ConsistencyError(f"cone class {v.name} does not reproduce the surface")
        reports.append(rep)
    return reports


def census_identities(ext: ExtensionResult, vertex_classes, reports) -> dict:
    """Euler characteristic identities of the compact manifold and its double."""
    boundary = sum(r.total_euler for r in reports)
    manifold = ext.group.order * truncated_orbifold_euler(ext.polyhedron, vertex_classes)
    return {
        "boundary_euler": boundary,
        "manifold_euler": manifold,
        "double_euler": 2 * manifold - boundary,
        "checks": {
            "boundary_euler_even": boundary % 2 == 0,
            "boundary_is_twice_manifold": boundary == 2 * manifold,
            "double_euler_zero": 2 * manifold - boundary == 0,
            "component_count_divides_order": all(ext.group.order % r.component_count == 0 for r in reports),
            "cone_class_is_surface": any(r.vertex in CONE_VERTICES for r in reports),
        },
    }


@dataclass
class Certificate:
    job: str
    requested_stages: tuple[str, ...]
    action: SurfaceAction | None = None
    action_failure: dict | None = None
    search: dict | None = None
    candidates: list[ExtensionResult] = field(default_factory=list)
    extensions: dict[Theorem, ExtensionResult] = field(default_factory=dict)
    realizations: dict[Theorem, dict] = field(default_factory=dict)
    manifolds: dict[Theorem, dict] = field(default_factory=dict)
    boundary: dict[Theorem, list[BoundaryClassReport]] = field(default_factory=dict)
    identities: dict[Theorem, dict] = field(default_factory=dict)
    lift: DoubleCoverLift | None = None
    lift_manifold: dict | None = None
    corollaries: list[dict] | None = None
    skipped: dict[str, str] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def verifications(self) -> dict[str, bool]:
        """Every verification flag; a run passes iff all are true."""
        out = {"action.validated": self.action is not None}
        for th, ext in self.extensions.items():
            out[f"extension.{th.value}.kernel_free"] = bool(ext.kernel_free)
        if Theorem.T1 in self.extensions or self.candidates:
            out["extension.T1.candidates_in_range"] = 4 <= len(self.candidates) <= 6
            out["extension.T1.free_candidate_exists"] = any(c.kernel_free for c in self.candidates)
        for th, real in self.realizations.items():
            out[f"realization.{th.value}.validated"] = real.get("validation") is not None
        for th, man in self.manifolds.items():
            out[f"manifold.{th.value}.orientability_matches_surface"] = (
                man["orientable"] == self.action.orientable)
        for th, ident in self.identities.items():
            for name, ok in ident["checks"].items():
                out[f"census.{th.value}.{name}"] = ok
        if self.lift is not None:
            out["lift.manifold_orientable"] = bool(self.lift_manifold and self.lift_manifold["orientable"])
        for rec in self.corollaries or []:
            if rec["corollary"] == 4:
                out["corollary4.tau_free_orientation_reversing"] = (
                    rec["tau_fixed_point_free"] and rec["tau_orientation_reversing"])
        for name in self.failures:
            out[name] = False
        return out


def _involution_classes(action: SurfaceAction):
    seen = set()
    for t in action.group.involutions:
        if t in seen:
            continue
        cls = action.group.conjugacy_class(t)
        seen |= cls
        yield min(cls), len(cls)


def corollary_constructions(cert: Certificate) -> list[dict]:
    """Split-and-identify constructions certified from involution properties.

    Orientable surface with orientable M: one record per conjugacy class of
    orientation-reversing involutions. Nonorientable surface: the two-sided
    and one-sided embeddings, and closing up by the deck involution of the
    orientable double cover.
    """
    action = cert.action
    if action is None:
        return []
    records = []
    if action.orientable:
        if not any(m["orientable"] for m in cert.manifolds.values()):
            return []
        for tau, size in _involution_classes(action):
            rep = involution_analysis(action, tau)
            if not rep.orientation_reversing:
                continue
            centralizer = action.group.centralizer_order(tau)
            records.append({
                "corollary": 2,
                "construction": "split-and-identify",
                "tau": list(tau.images),
                "class_size": size,
                "tau_fixed_point_free": rep.fixed_point_free,
                "result_kind": "manifold" if rep.fixed_point_free else "orbifold",
                "boundary": {"components": 1, "genus": action.genus, "orientable": True},
                "centralizer_order": centralizer,
                "full_group_survives": centralizer == action.group.order,
            })
        return records

    lift = cert.lift
    if lift is None:
        return []
    base_orientable = [m["orientable"] for m in cert.manifolds.values()]
    records.append({
        "corollary": 3,
        "construction": "two-sided and one-sided embeddings",
        "two_sided_manifold_orientable": base_orientable[0] if base_orientable else None,
        "one_sided_manifold_orientable": cert.lift_manifold["orientable"] if cert.lift_manifold else None,
    })
    rep = involution_analysis(lift.lifted, lift.tau)
    records.append({
        "corollary": 4,
        "construction": "close up by deck involution",
        "tau": list(lift.tau.images),
        "tau_orientation_reversing": rep.orientation_reversing,
        "tau_fixed_point_free": rep.fixed_point_free,
        "result_kind": "manifold" if rep.fixed_point_free else "orbifold",
        "boundary": {"components": 1, "genus": lift.lifted.genus, "orientable": True},
        "acting_group_order": lift.base.group.order,
        "lifted_group_order": lift.lifted_group.order,
        "lifted_euler_char": lift.lifted.euler_char,
    })
    return records


# --- serialization -----------------------------------------------------------

def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, Fraction):
        return _format({"num": value.numerator, "den": value.denominator})
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"cannot serialize {value}")
        text = format(value, ".17g")
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, Permutation):
        return _format(list(value.images))
    if isinstance(value, dict):
        items = sorted((str(k), v) for k, v in value.items())
        return "{" + ",".join(_format(k) + ":" + _format(v) for k, v in items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_format(v) for v in value) + "]"
    if hasattr(value, "item"):  # numpy scalar
        return _format(value.item())
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(document) -> str:
    """Canonical JSON: sorted keys, no whitespace, floats at 17 significant digits."""
    return _format(document) + "\n"


def _by_theorem(d: dict, fn):
    return {th.value: fn(v) for th, v in sorted(d.items(), key=lambda kv: kv[0].value)}


STAGE_SECTIONS = {
    "validate": "action",
    "extend_t1": "extension",
    "extend_t2": "extension",
    "realize": "realization",
    "census": "boundary_census",
    "corollaries": "corollaries",
}


def certificate_document(cert: Certificate) -> dict:
    missing = []
    for stage in cert.requested_stages:
        if stage in cert.skipped:
            continue
        done = {
            "validate": cert.action is not None or cert.action_failure is not None,
            "extend_t1": Theorem.T1 in cert.extensions or bool(cert.candidates),
            "extend_t2": Theorem.T2 in cert.extensions,
            "realize": bool(cert.realizations),
            "census": bool(cert.boundary),
            "corollaries": cert.corollaries is not None,
        }[stage]
        if not done:
            missing.append(stage)
    if missing:
        raise EmissionError(missing)

    if cert.action is not None:
        action = cert.action.to_dict()
        action["validated"] = True
    else:
        action = {"validated": False, "failure": cert.action_failure}
    if cert.search is not None:
        action["search"] = cert.search

    extension = _by_theorem(cert.extensions, lambda e: e.to_dict())
    if cert.candidates:
        t1 = extension.setdefault("T1", {})
        t1["candidates"] = [
            {"b": list(c.psi_images["r4"].images), "x": c.polyhedron.label("r2", "r4"),
             "kernel_free": c.kernel_free}
            for c in cert.candidates
        ]
    manifold = _by_theorem(cert.manifolds, lambda m: {k: v for k, v in m.items() if k != "character"})
    for th, ident in cert.identities.items():
        manifold[th.value].update({k: v for k, v in ident.items()})
    if cert.lift is not None:
        manifold["double_cover"] = {
            "lifted_action": cert.lift.lifted.to_dict(),
            "tau": list(cert.lift.tau.images),
            "lifted_manifold": cert.lift_manifold,
        }
    meta = dict(cert.meta)
    meta.update({
        "schema": SCHEMA_VERSION,
        "job": cert.job,
        "stages": list(cert.requested_stages),
        "skipped": dict(cert.skipped),
        "verifications": cert.verifications(),
        "search_equivalence": "up to inner automorphism",
    })
    return {
        "action": action,
        "extension": extension,
        "realization": _by_theorem(cert.realizations, dict),
        "manifold": manifold,
        "boundary_census": _by_theorem(cert.boundary, lambda rs: [r.to_dict() for r in rs]),
        "corollaries": cert.corollaries or [],
        "meta": meta,
    }


def emit_certificate(cert: Certificate) -> str:
    return dumps(certificate_document(cert))
