"""Run a job's stages in dependency order and assemble the certificate."""
from __future__ import annotations

import platform

import mpmath
import numpy as np

from . import __version__
from .census import (Certificate, boundary_census, census_identities, corollary_constructions,
                     emit_certificate, orientability_3d)
from .errors import (ConsistencyError, EmissionError, InputError, RealizationError,
                     ResourceLimitError, SolverError, ValidationError)
from .extend import Theorem, extend_thm1, extend_thm2, select_thm1, thm1_candidates
from .jobs import JobSpec, build_group
from .lorentz import classify_and_realize, gram_tetrahedron, solve_double_cone_gram, validate_realization
from .permgroup import Permutation, enumeration_bound
from .surface import HURWITZ_SIGNATURE, TriangleSignature, lift_double_cover, search_epimorphisms, validate_action

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class _Halt(Exception):
    """Stop running stages; the certificate so far is still emitted."""


def _manifold_record(ext) -> dict:
    orientable, character = orientability_3d(ext)
    return {"theorem": ext.theorem.value, "kernel_free": True, "orientable": orientable,
            "character": character}


def _stage_validate(spec: JobSpec, cert: Certificate, group):
    signature = TriangleSignature(*spec.signature)
    if spec.images == "search":
        found = search_epimorphisms(signature, group)
        cert.search = {"count": len(found), "equivalence": "up to inner automorphism",
                       "selected_index": 0 if found else None}
        if not found:
            cert.action_failure = {"check": "search", "message": f"no action of {tuple(signature)} on this group"}
            raise _Halt
        cert.action = found[0]
        return
    images = [Permutation(p) for p in spec.images]
    try:
        cert.action = validate_action(signature, group, images)
    except ValidationError as exc:
        cert.action_failure = {"check": exc.check, "message": exc.detail}
        raise _Halt from None


def _stage_extend_t1(cert: Certificate):
    action = cert.action
    if action.signature != HURWITZ_SIGNATURE:
        cert.skipped["extend_t1"] = "tetrahedron extension applies to signature (2,3,7) only"
        return
    cert.candidates = [extend_thm1(action, c) for c in thm1_candidates(action)]
    chosen = select_thm1(cert.candidates)
    if chosen is None:
        cert.failures.append("extension.T1.no_free_candidate")
        return
    cert.extensions[Theorem.T1] = chosen
    cert.manifolds[Theorem.T1] = _manifold_record(chosen)


def _stage_extend_t2(cert: Certificate):
    ext = extend_thm2(cert.action)
    cert.extensions[Theorem.T2] = ext
    if ext.kernel_free:
        cert.manifolds[Theorem.T2] = _manifold_record(ext)


def _stage_realize(spec: JobSpec, cert: Certificate, classes: dict):
    tol = spec.tolerances
    for th, ext in sorted(cert.extensions.items(), key=lambda kv: kv[0].value):
        if th is Theorem.T1:
            gram = gram_tetrahedron(ext.polyhedron.label("r2", "r4"))
        else:
            gram = solve_double_cone_gram(*cert.action.signature, seed=spec.seed, tol=tol["solve"],
                                          max_restarts=spec.max_restarts)
        record = {"gram": gram.to_dict()}
        try:
            real = classify_and_realize(gram, ext.polyhedron, tol["signature"])
            record.update(real.to_dict())
            record["validation"] = validate_realization(real, gram, ext.polyhedron,
                                                        tol["validation"], tol["orthogonality"])
            classes[th] = real.vertex_classes
        except RealizationError as exc:
            record["validation"] = None
            record["error"] = str(exc)
        cert.realizations[th] = record


def _stage_census(cert: Certificate, classes: dict):
    for th, ext in sorted(cert.extensions.items(), key=lambda kv: kv[0].value):
        if not ext.kernel_free or th not in classes:
            continue
        reports = boundary_census(ext, classes[th])
        cert.boundary[th] = reports
        cert.identities[th] = census_identities(ext, classes[th], reports)
    if not cert.boundary:
        cert.skipped["census"] = "no free extension with a validated realization"


def _stage_corollaries(cert: Certificate):
    if not cert.action.orientable:
        cert.lift = lift_double_cover(cert.action)
        ext = extend_thm2(cert.lift.lifted)
        record = {"theorem": ext.theorem.value, "kernel_free": bool(ext.kernel_free), "orientable": None}
        if ext.kernel_free:
            record["orientable"] = orientability_3d(ext)[0]
        cert.lift_manifold = record
    cert.corollaries = corollary_constructions(cert)


def _meta(spec: JobSpec) -> dict:
    return {
        "versions": {"geodete": __version__, "python": platform.python_version(),
                     "numpy": np.__version__, "mpmath": mpmath.__version__},
        "seed": spec.seed,
        "tolerances": dict(spec.tolerances),
        "max_group_order": spec.max_group_order or enumeration_bound(),
        "max_restarts": spec.max_restarts,
        "group": spec.group,
        "signature": list(spec.signature),
    }


def execute(spec: JobSpec) -> Certificate:
    """Run the stages; raises for input and resource errors (exit 2 and 3)."""
    cert = Certificate(spec.name, spec.stages, meta=_meta(spec))
    group = build_group(spec.group, spec.max_group_order)
    group.order  # force enumeration so the bound is enforced up front
    classes = {}
    stages = list(spec.stages)
    try:
        for i, stage in enumerate(stages):
            try:
                if stage == "validate":
                    _stage_validate(spec, cert, group)
                elif stage == "extend_t1":
                    _stage_extend_t1(cert)
                elif stage == "extend_t2":
                    _stage_extend_t2(cert)
                elif stage == "realize":
                    _stage_realize(spec, cert, classes)
                elif stage == "census":
                    _stage_census(cert, classes)
                elif stage == "corollaries":
                    _stage_corollaries(cert)
            except ConsistencyError as exc:
                cert.failures.append(f"{stage}.consistency")
                cert.meta.setdefault("failure_transcript", []).append(f"{stage}: {exc}")
                raise _Halt from None
    except _Halt:
        for later in stages[i + 1:]:
            cert.skipped.setdefault(later, f"not run: stage '{stage}' failed")
    return cert


def run_job(spec: JobSpec) -> tuple[int, Certificate | None, str]:
    """Exit status, the certificate (None on input/resource errors), and its text or an error message."""
    try:
        cert = execute(spec)
        text = emit_certificate(cert)
    except InputError as exc:
        return EXIT_INPUT, None, f"input error: {exc}"
    except ResourceLimitError as exc:
        return EXIT_RESOURCE, None, f"resource limit: {exc}"
    except SolverError as exc:
        return EXIT_RESOURCE, None, f"solver error: {exc}"
    except EmissionError as exc:
        return EXIT_RESOURCE, None, f"incomplete certificate: {exc}"
    status = EXIT_OK if all(cert.verifications().values()) else EXIT_FAILED
    return status, cert, text


def summary(cert: Certificate) -> list[str]:
    """Human-readable lines for the terminal."""
    lines = [f"job {cert.job}: stages {', '.join(cert.requested_stages)}"]
    if cert.search is not None:
        lines.append(f"search: {cert.search['count']} action(s) up to inner automorphism")
    a = cert.action
    if a is None:
        if cert.action_failure:
            lines.append(f"action FAILED [{cert.action_failure['check']}]: {cert.action_failure['message']}")
    else:
        kind = "orientable genus" if a.orientable else "nonorientable, crosscap number"
        lines.append(f"action: |G| = {a.group.order}, chi = {a.euler_char}, {kind} {a.genus}, "
                     f"hurwitz class {a.hurwitz_class.value}")
    for th, ext in sorted(cert.extensions.items(), key=lambda kv: kv[0].value):
        line = f"{th.value}: kernel free = {ext.kernel_free}"
        if th is Theorem.T1:
            line += f", x = {ext.polyhedron.label('r2', 'r4')}, {len(cert.candidates)} candidates"
        if th in cert.manifolds:
            line += f", M orientable = {cert.manifolds[th]['orientable']}"
        lines.append(line)
    for th, reports in sorted(cert.boundary.items(), key=lambda kv: kv[0].value):
        for r in reports:
            lines.append(f"{th.value} boundary {r.vertex} {list(r.vertex_type)}: total chi {r.total_euler}, "
                         f"{r.component_count} component(s) of chi {r.per_component_euler}")
    if cert.lift_manifold is not None:
        lines.append(f"double cover: lifted M orientable = {cert.lift_manifold['orientable']}")
    for rec in cert.corollaries or []:
        lines.append(f"corollary {rec['corollary']}: {rec['construction']}")
    for stage, why in cert.skipped.items():
        lines.append(f"skipped {stage}: {why}")
    failed = [k for k, v in cert.verifications().items() if not v]
    lines.append("all verifications passed" if not failed else "FAILED: " + ", ".join(failed))
    return lines
