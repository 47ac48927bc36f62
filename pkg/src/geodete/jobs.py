"""Job files: what group, which action, which stages.

A job is a JSON document::

    {
      "name": "klein-pgl27",
      "group": {"kind": "pgl2", "q": 7},
      "signature": [2, 3, 7],
      "images": "search",
      "stages": [],
      "options": {"seed": 0}
    }

``group.kind`` is one of ``permutation`` (``degree``, ``generators``),
``psl2``/``pgl2`` (``q``), or ``direct_product`` (``factors``, a list of group
specs). ``images`` is ``"search"`` or three permutations as image arrays. An
empty or missing ``stages`` list means every stage.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .errors import InputError
from .lorentz import ORTHOGONALITY_TOL, SIGNATURE_TOL, SOLVE_TOL, VALIDATION_TOL
from .permgroup import GeneratedGroup, Permutation, direct_product, generate, projective_group

STAGES = ("validate", "extend_t1", "extend_t2", "realize", "census", "corollaries")
GROUP_KINDS = ("permutation", "psl2", "pgl2", "direct_product")
DEFAULT_TOLERANCES = {
    "solve": SOLVE_TOL,
    "validation": VALIDATION_TOL,
    "orthogonality": ORTHOGONALITY_TOL,
    "signature": SIGNATURE_TOL,
}


@dataclass(frozen=True)
class JobSpec:
    name: str
    group: dict
    signature: tuple[int, int, int]
    images: str | tuple[tuple[int, ...], ...]
    stages: tuple[str, ...] = STAGES
    seed: int = 0
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    max_group_order: int | None = None
    max_restarts: int = 20
    output: str | None = None

    def with_stages(self, stages) -> JobSpec:
        stages = normalize_stages(stages, "stages")
        return replace(self, stages=stages)


def _fail(path, message):
    raise InputError(f"field '{path}': {message}")


def _int(value, path, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        _fail(path, f"must be >= {minimum}, got {value}")
    return value


def group_degree(spec: dict, path: str = "group") -> int:
    """Degree of the permutation representation a group spec will produce."""
    if not isinstance(spec, dict):
        _fail(path, "expected an object")
    kind = spec.get("kind")
    if kind not in GROUP_KINDS:
        _fail(f"{path}.kind", f"unknown group kind {kind!r}; expected one of {', '.join(GROUP_KINDS)}")
    if kind in ("psl2", "pgl2"):
        return _int(spec.get("q"), f"{path}.q", 2) + 1
    if kind == "permutation":
        degree = _int(spec.get("degree"), f"{path}.degree", 1)
        gens = spec.get("generators")
        if not isinstance(gens, list) or not gens:
            _fail(f"{path}.generators", "expected a non-empty list of permutations")
        for i, g in enumerate(gens):
            _permutation(g, degree, f"{path}.generators[{i}]")
        return degree
    factors = spec.get("factors")
    if not isinstance(factors, list) or len(factors) < 2:
        _fail(f"{path}.factors", "expected a list of at least two group specs")
    return sum(group_degree(f, f"{path}.factors[{i}]") for i, f in enumerate(factors))


def _permutation(value, degree, path) -> tuple[int, ...]:
    if not isinstance(value, list) or any(isinstance(v, bool) or not isinstance(v, int) for v in value):
        _fail(path, "expected a list of integers")
    if len(value) != degree:
        _fail(path, f"expected degree {degree}, got {len(value)}")
    if sorted(value) != list(range(degree)):
        _fail(path, f"not a permutation of 0..{degree - 1}")
    return tuple(value)


def normalize_stages(stages, path) -> tuple[str, ...]:
    if stages is None or stages == [] or stages == ():
        return STAGES
    if not isinstance(stages, (list, tuple)):
        _fail(path, "expected a list of stage names")
    for s in stages:
        if s not in STAGES:
            _fail(path, f"unknown stage {s!r}; expected a subset of {', '.join(STAGES)}")
    chosen = set(stages)
    extend = {"extend_t1", "extend_t2"} & chosen
    if extend and "validate" not in chosen:
        _fail(path, "extend stages require 'validate'")
    if "realize" in chosen and not extend:
        _fail(path, "'realize' requires an extend stage")
    if "census" in chosen and not (extend and "realize" in chosen):
        _fail(path, "'census' requires an extend stage and 'realize'")
    if "corollaries" in chosen and not extend:
        _fail(path, "'corollaries' requires an extend stage")
    return tuple(s for s in STAGES if s in chosen)


def parse_job(text: str, name: str | None = None) -> JobSpec:
    """Parse and validate a job document; errors name the line or field."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InputError("job must be a JSON object")
    unknown = set(doc) - {"name", "group", "signature", "images", "stages", "options", "description"}
    if unknown:
        _fail(sorted(unknown)[0], "unknown field")

    job_name = doc.get("name", name or "job")
    if not isinstance(job_name, str) or not job_name:
        _fail("name", "expected a non-empty string")
    degree = group_degree(doc.get("group"))

    sig = doc.get("signature")
    if not isinstance(sig, list) or len(sig) != 3:
        _fail("signature", "expected three integers [p, q, r]")
    sig = tuple(_int(v, f"signature[{i}]", 2) for i, v in enumerate(sig))

    images = doc.get("images", "search")
    if images != "search":
        if not isinstance(images, list) or len(images) != 3:
            _fail("images", 'expected "search" or a list of three permutations')
        images = tuple(_permutation(v, degree, f"images[{i}]") for i, v in enumerate(images))

    stages = normalize_stages(doc.get("stages"), "stages")

    options = doc.get("options", {})
    if not isinstance(options, dict):
        _fail("options", "expected an object")
    unknown = set(options) - {"seed", "tolerances", "max_group_order", "max_restarts", "output"}
    if unknown:
        _fail(f"options.{sorted(unknown)[0]}", "unknown option")
    seed = _int(options.get("seed", 0), "options.seed", 0)
    tolerances = dict(DEFAULT_TOLERANCES)
    for key, value in (options.get("tolerances") or {}).items():
        if key not in tolerances:
            _fail(f"options.tolerances.{key}", "unknown tolerance")
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
            _fail(f"options.tolerances.{key}", "expected a positive number")
        tolerances[key] = float(value)
    bound = options.get("max_group_order")
    if bound is not None:
        bound = _int(bound, "options.max_group_order", 1)
    restarts = _int(options.get("max_restarts", 20), "options.max_restarts", 0)
    output = options.get("output")
    if output is not None and not isinstance(output, str):
        _fail("options.output", "expected a path string")

    return JobSpec(job_name, doc["group"], sig, images, stages, seed, tolerances, bound, restarts, output)


def build_group(spec: dict, bound: int | None = None) -> GeneratedGroup:
    kind = spec["kind"]
    if kind == "psl2":
        return projective_group(spec["q"], "PSL", bound=bound)
    if kind == "pgl2":
        return projective_group(spec["q"], "PGL", bound=bound)
    if kind == "permutation":
        return generate(spec["degree"], [Permutation(tuple(g)) for g in spec["generators"]], bound=bound)
    factors = [build_group(f, bound) for f in spec["factors"]]
    group = factors[0]
    for other in factors[1:]:
        group = direct_product(group, other, bound=bound)
    return group


def catalog_names() -> list[str]:
    files = resources.files("geodete.catalog").iterdir()
    return sorted(f.name[:-5] for f in files if f.name.endswith(".json"))


def catalog_job(name: str) -> JobSpec:
    if name not in catalog_names():
        raise InputError(f"unknown catalog entry {name!r}; available: {', '.join(catalog_names())}")
    text = resources.files("geodete.catalog").joinpath(f"{name}.json").read_text()
    return parse_job(text, name)


def load_job(ref: str) -> JobSpec:
    """A job file path, or the name of a catalog entry."""
    path = Path(ref)
    if path.is_file():
        return parse_job(path.read_text(), path.stem)
    if ref in catalog_names():
        return catalog_job(ref)
    raise InputError(f"no job file or catalog entry named {ref!r}")
