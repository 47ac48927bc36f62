"""Extending a surface action to a Coxeter group of a 3-dimensional polyhedron.

Two recipes:

* tetrahedron (signature (2,3,7) only): the fourth face reflection goes to a
  reflection of the dihedral group <a1, a3> other than a1, a2, a3, and the
  label x on edge (r2, r4) is the order of a2 times that reflection;
* double cone (any hyperbolic signature): primed and unprimed faces share
  their images.

The kernel acts freely iff the extension is injective on every finite
parabolic subgroup, since every torsion element of a Coxeter group is
conjugate into one.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .coxeter import (CoxeterMatrix, LabeledPolyhedron, build_double_cone, build_tetrahedron,
                      finite_parabolics)
from .errors import ConsistencyError, InputError
from .permgroup import Permutation, dihedral_analysis
from .surface import HURWITZ_SIGNATURE, SurfaceAction


class Theorem(str, enum.Enum):
    T1 = "T1"
    T2 = "T2"


@dataclass(frozen=True)
class ExtensionCandidate:
    b: Permutation
    x: int
    excluded_reflections: tuple[Permutation, ...]


@dataclass(frozen=True)
class TranscriptEntry:
    subset: tuple[str, ...]
    abstract_order: int
    image_order: int
    injective: bool

    def to_dict(self):
        return {
            "subset": list(self.subset),
            "abstract_order": self.abstract_order,
            "image_order": self.image_order,
            "injective": self.injective,
        }


@dataclass(frozen=True, eq=False)
class ExtensionResult:
    theorem: Theorem
    polyhedron: LabeledPolyhedron
    coxeter: CoxeterMatrix
    psi_images: dict[str, Permutation]
    base_action: SurfaceAction
    kernel_free: bool | None = None
    freeness_transcript: tuple[TranscriptEntry, ...] = ()

    @property
    def group(self):
        return self.base_action.group

    def distinct_images(self) -> list[Permutation]:
        return sorted(set(self.psi_images.values()))

    def to_dict(self):
        out = {
            "theorem": self.theorem.value,
            "polyhedron": self.polyhedron.to_dict(),
            "psi_images": {k: list(v.images) for k, v in self.psi_images.items()},
            "kernel_free": self.kernel_free,
            "freeness_transcript": [e.to_dict() for e in self.freeness_transcript],
        }
        if self.theorem is Theorem.T1:
            out["x"] = self.polyhedron.label("r2", "r4")
        return out


def thm1_candidates(action: SurfaceAction) -> list[ExtensionCandidate]:
    """Admissible images of r4, in the order ``(a1 a3)^k a1``, k = 0..6."""
    if action.signature != HURWITZ_SIGNATURE:
        raise InputError(f"tetrahedron extension needs signature (2,3,7), got {tuple(action.signature)}")
    a1, a2, a3 = action.images
    dih = dihedral_analysis(a1, a3)
    if dih.rotation_order != 7 or not dih.is_faithful_dihedral:
        raise ConsistencyError("<a1, a3> is not dihedral of order 14")
    excluded = tuple(s for s in dih.reflections if s in (a1, a2, a3))
    out = []
    for b in dih.reflections:
        if b in excluded:
            continue
        if (a1 * b).order() != 7 or (a3 * b).order() != 7:
            raise ConsistencyError(f"candidate {b!r} does not give order 7 with a1 and a3")
        out.append(ExtensionCandidate(b, (a2 * b).order(), excluded))
    return out


def check_relations(poly: LabeledPolyhedron, psi: dict[str, Permutation]) -> None:
    for f in poly.faces:
        if not (psi[f] * psi[f]).is_identity():
            raise ConsistencyError(f"image of {f} is not an involution")
    for (f, g), m in poly.edges:
        if not ((psi[f] * psi[g]) ** m).is_identity():
            raise ConsistencyError(f"relation ({f}{g})^{m} fails in the group")


def verify_free_kernel(result: ExtensionResult) -> ExtensionResult:
    """Compare image and abstract orders on every finite parabolic subgroup."""
    group = result.group
    transcript = []
    for sub in finite_parabolics(result.coxeter):
        gens = [result.psi_images[n] for n in sub.names]
        image_order = group.subgroup(gens).order
        transcript.append(TranscriptEntry(sub.names, sub.abstract_order, image_order,
                                          image_order == sub.abstract_order))
    return replace(result, kernel_free=all(e.injective for e in transcript),
                   freeness_transcript=tuple(transcript))


def extend_thm1(action: SurfaceAction, candidate: ExtensionCandidate) -> ExtensionResult:
    a1, a2, a3 = action.images
    poly, cm = build_tetrahedron(candidate.x)
    psi = {"r1": a1, "r2": a2, "r3": a3, "r4": candidate.b}
    check_relations(poly, psi)
    return verify_free_kernel(ExtensionResult(Theorem.T1, poly, cm, psi, action))


def extend_thm2(action: SurfaceAction) -> ExtensionResult:
    a1, a2, a3 = action.images
    poly, cm = build_double_cone(*action.signature)
    psi = {"r1": a1, "r2": a2, "r3": a3, "r1'": a1, "r2'": a2, "r3'": a3}
    check_relations(poly, psi)
    return verify_free_kernel(ExtensionResult(Theorem.T2, poly, cm, psi, action))


def select_thm1(results: list[ExtensionResult]) -> ExtensionResult | None:
    """Free extension with the smallest x, ties broken by the image of r4."""
    free = [r for r in results if r.kernel_free]
    if not free:
        return None
    return min(free, key=lambda r: (r.polyhedron.label("r2", "r4"), r.psi_images["r4"]))
