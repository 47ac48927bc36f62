"""Finite group actions on closed hyperbolic surfaces.

An action is given by the images ``(a1, a2, a3)`` of the three side
reflections of an extended triangle group ``[p,q,r]``. The kernel is
torsion-free iff the map is injective on the three edge dihedral groups,
because every torsion element of ``[p,q,r]`` is conjugate into one of them.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .coxeter import is_hyperbolic_signature
from .errors import ConsistencyError, InputError, SemanticError, ValidationError
from .permgroup import GeneratedGroup, Permutation, dihedral_analysis, generate, z2_character


@dataclass(frozen=True)
class TriangleSignature:
    p: int
    q: int
    r: int

    def __post_init__(self):
        if any(not isinstance(v, int) or v < 2 for v in self):
            raise InputError(f"signature entries must be integers >= 2, got {tuple(self)}")
        if not is_hyperbolic_signature(self.p, self.q, self.r):
            raise InputError(f"signature {tuple(self)} is not hyperbolic")

    def __iter__(self):
        return iter((self.p, self.q, self.r))

    @property
    def orbifold_euler(self) -> Fraction:
        """Euler characteristic of the reflection triangle orbifold."""
        return (-1 + Fraction(1, self.p) + Fraction(1, self.q) + Fraction(1, self.r)) / 2

    @property
    def edges(self):
        """(generator pair, label) for the three vertices of the triangle."""
        return (((0, 1), self.p), ((1, 2), self.q), ((2, 0), self.r))


HURWITZ_SIGNATURE = TriangleSignature(2, 3, 7)


class HurwitzClass(str, enum.Enum):
    NONE = "none"
    ORIENTATION_REVERSING = "orientation_reversing_hurwitz"
    NONORIENTABLE = "nonorientable_hurwitz"


@dataclass(frozen=True)
class EdgeCheck:
    generators: tuple[str, str]
    label: int
    product_order: int
    image_order: int
    faithful: bool

    def to_dict(self):
        return {
            "generators": list(self.generators),
            "label": self.label,
            "product_order": self.product_order,
            "image_order": self.image_order,
            "faithful": self.faithful,
        }


@dataclass(frozen=True, eq=False)
class SurfaceAction:
    signature: TriangleSignature
    group: GeneratedGroup
    images: tuple[Permutation, Permutation, Permutation]
    euler_char: int
    orientable: bool
    genus: int
    surface_character: dict | None = field(repr=False)
    hurwitz_class: HurwitzClass
    edge_checks: tuple[EdgeCheck, ...] = field(repr=False)

    @cached_property
    def elliptic_images(self) -> frozenset[Permutation]:
        """Non-identity images of torsion elements, closed under G-conjugation.

        These are exactly the elements with fixed points on the surface.
        """
        a = self.images
        torsion = set()
        for (i, j), _ in self.signature.edges:
            torsion.update(self.group.subgroup([a[i], a[j]]).elements)
        torsion.discard(self.group.identity)
        closed = set()
        for t in torsion:
            if t not in closed:
                closed |= self.group.conjugacy_class(t)
        return frozenset(closed)

    def to_dict(self):
        return {
            "signature": list(self.signature),
            "group_order": self.group.order,
            "degree": self.group.degree,
            "images": [list(a.images) for a in self.images],
            "euler_char": self.euler_char,
            "orientable": self.orientable,
            "genus": self.genus,
            "hurwitz_class": self.hurwitz_class.value,
            "edge_checks": [c.to_dict() for c in self.edge_checks],
        }


GENERATOR_NAMES = ("r1", "r2", "r3")


def validate_action(signature: TriangleSignature, group: GeneratedGroup,
                    images: Sequence[Permutation]) -> SurfaceAction:
    """Check that ``r_i -> images[i]`` is a surjection with torsion-free kernel.

    Checks run in order (involutions, product orders, edge dihedral
    injectivity, surjectivity); the first failure raises ``ValidationError``.
    """
    images = tuple(images)
    if len(images) != 3:
        raise InputError(f"expected 3 images, got {len(images)}")
    for a in images:
        if a not in group:
            raise InputError(f"image {a!r} is not an element of the group")
    for name, a in zip(GENERATOR_NAMES, images):
        if a.is_identity() or not (a * a).is_identity():
            raise ValidationError("involution", f"image of {name} has order {a.order()}, expected 2")

    checks = []
    for (i, j), label in signature.edges:
        gi, gj = GENERATOR_NAMES[i], GENERATOR_NAMES[j]
        n = (images[i] * images[j]).order()
        if label % n:
            raise ValidationError("relation", f"ord(a{i + 1}a{j + 1}) = {n} does not divide {label}")
        if n != label:
            raise ValidationError(
                "dihedral_injectivity",
                f"order drop on <{gi},{gj}>: ord(a{i + 1}a{j + 1}) = {n}, expected {label}",
            )
        dih = dihedral_analysis(images[i], images[j])
        if dih.subgroup_order != 2 * label:
            raise ValidationError(
                "dihedral_injectivity",
                f"<{gi},{gj}> has image of order {dih.subgroup_order}, expected {2 * label}",
            )
        checks.append(EdgeCheck((gi, gj), label, n, dih.subgroup_order, True))

    if group.subgroup(images).order != group.order:
        raise ValidationError("surjectivity", "images do not generate the group")

    chi = group.order * signature.orbifold_euler
    if chi.denominator != 1:
        raise ConsistencyError(f"non-integral Euler characteristic {chi}")
    euler = int(chi)
    character = z2_character(group, images)
    orientable = character is not None
    genus = (2 - euler) // 2 if orientable else 2 - euler

    hurwitz = HurwitzClass.NONE
    if signature == HURWITZ_SIGNATURE:
        if orientable and group.order == 168 * (genus - 1):
            hurwitz = HurwitzClass.ORIENTATION_REVERSING
        elif not orientable and group.order == 84 * (genus - 2):
            hurwitz = HurwitzClass.NONORIENTABLE

    return SurfaceAction(signature, group, images, euler, orientable, genus,
                         character, hurwitz, tuple(checks))


def _conjugation_orbit(group: GeneratedGroup, triple) -> set:
    inverses = [(g, g.inverse()) for g in group.elements]
    return {tuple(g * a * gi for a in triple) for g, gi in inverses}


def search_epimorphisms(signature: TriangleSignature, group: GeneratedGroup) -> list[SurfaceAction]:
    """All actions of ``[p,q,r]`` on ``group``, up to simultaneous conjugation in the group.

    Each class is represented by its lexicographically smallest triple, and
    the list is sorted by that representative.
    """
    invs = group.involutions
    p, q, r = signature
    seen = set()
    found = []
    for a1 in invs:
        for a2 in invs:
            if (a1 * a2).order() != p:
                continue
            for a3 in invs:
                if (a2 * a3).order() != q or (a3 * a1).order() != r:
                    continue
                triple = (a1, a2, a3)
                if triple in seen:
                    continue
                orbit = _conjugation_orbit(group, triple)
                seen |= orbit
                try:
                    action = validate_action(signature, group, min(orbit))
                except ValidationError:
                    continue
                found.append(action)
    found.sort(key=lambda act: act.images)
    return found


@dataclass(frozen=True, eq=False)
class DoubleCoverLift:
    base: SurfaceAction
    lifted: SurfaceAction
    tau: Permutation
    lifted_group: GeneratedGroup


def _doubled(g: Permutation, flip: bool) -> Permutation:
    """Element (g, ±1) of G x Z2 acting on two copies of the point set."""
    n = g.degree
    if flip:
        return Permutation(tuple(n + j for j in g.images) + g.images)
    return Permutation(g.images + tuple(n + j for j in g.images))


def lift_double_cover(action: SurfaceAction) -> DoubleCoverLift:
    """Lift a nonorientable action to G x Z2 on the orientable double cover."""
    if action.orientable:
        raise InputError("lift_double_cover needs a nonorientable action")
    base = action.group
    lifted_images = tuple(_doubled(a, True) for a in action.images)
    tau = _doubled(base.identity, True)
    lifted_group = generate(2 * base.degree, lifted_images, bound=base.bound)
    if lifted_group.order != 2 * base.order:
        raise ConsistencyError(f"lifted group has order {lifted_group.order}, expected {2 * base.order}")
    lifted = validate_action(action.signature, lifted_group, lifted_images)
    if not lifted.orientable:
        raise ConsistencyError("lifted action is not orientable")
    if lifted.genus != action.genus - 1 or lifted.euler_char != 2 * action.euler_char:
        raise ConsistencyError("lifted genus/Euler characteristic mismatch")
    if any(tau * a != a * tau for a in lifted_images):
        raise ConsistencyError("deck involution is not central")
    report = involution_analysis(lifted, tau)
    if not (report.orientation_reversing and report.fixed_point_free):
        raise ConsistencyError(f"deck involution is not a free orientation-reversing involution: {report}")
    return DoubleCoverLift(action, lifted, tau, lifted_group)


@dataclass(frozen=True)
class InvolutionReport:
    orientation_reversing: bool | None
    fixed_point_free: bool


def involution_analysis(action: SurfaceAction, t: Permutation, orientation: bool = True) -> InvolutionReport:
    """Whether ``t`` reverses orientation and whether it acts freely on the surface.

    With ``orientation=False`` only freeness is computed, which is the only
    meaningful question on a nonorientable surface.
    """
    if t not in action.group or t.is_identity() or not (t * t).is_identity():
        raise InputError(f"{t!r} is not an involution of the group")
    reversing = None
    if orientation:
        if action.surface_character is None:
            raise SemanticError("orientation-reversal is undefined on a nonorientable surface")
        reversing = action.surface_character[t] == -1
    return InvolutionReport(reversing, t not in action.elliptic_images)
