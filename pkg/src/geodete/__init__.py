"""Certify extensions of finite group actions on hyperbolic surfaces to hyperbolic 3-manifolds."""

__version__ = "0.1.0"

from .errors import (ConsistencyError, EmissionError, GeodeteError, InputError, RealizationError,
                     ResourceLimitError, SemanticError, SolverError, UnsupportedError, ValidationError)
from .permgroup import GeneratedGroup, Permutation, dihedral_analysis, generate, projective_group, z2_character
from .coxeter import CoxeterMatrix, LabeledPolyhedron, build_double_cone, build_tetrahedron, finite_parabolics
from .surface import (SurfaceAction, TriangleSignature, involution_analysis, lift_double_cover,
                      search_epimorphisms, validate_action)
from .extend import Theorem, extend_thm1, extend_thm2, thm1_candidates, verify_free_kernel
from .lorentz import (classify_and_realize, gram_tetrahedron, signature, solve_double_cone_gram,
                      validate_realization)
from .census import Certificate, boundary_census, census_identities, emit_certificate

__all__ = [
    "ConsistencyError", "EmissionError", "GeodeteError", "InputError", "RealizationError",
    "ResourceLimitError", "SemanticError", "SolverError", "UnsupportedError", "ValidationError",
    "GeneratedGroup", "Permutation", "dihedral_analysis", "generate", "projective_group", "z2_character",
    "CoxeterMatrix", "LabeledPolyhedron", "build_double_cone", "build_tetrahedron", "finite_parabolics",
    "SurfaceAction", "TriangleSignature", "involution_analysis", "lift_double_cover",
    "search_epimorphisms", "validate_action",
    "Theorem", "extend_thm1", "extend_thm2", "thm1_candidates", "verify_free_kernel",
    "classify_and_realize", "gram_tetrahedron", "signature", "solve_double_cone_gram",
    "validate_realization",
    "Certificate", "boundary_census", "census_identities", "emit_certificate",
]
