"""Exact-rational toolkit for nilpotent Lie algebras and their central extensions."""

__version__ = "0.1.0"

from .linalg import Q, Subspace
from .lie import (
    LieAlgebra,
    NotNilpotent,
    abelian,
    associated_graded,
    center,
    check_jacobi,
    is_carnot_layout,
    is_filiform,
    is_isomorphism,
    lower_central_series,
    nil_index,
)
from .cohomology import (
    ExteriorForm,
    NotClosed,
    cohomology,
    differential,
    dual_chain_L,
    form_filtration,
    homogeneous_cohomology,
    set_has_filtration_s,
)
from .extension import central_extension, roundtrip, verify_extension_theorem
from .orbits import orbit_equivalent_graded, orbit_tangent_dimension
from .classify import classify_nilpotent_small, enumerate_graded_filiform, fingerprint, isomorphic

__all__ = [
    "Q",
    "Subspace",
    "LieAlgebra",
    "NotNilpotent",
    "abelian",
    "associated_graded",
    "center",
    "check_jacobi",
    "is_carnot_layout",
    "is_filiform",
    "is_isomorphism",
    "lower_central_series",
    "nil_index",
    "ExteriorForm",
    "NotClosed",
    "cohomology",
    "differential",
    "dual_chain_L",
    "form_filtration",
    "homogeneous_cohomology",
    "set_has_filtration_s",
    "central_extension",
    "roundtrip",
    "verify_extension_theorem",
    "orbit_equivalent_graded",
    "orbit_tangent_dimension",
    "classify_nilpotent_small",
    "enumerate_graded_filiform",
    "fingerprint",
    "isomorphic",
]
