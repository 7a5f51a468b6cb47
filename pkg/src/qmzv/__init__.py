"""Finite multiple harmonic q-series at roots of unity, computed exactly in Q(zeta_n)."""

from .exactfield import (
    CyclotomicElement,
    FieldContext,
    SingularEvaluationError,
    binomial_big,
    element_invert,
    field_new,
    get_context,
    phi_cyclotomic,
    power_of_root,
    q_integer,
)
from .identities import verify
from .limits import corollary1_check, xi_estimate, zn_complex
from .qsums import IndexTuple, StrictPattern, mhs, q_binomial, restricted_sum, theorem3_rhs, zn
from .results import VerificationResult

__version__ = "0.1.0"

__all__ = [
    "CyclotomicElement",
    "FieldContext",
    "IndexTuple",
    "SingularEvaluationError",
    "StrictPattern",
    "VerificationResult",
    "binomial_big",
    "corollary1_check",
    "element_invert",
    "field_new",
    "get_context",
    "mhs",
    "phi_cyclotomic",
    "power_of_root",
    "q_binomial",
    "q_integer",
    "restricted_sum",
    "theorem3_rhs",
    "verify",
    "xi_estimate",
    "zn",
    "zn_complex",
]
