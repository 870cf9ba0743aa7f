"""Certified q-gamma and q-polygamma evaluation with property checks."""

from .base import Branch, Certified, DerivOrder, QParam, SeriesPolicy, classify
from .classical import digamma_classical, log_gamma_classical, polygamma_classical
from .errors import (
    BranchMismatch,
    ClassicalBranch,
    DomainError,
    LogDomainError,
    NonPositiveQ,
    OrderTooLarge,
    QGammaError,
    ToleranceNotMet,
)
from .qcore import log_q_gamma, q_digamma, q_polygamma, reflect_digamma
from .theorems import (
    BoundsPair,
    Theorem2Kind,
    batir_function,
    c_coeff,
    digamma_bounds,
    proof_inequality_sides,
    remark2_value,
    series_identity_lhs,
    theorem1_value,
    theorem2_value,
)
from .verify import CheckReport, GridSpec, Spacing

__version__ = "0.1.0"
