"""Functions built on psi_q: the completely monotonic combinations, the four
increasing functions with their double bounds for psi_q, the coefficient
sums used to prove complete monotonicity, and the two classical-limit
functions.

Errors of composed quantities are propagated to first order with a fixed
2x safety factor.  That part is heuristic; the series underneath remain
rigorously bounded.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass
from math import comb

import numpy as np

from .base import DEFAULT_POLICY, Branch, Certified, QParam, SeriesPolicy, check_x, classify
from .classical import digamma_classical, polygamma_classical
from .errors import BranchMismatch, ClassicalBranch, DomainError, LogDomainError
from .qcore import _lambert_series, q_digamma, q_polygamma

SAFETY = 2.0
EPS = sys.float_info.epsilon


class Theorem2Kind(enum.Enum):
    PHI_SUPER = "phi"  # q > 1, exponent (ln q) q^x / (q^x - 1)
    VARPHI_SUPER = "varphi"  # q > 1, exponent (ln q) / (q^x - 1)
    PHI_SUB = "phi_sub"  # 0 < q < 1, exponent (ln q) q^x / (q^x - 1)
    THETA_SUB = "theta"  # 0 < q < 1, exponent (ln q) / (q^x - 1)

    @property
    def branch(self) -> Branch:
        if self in (Theorem2Kind.PHI_SUPER, Theorem2Kind.VARPHI_SUPER):
            return Branch.SUPER_UNIT
        return Branch.SUB_UNIT

    @property
    def uses_qx_numerator(self) -> bool:
        return self in (Theorem2Kind.PHI_SUPER, Theorem2Kind.PHI_SUB)


@dataclass(frozen=True)
class BoundsPair:
    lower: float
    upper: float


def _param(p) -> QParam:
    return p if isinstance(p, QParam) else classify(p)


def _non_classical(p: QParam, what: str) -> None:
    if p.branch is Branch.CLASSICAL:
        raise ClassicalBranch(f"{what} is defined for q != 1")


def log_expm1(t: float) -> float:
    """ln(e^t - 1) for t > 0 without overflow."""
    if t > 30.0:
        return t + math.log1p(-math.exp(-t))
    em = math.expm1(t)
    if not em > 0.0:
        raise LogDomainError(f"ln(exp(t) - 1) undefined for t = {t!r}")
    return math.log(em)


def exponent_qx(lq: float, x: float) -> float:
    """(ln q) q^x / (q^x - 1), written as -(ln q) / expm1(-x ln q)."""
    return _scaled_reciprocal_expm1(-lq, -x * lq)


def exponent_plain(lq: float, x: float) -> float:
    """(ln q) / (q^x - 1)."""
    return _scaled_reciprocal_expm1(lq, x * lq)


def _scaled_reciprocal_expm1(a: float, y: float) -> float:
    """a / (e^y - 1), underflowing to a e^-y instead of overflowing."""
    if y > 700.0:
        return a * math.exp(-y)
    return a / math.expm1(y)


def _log_expm1_over_id(y: float) -> float:
    """ln((e^y - 1) / y) for y > 0; series below 0.1 to avoid cancellation."""
    if y < 0.1:
        z2 = 0.25 * y * y
        return 0.5 * y + z2 * (1.0 / 6 + z2 * (-1.0 / 180 + z2 * (1.0 / 2835 - z2 / 37800)))
    return log_expm1(y) - math.log(y)


# -- squared-trigamma combination -------------------------------------------------------------

def _shift_const(p: QParam) -> float:
    return p.ln_q if p.branch is Branch.SUB_UNIT else 0.0


def theorem1_value(p, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> Certified:
    """[psi'_q(x) - c]^2 + psi''_q(x), c = ln q for q < 1 and 0 for q > 1."""
    p = _param(p)
    x = check_x(x)
    _non_classical(p, "theorem1_value")
    return theorem1_derivative(p, x, 0, policy)


def classical_theorem1_value(x: float) -> Certified:
    """psi''(x) + [psi'(x)]^2, the q = 1 member of the family."""
    x = check_x(x)
    d1 = polygamma_classical(1, x)
    d2 = polygamma_classical(2, x)
    err = SAFETY * (2.0 * abs(d1.value) * d1.err_bound + d2.err_bound)
    return Certified(d1.value**2 + d2.value, err, d1.terms_used + d2.terms_used)


def theorem1_derivative(p, x: float, n: int, policy: SeriesPolicy = DEFAULT_POLICY) -> Certified:
    """n-th x-derivative of the squared-trigamma combination, by the Leibniz rule.

    With g = psi'_q - c the combination is g^2 + psi''_q, so
    f^(n) = sum_k C(n,k) g^(k) g^(n-k) + psi_q^(n+2).  Needs n + 2 <= 6.
    """
    p = _param(p)
    x = check_x(x)
    if p.branch is Branch.CLASSICAL:
        polys = [None] + [polygamma_classical(m, x) for m in range(1, n + 3)]
    else:
        polys = [None] + [q_polygamma(p, m, x, policy) for m in range(1, n + 3)]
    g = [polys[1].value - _shift_const(p)] + [polys[k + 1].value for k in range(1, n + 1)]
    ge = [polys[k + 1].err_bound for k in range(n + 1)]
    value_parts = [polys[n + 2].value]
    err = polys[n + 2].err_bound
    for k in range(n + 1):
        c = comb(n, k)
        value_parts.append(c * g[k] * g[n - k])
        err += c * (abs(g[k]) * ge[n - k] + abs(g[n - k]) * ge[k])
    terms = sum(pp.terms_used for pp in polys[1:])
    return Certified(math.fsum(value_parts), SAFETY * err, terms)


# -- increasing functions and bounds -------------------------------------------------------------

def theorem2_value(kind, p, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> Certified:
    """phi_q, varphi_q (q > 1) or Phi_q, Theta_q (0 < q < 1) at x."""
    kind = Theorem2Kind(kind)
    p = _param(p)
    x = check_x(x)
    if p.branch is not kind.branch:
        raise BranchMismatch(f"{kind.value} requires the {kind.branch.value} branch, got q = {p.q}")
    psi = q_digamma(p, x, policy)
    lq = p.ln_q
    t = exponent_qx(lq, x) if kind.uses_qx_numerator else exponent_plain(lq, x)
    parts = [psi.value, log_expm1(t)]
    if kind.branch is Branch.SUB_UNIT:
        parts.append(-lq * x)
    return Certified(math.fsum(parts), SAFETY * psi.err_bound, psi.terms_used)


def digamma_bounds(p, x: float, policy: SeriesPolicy = DEFAULT_POLICY,
                   psi1: Certified | None = None) -> BoundsPair:
    """Lower and upper bounds for psi_q(x) with best-possible constants.

    ``psi1`` may carry a precomputed psi_q(1) so grid sweeps evaluate it once.
    """
    p = _param(p)
    x = check_x(x)
    _non_classical(p, "digamma_bounds")
    if psi1 is None:
        psi1 = q_digamma(p, 1.0, policy)
    lq = p.ln_q
    top = math.log(lq / (p.q - 1.0))
    if p.branch is Branch.SUB_UNIT:
        tail = lq * x - log_expm1(exponent_qx(lq, x))
        return BoundsPair(psi1.value + tail, top + tail)
    tail = -log_expm1(exponent_plain(lq, x))
    return BoundsPair(psi1.value - lq + tail, top - 0.5 * lq + tail)


def lower_gap(p, x: float, policy: SeriesPolicy = DEFAULT_POLICY,
              psi1: Certified | None = None) -> Certified:
    """psi_q(x) minus its lower bound.

    ``err_bound`` here also carries a rounding allowance for the subtraction.
    """
    p = _param(p)
    x = check_x(x)
    _non_classical(p, "lower_gap")
    if psi1 is None:
        psi1 = q_digamma(p, 1.0, policy)
    psi = q_digamma(p, x, policy)
    b = digamma_bounds(p, x, policy, psi1)
    rounding = 8.0 * EPS * (abs(psi.value) + abs(b.lower) + abs(psi1.value) + abs(p.ln_q * x))
    err = SAFETY * (psi.err_bound + psi1.err_bound) + rounding
    return Certified(psi.value - b.lower, err, psi.terms_used + psi1.terms_used)


def upper_gap(p, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> Certified:
    """Upper bound minus psi_q(x), in a cancellation-free form.

    With L = |ln q|, b = min(q, 1/q), w = b^x and y = L w / (1 - w), both
    branches reduce to  L S_0(b, x) + ln(1 - w) - ln((e^y - 1)/y).  Every
    piece is O(w), so the gap keeps full relative accuracy for large x
    where the direct difference would cancel to zero.
    """
    p = _param(p)
    x = check_x(x)
    _non_classical(p, "upper_gap")
    L = abs(p.ln_q)
    s0 = _lambert_series(-L, x, 0, 0.0, 1.0, policy)
    w = math.exp(-L * x)
    y = _scaled_reciprocal_expm1(L, L * x)  # L w / (1 - w)
    parts = [L * s0.value, math.log1p(-w), -_log_expm1_over_id(y)]
    rounding = 8.0 * EPS * sum(abs(v) for v in parts)
    return Certified(math.fsum(parts), SAFETY * L * s0.err_bound + rounding, s0.terms_used)


# -- proof-level sums --------------------------------------------------------

def _check_proof_args(i, q):
    if int(i) != i or i < 3:
        raise DomainError(f"i must be an integer >= 3, got {i!r}")
    if not (math.isfinite(q) and q > 1.0):
        raise DomainError(f"q must exceed 1, got {q!r}")


def proof_inequality_sides(i: int, q: float) -> BoundsPair:
    """Both sides of the reduced inequality behind complete monotonicity.

    lower = sum_j j(i-j) / ((q^j - 1)(1 - q^(i-j))),
    upper = (i-2) i / ((ln q)(1 - q^i)); the proof asserts lower < upper.
    """
    _check_proof_args(i, q)
    lq = math.log(q)
    lower = math.fsum(
        j * (i - j) / (math.expm1(j * lq) * -math.expm1((i - j) * lq)) for j in range(1, i)
    )
    upper = (i - 2) * i / (lq * -math.expm1(i * lq))
    return BoundsPair(lower, upper)


def antisymmetry_sum(i: int, q: float) -> float:
    """sum_j j(i-j)(q^(i-j) - q^j) / ((q^j - 1)(q^(i-j) - 1)); identically zero."""
    _check_proof_args(i, q)
    return math.fsum(
        j * (i - j) * (q ** (i - j) - q**j) / ((q**j - 1.0) * (q ** (i - j) - 1.0))
        for j in range(1, i)
    )


def c_coeff(i: int, q: float, x: float) -> float:
    """i (ln q) q^(-i x) / (1 - q^(-i)), positive for q > 1.

    x = 0 is accepted as a boundary probe.
    """
    if int(i) != i or i < 1:
        raise DomainError(f"i must be a positive integer, got {i!r}")
    if not (math.isfinite(q) and q > 1.0):
        raise DomainError(f"q must exceed 1, got {q!r}")
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"x must be nonnegative, got {x!r}")
    lq = math.log(q)
    return i * lq * math.exp(-i * x * lq) / -math.expm1(-i * lq)


def _adaptive_i_max(lq: float, x: float, cap: int) -> int:
    i = 1
    while i < cap:
        if i * lq * math.exp(-i * x * lq) / -math.expm1(-i * lq) < 1e-16:
            return i
        i = i + 1 if i < 64 else int(i * 1.25)
    return cap


def series_identity_lhs(p, x: float, policy: SeriesPolicy = DEFAULT_POLICY,
                        i_max: int | None = None) -> float:
    """1 + sum_{i=2}^{I} sum_{j<i} c_j c_{i-j} - sum_{i=1}^{I} (i-2) c_i.

    Tends to theorem1_value / (ln q)^2 as I grows.  The double sum is
    sum over j + k <= I of c_j c_k, evaluated as sum_j c_j * prefix(I - j).
    """
    p = _param(p)
    x = check_x(x)
    if p.branch is not Branch.SUPER_UNIT:
        raise BranchMismatch("series_identity_lhs requires q > 1")
    lq = p.ln_q
    if i_max is None:
        i_max = _adaptive_i_max(lq, x, int(policy.max_terms))
    if int(i_max) != i_max or i_max < 1:
        raise DomainError(f"i_max must be a positive integer, got {i_max!r}")
    i = np.arange(1, i_max + 1, dtype=np.float64)
    c = i * lq * np.exp(-i * x * lq) / -np.expm1(-i * lq)
    prefix = np.concatenate(([0.0], np.cumsum(c)))  # prefix[n] = c_1 + ... + c_n
    double = float(np.dot(c[: i_max - 1], prefix[i_max - 1 : 0 : -1])) if i_max >= 2 else 0.0
    linear = math.fsum(((i - 2.0) * c).tolist())
    return 1.0 + double - linear


# -- classical-limit functions --------------------------------------------

def batir_function(x: float) -> Certified:
    """psi(x) + ln(e^(1/x) - 1), the common q -> 1 limit of the four functions."""
    x = check_x(x)
    psi = digamma_classical(x)
    t = 1.0 / x
    if x < 0.02:
        bracket = t + math.log1p(-math.exp(-t))
    else:
        bracket = math.log(math.expm1(t))
    return Certified(psi.value + bracket, psi.err_bound, psi.terms_used)


def remark2_value(p, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> Certified:
    """psi'_q e^(psi_q) for q >= 1; [psi'_q - ln q] e^(psi_q - x ln q) for q < 1."""
    p = _param(p)
    x = check_x(x)
    psi = q_digamma(p, x, policy)
    d1 = q_polygamma(p, 1, x, policy)
    if p.branch is Branch.SUB_UNIT:
        g, e = d1.value - p.ln_q, psi.value - p.ln_q * x
    else:
        g, e = d1.value, psi.value
    ex = math.exp(e)
    err = SAFETY * ex * (d1.err_bound + abs(g) * psi.err_bound)
    return Certified(g * ex, err, psi.terms_used + d1.terms_used)
