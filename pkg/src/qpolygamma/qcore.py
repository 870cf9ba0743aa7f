"""Certified evaluation of ln Gamma_q, psi_q and the q-polygamma functions.

Both non-classical branches reduce to the same Lambert-type series

    S_m(b, x) = sum_{n>=1} n^m b^(n x) / (1 - b^n),    0 < b < 1,

with b = q below one and b = 1/q above one.  Terms are generated in numpy
chunks; after every candidate truncation point N we bound the discarded
tail by a geometric majorant (``tail`` inside ``_lambert_series``) and stop at the first
N whose scaled tail meets the policy tolerance.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .base import (
    DEFAULT_POLICY,
    Branch,
    Certified,
    DerivOrder,
    QParam,
    SeriesPolicy,
    as_order,
    check_x,
    classify,
)
from .classical import digamma_classical, log_gamma_classical, polygamma_classical
from .errors import ClassicalBranch, ToleranceNotMet

__all__ = [
    "Branch", "Certified", "DerivOrder", "QParam", "SeriesPolicy", "DEFAULT_POLICY",
    "classify", "log_q_gamma", "q_digamma", "q_polygamma", "reflect_digamma",
    "digamma_classical", "polygamma_classical", "log_gamma_classical", "binom2",
]

MIN_SERIES_X = 1e-4
_FIRST_CHUNK = 256


def binom2(t: float) -> float:
    """Generalised binomial C(t, 2) = t(t-1)/2."""
    return 0.5 * t * (t - 1.0)


def _as_param(p) -> QParam:
    return p if isinstance(p, QParam) else classify(p)


def _certified_sum(
    terms: Callable[[np.ndarray], np.ndarray],
    tail: Callable[[np.ndarray, np.ndarray], np.ndarray],
    offset: float,
    factor: float,
    policy: SeriesPolicy,
    start: int,
    size_hint: int,
) -> Certified:
    """Sum ``offset + factor * sum_{n>=start} terms(n)`` to tolerance.

    ``tail(N, t_next)`` must return a rigorous bound on the unscaled tail
    remaining after the term with index N has been added, given the array
    of next terms ``t_next = terms(N + 1)``.
    """
    max_terms = int(policy.max_terms)
    scale = abs(factor)
    chunks = []
    total = 0.0
    lo = start
    size = max(64, min(size_hint, max_terms))
    while True:
        hi = min(lo + size, start + max_terms)
        idx = np.arange(lo, hi + 1, dtype=np.float64)  # one lookahead term
        t = terms(idx)
        partial = total + np.cumsum(t[:-1])
        bound = tail(idx[:-1], t[1:])
        tol = np.maximum(policy.abs_tol, policy.rel_tol * np.abs(offset + factor * partial))
        ok = np.nonzero(scale * bound <= tol)[0]
        if ok.size:
            j = int(ok[0])
            chunks.append(t[: j + 1])
            s = math.fsum(np.concatenate(chunks).tolist())
            n_used = int(idx[j]) - start + 1
            return Certified(offset + factor * s, float(scale * bound[j]), n_used)
        chunks.append(t[:-1])
        total = float(partial[-1])
        if hi >= start + max_terms:
            raise ToleranceNotMet(
                f"series tail {scale * bound[-1]:.3g} above tolerance after {max_terms} terms"
            )
        lo = hi + 1
        size *= 2


def _size_hint(lb: float, x: float, m: int = 0) -> int:
    rate = -lb * x  # terms decay like n^m exp(-rate n)
    return int(min(1e7, (36.0 + 3.0 * m) / rate * 1.1)) + 16


def _lambert_series(lb: float, x: float, m: int, offset: float, factor: float,
                    policy: SeriesPolicy) -> Certified:
    """offset + factor * S_m(b, x) with b = exp(lb), lb < 0."""
    if x < MIN_SERIES_X:
        raise ToleranceNotMet(
            f"x = {x:g} below {MIN_SERIES_X:g}: the q-series would need too many terms"
        )
    r = math.exp(lb * x)

    def terms(n):
        return n**m * np.exp(n * (x * lb)) / -np.expm1(n * lb)

    def tail(n, t_next):
        # For k > N: t_{k+1}/t_k <= r (1 + 1/(N+1))^m because 1/(1-b^k) decreases.
        r_eff = r * (1.0 + 1.0 / (n + 1.0)) ** m
        with np.errstate(divide="ignore"):
            return np.where(r_eff < 1.0, t_next / (1.0 - r_eff), np.inf)

    return _certified_sum(terms, tail, offset, factor, policy, 1, _size_hint(lb, x, m))


def _log_product_series(lb: float, x: float, offset: float, policy: SeriesPolicy) -> Certified:
    """offset + sum_{i>=0} [ln(1 - b^(i+1)) - ln(1 - b^(i+x))]."""
    if x < MIN_SERIES_X:
        raise ToleranceNotMet(
            f"x = {x:g} below {MIN_SERIES_X:g}: the q-series would need too many terms"
        )
    b = math.exp(lb)
    bx = math.exp(lb * x)
    gap = abs(b - bx)
    top = max(b, bx)

    def terms(i):
        return np.log1p(-np.exp((i + 1.0) * lb)) - np.log1p(-np.exp((i + x) * lb))

    def tail(i, _t_next):
        # after index i: sum_{k>i} |ln(1-b^k b) - ln(1-b^k b^x)| <= gap b^(i+1) / ((1-b)(1 - b^(i+1) top))
        bn = np.exp((i + 1.0) * lb)
        return gap * bn / ((1.0 - b) * (1.0 - bn * top))

    return _certified_sum(terms, tail, offset, 1.0, policy, 0, _size_hint(lb, min(x, 1.0)))


def log_q_gamma(p, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> Certified:
    """ln Gamma_q(x) on any branch."""
    p = _as_param(p)
    x = check_x(x)
    if p.branch is Branch.CLASSICAL:
        return log_gamma_classical(x)
    if p.branch is Branch.SUB_UNIT:
        offset = (1.0 - x) * math.log1p(-p.q)
        return _log_product_series(p.ln_q, x, offset, policy)
    offset = (1.0 - x) * math.log(p.q - 1.0) + binom2(x) * p.ln_q
    return _log_product_series(-p.ln_q, x, offset, policy)


def q_digamma(p, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> Certified:
    """psi_q(x) on any branch."""
    p = _as_param(p)
    x = check_x(x)
    if p.branch is Branch.CLASSICAL:
        return digamma_classical(x)
    lq = p.ln_q
    if p.branch is Branch.SUB_UNIT:
        return _lambert_series(lq, x, 0, -math.log1p(-p.q), lq, policy)
    offset = -math.log(p.q - 1.0) + lq * (x - 0.5)
    return _lambert_series(-lq, x, 0, offset, -lq, policy)


def q_polygamma(p, d, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> Certified:
    """psi_q^(m)(x) for 0 <= m <= 6 on any branch.

    Above one the series is differentiated term by term in x rather than
    reflected to 1/q, so both branches carry the same kind of tail bound.
    """
    m = as_order(d).m
    p = _as_param(p)
    x = check_x(x)
    if m == 0:
        return q_digamma(p, x, policy)
    if p.branch is Branch.CLASSICAL:
        return polygamma_classical(m, x)
    lq = p.ln_q
    if p.branch is Branch.SUB_UNIT:
        return _lambert_series(lq, x, m, 0.0, lq ** (m + 1), policy)
    offset = lq if m == 1 else 0.0
    return _lambert_series(-lq, x, m, offset, -lq * (-lq) ** m, policy)


def reflect_digamma(p, x: float, policy: SeriesPolicy = DEFAULT_POLICY) -> Certified:
    """psi_{1/q}(x) obtained from psi_q(x) - (ln q)(x - 3/2)."""
    p = _as_param(p)
    x = check_x(x)
    if p.branch is Branch.CLASSICAL:
        raise ClassicalBranch("reflection is the identity at q = 1")
    base = q_digamma(p, x, policy)
    return Certified(base.value - p.ln_q * (x - 1.5), base.err_bound, base.terms_used)
