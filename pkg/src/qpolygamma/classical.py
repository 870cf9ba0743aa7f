"""Classical gamma-family functions (the q = 1 branch).

All three routines shift the argument upward with the functional
recurrence until it exceeds a threshold, then sum a truncated asymptotic
expansion.  The expansions are enveloping, so the first omitted term
bounds the remainder; we report twice that as ``err_bound``.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .base import Certified, as_order, check_x
from .errors import DomainError

# B_2, B_4, ..., B_20
_BERNOULLI = [
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
    Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510),
    Fraction(43867, 798), Fraction(-174611, 330),
]
B2K = [float(b) for b in _BERNOULLI]

_DIGAMMA_SHIFT = 10.0
_DIGAMMA_TERMS = 8
_POLY_SHIFT = 20.0
_POLY_TERMS = 9
_LGAMMA_SHIFT = 10.0
_LGAMMA_TERMS = 8

EULER_GAMMA = 0.57721566490153286061


def _shift(x, threshold):
    n = max(0, math.ceil(threshold - x))
    return n, x + n


def digamma_classical(x: float) -> Certified:
    """Digamma psi(x) for x > 0."""
    x = check_x(x)
    n, y = _shift(x, _DIGAMMA_SHIFT)
    parts = [math.log(y), -0.5 / y]
    y2 = y * y
    yp = y2
    for k in range(1, _DIGAMMA_TERMS + 1):
        parts.append(-B2K[k - 1] / (2 * k * yp))
        yp *= y2
    omitted = abs(B2K[_DIGAMMA_TERMS] / (2 * (_DIGAMMA_TERMS + 1) * yp))
    parts.extend(-1.0 / (x + k) for k in range(n))
    return Certified(math.fsum(parts), 2.0 * omitted, n + _DIGAMMA_TERMS + 2)


def polygamma_classical(d, x: float) -> Certified:
    """Polygamma psi^(m)(x), 1 <= m <= 6."""
    m = as_order(d).m
    if m == 0:
        raise DomainError("polygamma_classical needs m >= 1; use digamma_classical")
    x = check_x(x)
    n, y = _shift(x, _POLY_SHIFT)
    sign = -1.0 if m % 2 == 0 else 1.0  # (-1)^(m+1)
    mf = math.factorial(m)
    parts = [math.factorial(m - 1) / y**m, mf / (2.0 * y ** (m + 1))]
    for k in range(1, _POLY_TERMS + 1):
        coef = math.factorial(2 * k + m - 1) / math.factorial(2 * k)
        parts.append(B2K[k - 1] * coef / y ** (2 * k + m))
    k = _POLY_TERMS + 1
    omitted = abs(B2K[k - 1] * math.factorial(2 * k + m - 1) / math.factorial(2 * k) / y ** (2 * k + m))
    head = sign * math.fsum(parts)
    # psi^(m)(x) = psi^(m)(x+n) - (-1)^m m! sum 1/(x+k)^(m+1)
    rec = math.fsum(1.0 / (x + j) ** (m + 1) for j in range(n))
    value = math.fsum([head, sign * mf * rec])
    return Certified(value, 2.0 * omitted, n + _POLY_TERMS + 2)


def log_gamma_classical(x: float) -> Certified:
    """ln Gamma(x) for x > 0 via Stirling's series."""
    x = check_x(x)
    n, y = _shift(x, _LGAMMA_SHIFT)
    parts = [(y - 0.5) * math.log(y), -y, 0.5 * math.log(2.0 * math.pi)]
    y2 = y * y
    yp = y
    for k in range(1, _LGAMMA_TERMS + 1):
        parts.append(B2K[k - 1] / (2 * k * (2 * k - 1) * yp))
        yp *= y2
    k = _LGAMMA_TERMS + 1
    omitted = abs(B2K[k - 1] / (2 * k * (2 * k - 1) * yp))
    parts.extend(-math.log(x + j) for j in range(n))
    return Certified(math.fsum(parts), 2.0 * omitted, n + _LGAMMA_TERMS + 3)
