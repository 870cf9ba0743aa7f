"""Independent reference values, deliberately naive.

Nothing here imports the library.  Each oracle uses the most direct
summation available so that it fails differently from the certified
code paths it is used to check.
"""

import math
from fractions import Fraction


def euler_gamma_oracle(n=20000):
    """Euler's constant from H_n - ln n with Euler-Maclaurin corrections.

    Harmonic sum is accumulated exactly as a Fraction of partial blocks and
    the correction terms 1/(2n) - 1/(12n^2) + 1/(120n^4) - 1/(252n^6)
    leave an O(n^-8) remainder, far below double precision.
    """
    h = math.fsum(1.0 / k for k in range(1, n + 1))
    corr = (Fraction(1, 2 * n) - Fraction(1, 12 * n**2)
            + Fraction(1, 120 * n**4) - Fraction(1, 252 * n**6))
    return h - math.log(n) - float(corr)


def zeta_oracle(s, n=200000):
    """Riemann zeta(s), s >= 2, by direct sum plus integral tail estimate."""
    head = math.fsum(1.0 / k**s for k in range(1, n + 1))
    # Euler-Maclaurin: tail ~ n^(1-s)/(s-1) - n^-s/2 + s n^(-s-1)/12
    tail = n ** (1 - s) / (s - 1) - 0.5 * n ** (-s) + s * n ** (-s - 1) / 12.0
    return head + tail


def q_digamma_direct(q, x, terms=4000):
    """psi_q(x) by plain partial sums of the defining series."""
    lq = math.log(q)
    if q < 1:
        s = math.fsum(q ** (k * x) / (1.0 - q**k) for k in range(1, terms + 1))
        return -math.log(1.0 - q) + lq * s
    s = math.fsum(q ** (-i * x) / (1.0 - q ** (-i)) for i in range(1, terms + 1))
    return -math.log(q - 1.0) + lq * (x - 0.5 - s)


def log_q_gamma_product(q, x, terms=4000):
    """ln Gamma_q(x) from the truncated infinite product (q < 1 only)."""
    prod_log = math.fsum(math.log((1.0 - q ** (i + 1)) / (1.0 - q ** (i + x)))
                         for i in range(terms))
    return (1.0 - x) * math.log(1.0 - q) + prod_log
