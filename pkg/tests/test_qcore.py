import math

import mpmath
import numpy as np
import pytest

from qpolygamma import (
    Branch,
    ClassicalBranch,
    DomainError,
    NonPositiveQ,
    OrderTooLarge,
    SeriesPolicy,
    ToleranceNotMet,
    classify,
    digamma_classical,
    log_q_gamma,
    polygamma_classical,
    q_digamma,
    q_polygamma,
    reflect_digamma,
)
from qpolygamma.qcore import binom2
from qpolygamma.verify import finite_difference

from oracles import log_q_gamma_product, q_digamma_direct

PSI_HALF_1 = -0.4205290343560458  # direct summation, 80 and 4000 terms agree
LN_1_5 = 0.4054651081081643  # truncated product at q=0.5, x=3


@pytest.mark.parametrize("q, branch", [(0.5, Branch.SUB_UNIT), (1.0, Branch.CLASSICAL),
                                       (2.0, Branch.SUPER_UNIT), (1 + 5e-13, Branch.CLASSICAL),
                                       (1 - 2e-12, Branch.SUB_UNIT)])
def test_classify(q, branch):
    p = classify(q)
    assert p.branch is branch
    assert (p.ln_q == 0.0) == (branch is Branch.CLASSICAL)
    if branch is not Branch.CLASSICAL:
        assert p.ln_q == math.log(q)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
def test_classify_rejects(bad):
    with pytest.raises(NonPositiveQ):
        classify(bad)


def test_policy_validation():
    with pytest.raises(ValueError):
        SeriesPolicy(rel_tol=0)
    with pytest.raises(ValueError):
        SeriesPolicy(max_terms=0)


@pytest.mark.parametrize("q", [0.5, 2.0])
def test_log_gamma_at_one_is_zero(q):
    assert log_q_gamma(q, 1.0).value == 0.0


@pytest.mark.parametrize("q", [0.2, 0.5, 0.9])
@pytest.mark.parametrize("x", [1.0, 2.0])
def test_log_gamma_telescopes(q, x):
    c = log_q_gamma(q, x)
    assert abs(c.value) <= c.err_bound + 1e-14


def test_log_gamma_three():
    assert log_q_gamma_product(0.5, 3.0) == pytest.approx(LN_1_5, abs=1e-15)
    c = log_q_gamma(0.5, 3.0)
    assert abs(c.value - math.log(1.5)) <= c.err_bound + 1e-14


@pytest.mark.parametrize("q", [0.3, 0.75])
@pytest.mark.parametrize("x", [0.1, 0.8, 2.5, 11.0])
def test_log_gamma_against_mpmath(q, x):
    ref = float(mpmath.log(mpmath.qgamma(x, q)))
    c = log_q_gamma(q, x)
    assert abs(c.value - ref) <= c.err_bound + 1e-13 * max(1, abs(ref))


def test_log_gamma_classical_delegates():
    assert log_q_gamma(1.0, 4.0).value == pytest.approx(math.log(6.0), abs=1e-14)


def test_err_bound_within_tolerance():
    pol = SeriesPolicy()
    for q in (0.3, 0.9, 1.7):
        for x in (0.05, 1.3, 8.0):
            for c in (log_q_gamma(q, x), q_digamma(q, x), q_polygamma(q, 3, x)):
                assert 0 <= c.err_bound <= max(pol.abs_tol, pol.rel_tol * abs(c.value))
                assert c.terms_used <= pol.max_terms


def test_digamma_large_x_limit():
    c = q_digamma(0.5, 60.0)
    assert abs(c.value - math.log(2.0)) <= c.err_bound + 1e-12


def test_digamma_half_at_one():
    assert q_digamma_direct(0.5, 1.0, 80) == pytest.approx(PSI_HALF_1, abs=1e-16)
    c = q_digamma(0.5, 1.0)
    assert abs(c.value - PSI_HALF_1) <= c.err_bound + 1e-14


def test_digamma_super_difference():
    d = q_digamma(2.0, 2.0).value - q_digamma(2.0, 1.0).value
    assert d == pytest.approx(2 * math.log(2), abs=1e-12)


@pytest.mark.parametrize("q", [0.2, 0.5, 0.9, 1.5, 5.0])
@pytest.mark.parametrize("x", [0.05, 0.7, 3.3, 30.0])
def test_digamma_against_direct_sum(q, x):
    c = q_digamma(q, x)
    ref = q_digamma_direct(q, x, 20000)
    assert abs(c.value - ref) <= c.err_bound + 1e-13 * max(1.0, abs(ref))


def test_digamma_classical_delegates():
    assert q_digamma(1.0, 3.0) == digamma_classical(3.0)
    assert q_polygamma(1.0, 2, 3.0) == polygamma_classical(2, 3.0)


def test_trigamma_sub_positive():
    assert q_polygamma(0.5, 1, 2.0).value > 0


def test_trigamma_reflection():
    lhs = q_polygamma(0.5, 1, 1.7)
    rhs = q_polygamma(2.0, 1, 1.7)
    assert abs(lhs.value - (math.log(0.5) + rhs.value)) <= lhs.err_bound + rhs.err_bound + 1e-12


def test_tetragamma_reflection():
    a, b = q_polygamma(2.0, 2, 1.3), q_polygamma(0.5, 2, 1.3)
    assert abs(a.value - b.value) <= a.err_bound + b.err_bound + 1e-12


@pytest.mark.parametrize("q", [0.3, 0.9])
@pytest.mark.parametrize("m", range(1, 7))
def test_sign_pattern_sub_unit(q, m):
    for x in (0.05, 1.0, 12.0):
        v = q_polygamma(q, m, x).value
        assert (v > 0) if m % 2 else (v < 0)


@pytest.mark.parametrize("q", [0.3, 1.8])
@pytest.mark.parametrize("m", range(1, 5))
def test_polygamma_against_mpmath_diff(q, m):
    x = 1.4
    ref = float(mpmath.diff(lambda t: mpmath.log(mpmath.qgamma(t, q)), x, m + 1)) if q < 1 else None
    if ref is None:  # q > 1: differentiate the reflected form
        f = lambda t: binom2(t - 1) * mpmath.log(q) + mpmath.log(mpmath.qgamma(t, 1 / q))
        ref = float(mpmath.diff(f, x, m + 1))
    c = q_polygamma(q, m, x)
    assert c.value == pytest.approx(ref, rel=1e-10)


def test_polygamma_errors():
    with pytest.raises(OrderTooLarge):
        q_polygamma(0.5, 7, 1.0)
    with pytest.raises(DomainError):
        q_polygamma(0.5, -1, 1.0)
    with pytest.raises(DomainError):
        q_digamma(0.5, 0.0)
    with pytest.raises(DomainError):
        log_q_gamma(2.0, -1.0)


def test_small_x_rejected():
    with pytest.raises(ToleranceNotMet):
        q_digamma(0.5, 5e-5)


def test_max_terms_exhausted():
    with pytest.raises(ToleranceNotMet):
        q_digamma(0.99, 0.1, SeriesPolicy(max_terms=50))


def test_reflect_digamma_at_three_halves():
    a = reflect_digamma(0.5, 1.5)
    assert a.value == q_digamma(0.5, 1.5).value
    b = q_digamma(2.0, 1.5)
    assert abs(a.value - b.value) <= a.err_bound + b.err_bound + 1e-13


@pytest.mark.parametrize("q, x", [(0.5, 2.5), (0.9, 0.3), (3.0, 0.8)])
def test_reflect_digamma_residual(q, x):
    a = reflect_digamma(q, x)
    b = q_digamma(1.0 / q, x)
    assert abs(a.value - b.value) <= a.err_bound + b.err_bound + 1e-12


def test_reflect_digamma_classical():
    with pytest.raises(ClassicalBranch):
        reflect_digamma(1.0, 2.0)


@pytest.mark.parametrize("q", [1.5, 2.0, 5.0])
def test_log_gamma_reflection(q):
    for x in np.geomspace(0.05, 30, 17):
        a, b = log_q_gamma(q, x), log_q_gamma(1 / q, x)
        res = a.value - (binom2(x - 1) * math.log(q) + b.value)
        assert abs(res) <= a.err_bound + b.err_bound + 1e-12


@pytest.mark.parametrize("q", [0.3, 0.9, 1.5, 4.0])
def test_derivative_consistency(q):
    for x in np.geomspace(0.2, 20, 12):
        fd = finite_difference(lambda t: q_digamma(q, t).value, x, 1)
        an = q_polygamma(q, 1, x)
        assert abs(fd - an.value) <= max(1e-6, 10 * an.err_bound)


@pytest.mark.parametrize("q", [0.3, 0.8])
def test_difference_equation_sub(q):
    lq = math.log(q)
    for x in np.geomspace(0.05, 20, 11):
        a, b = q_digamma(q, x + 1), q_digamma(q, x)
        rhs = -lq * q**x / (1 - q**x)
        assert abs(a.value - b.value - rhs) <= a.err_bound + b.err_bound + 1e-10


@pytest.mark.parametrize("q", [1.4, 6.0])
def test_trigamma_difference_equation_super(q):
    lq = math.log(q)
    for x in np.geomspace(0.05, 20, 11):
        a, b = q_polygamma(q, 1, x + 1), q_polygamma(q, 1, x)
        rhs = lq * (-lq * q**x / (q**x - 1) ** 2)
        assert abs(a.value - b.value - rhs) <= a.err_bound + b.err_bound + 1e-10


@pytest.mark.parametrize("q", [0.999, 1.001])
def test_continuity_in_q(q):
    for x in np.linspace(0.5, 10, 20):
        assert abs(q_digamma(q, x).value - digamma_classical(x).value) <= 0.01
