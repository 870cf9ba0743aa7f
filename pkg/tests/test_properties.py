"""Randomised invariants."""

import math

from hypothesis import given, settings, strategies as st

from qpolygamma import digamma_bounds, log_q_gamma, q_digamma, q_polygamma, theorem1_value, theorem2_value
from qpolygamma.qcore import binom2

q_sub = st.floats(0.05, 0.95)
q_super = st.floats(1.05, 20.0)
xs = st.floats(0.05, 25.0)


@settings(max_examples=60, deadline=None)
@given(q=q_sub, x=xs)
def test_log_gamma_reflection(q, x):
    a, b = log_q_gamma(1 / q, x), log_q_gamma(q, x)
    res = a.value - (binom2(x - 1) * math.log(1 / q) + b.value)
    assert abs(res) <= a.err_bound + b.err_bound + 1e-10


@settings(max_examples=60, deadline=None)
@given(q=q_sub, x=xs)
def test_digamma_reflection(q, x):
    a, b = q_digamma(q, x), q_digamma(1 / q, x)
    assert abs(a.value - (math.log(q) * (x - 1.5) + b.value)) <= a.err_bound + b.err_bound + 1e-10


@settings(max_examples=60, deadline=None)
@given(q=st.one_of(q_sub, q_super), x=xs)
def test_theorem1_positive(q, x):
    c = theorem1_value(q, x)
    assert c.value > 10 * c.err_bound


@settings(max_examples=60, deadline=None)
@given(q=st.one_of(q_sub, q_super), x=xs, m=st.integers(1, 6))
def test_polygamma_reflection_higher(q, x, m):
    a, b = q_polygamma(q, m, x), q_polygamma(1 / q, m, x)
    shift = math.log(q) if m == 1 else 0.0
    scale = max(1.0, abs(a.value))
    assert abs(a.value - shift - b.value) <= a.err_bound + b.err_bound + 1e-12 * scale


@settings(max_examples=60, deadline=None)
@given(q=st.one_of(q_sub, q_super), x=st.floats(0.05, 8.0), dx=st.floats(0.01, 2.0))
def test_theorem2_increasing(q, x, dx):
    kinds = ("phi", "varphi") if q > 1 else ("phi_sub", "theta")
    for k in kinds:
        a, b = theorem2_value(k, q, x), theorem2_value(k, q, x + dx)
        assert b.value >= a.value - a.err_bound - b.err_bound - 1e-10


@settings(max_examples=60, deadline=None)
@given(q=st.one_of(q_sub, q_super), x=st.floats(0.05, 8.0))
def test_sandwich_random(q, x):
    b = digamma_bounds(q, x)
    v = q_digamma(q, x).value
    assert b.lower < v < b.upper
