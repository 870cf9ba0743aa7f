"""Grid-based verification of the proven properties.

Each ``check_*`` function returns a :class:`CheckReport` whose cases carry a
signed margin (positive is good) and the error budget that was allowed.
Case order is fixed by sorting on (label, q, x), so reports built from the
same inputs serialize byte-for-byte identically.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .base import DEFAULT_POLICY, Branch, QParam, SeriesPolicy, check_x, classify
from .classical import EULER_GAMMA, digamma_classical
from .errors import BranchMismatch, ClassicalBranch, DomainError, OrderTooLarge
from .qcore import binom2, log_q_gamma, q_digamma, q_polygamma
from .theorems import (
    EPS,
    Theorem2Kind,
    antisymmetry_sum,
    batir_function,
    lower_gap,
    proof_inequality_sides,
    remark2_value,
    series_identity_lhs,
    theorem1_derivative,
    theorem1_value,
    theorem2_value,
    upper_gap,
)

SLACK = 1e-10
PROBE_LOW_X = 1e-3
PROBE_HIGH_X = 50.0
PROBE_THRESHOLD = 0.02
SPOT_POINTS = tuple(float(v) for v in np.geomspace(1.0, 5.0, 10))
PROOF_QS = (1.01, 1.5, 2.0, 10.0)
PROOF_I_RANGE = range(3, 61)
DOUBLE_SUM_XS = (0.2, 0.5, 1.0, 2.0, 5.0)


class Spacing(enum.Enum):
    LINEAR = "linear"
    LOG = "log"


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    n_points: int
    spacing: Spacing = Spacing.LOG

    def __post_init__(self):
        if not (0.0 < self.x_min < self.x_max and math.isfinite(self.x_max)):
            raise DomainError(f"grid needs 0 < x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise DomainError(f"grid needs at least 2 points, got {self.n_points}")

    def points(self) -> tuple[float, ...]:
        make = np.geomspace if Spacing(self.spacing) is Spacing.LOG else np.linspace
        pts = make(self.x_min, self.x_max, int(self.n_points))
        pts[0], pts[-1] = self.x_min, self.x_max
        return tuple(float(v) for v in pts)


DEFAULT_GRID = GridSpec(0.05, 30.0, 64, Spacing.LOG)


@dataclass(frozen=True)
class CheckCase:
    label: str
    q: float
    x: float
    margin: float
    err_budget: float
    passed: bool

    def to_dict(self) -> dict:
        return {"label": self.label, "q": self.q, "x": self.x, "margin": self.margin,
                "err_budget": self.err_budget, "pass": self.passed}


@dataclass(frozen=True)
class CheckReport:
    suite_name: str
    q: float
    k_max: int | None
    cases: tuple[CheckCase, ...] = field(default_factory=tuple)

    @property
    def worst_margin(self) -> float:
        return min(c.margin for c in self.cases)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def failures(self) -> list[CheckCase]:
        return [c for c in self.cases if not c.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite_name,
            "q": self.q,
            "k_max": self.k_max,
            "cases": [c.to_dict() for c in self.cases],
            "worst_margin": self.worst_margin,
            "passed": self.passed,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, allow_nan=False)


def make_report(suite: str, q: float, k_max: int | None, cases: Iterable[CheckCase]) -> CheckReport:
    cases = tuple(sorted(cases, key=lambda c: (c.label, c.q, c.x)))
    if not cases:
        raise DomainError(f"suite {suite!r} produced no cases")
    return CheckReport(suite, float(q), k_max, cases)


def merge_reports(reports: Iterable[CheckReport], suite: str = "all") -> CheckReport:
    """Concatenate suites into one report; labels are prefixed ``suite:``."""
    reports = list(reports)
    cases = [
        CheckCase(f"{r.suite_name}:{c.label}", c.q, c.x, c.margin, c.err_budget, c.passed)
        for r in reports for c in r.cases
    ]
    k_max = next((r.k_max for r in reports if r.k_max is not None), None)
    return make_report(suite, reports[0].q, k_max, cases)


def _case(label, q, x, margin, budget, passed=None) -> CheckCase:
    margin, budget = float(margin), float(budget)
    if passed is None:
        passed = margin >= 0.0
    return CheckCase(label, float(q), float(x), margin, budget, bool(passed))


def _param(p) -> QParam:
    return p if isinstance(p, QParam) else classify(p)


def _require_q_branch(p: QParam, what: str) -> None:
    if p.branch is Branch.CLASSICAL:
        raise ClassicalBranch(f"{what} needs q != 1")


# -- finite differences ----------------------------------------------------

# (coefficients from -r to r, denominator, r); all fourth-order accurate
_STENCILS = {
    1: ((1, -8, 0, 8, -1), 12.0, 2),
    2: ((-1, 16, -30, 16, -1), 12.0, 2),
    3: ((1, -8, 13, 0, -13, 8, -1), 8.0, 3),
    4: ((-1, 12, -39, 56, -39, 12, -1), 6.0, 3),
}


def stencil_gain(order: int, h: float) -> float:
    """Factor by which the stencil amplifies per-evaluation errors."""
    coeffs, den, _ = _STENCILS[order]
    return sum(abs(c) for c in coeffs) / (den * h**order)


def default_step(x: float, order: int) -> float:
    if order <= 2:
        return max(1e-4, 1e-3 * x)
    return max(1e-3, 3e-3 * x)


def finite_difference(f: Callable[[float], float], x: float, order: int, h: float | None = None) -> float:
    """Central-difference estimate of f^(order)(x), order 1..4.

    A cross-check oracle only; nothing in the library evaluates through it.
    """
    if order not in _STENCILS:
        raise DomainError(f"finite-difference order must be 1..4, got {order}")
    if h is None:
        h = default_step(x, order)
    coeffs, den, r = _STENCILS[order]
    if not (h > 0 and x - r * h > 0):
        raise DomainError(f"stencil [{x - r * h:g}, {x + r * h:g}] leaves (0, inf)")
    vals = [c * f(x + (k - r) * h) for k, c in enumerate(coeffs) if c]
    return math.fsum(vals) / (den * h**order)


# -- suites ----------------------------------------------------------------

def check_cm_theorem1(p, grid: GridSpec = DEFAULT_GRID, k_max: int = 4,
                      policy: SeriesPolicy = DEFAULT_POLICY, spot_points=SPOT_POINTS) -> CheckReport:
    """Sign pattern (-1)^n f^(n) >= 0, n = 0..k_max, of the squared-trigamma combination.

    Complete monotonicity is only checked up to order ``k_max``.  Each
    analytic derivative of order n >= 1 is also compared with a central
    difference of the analytic order n-1 at the spot points.
    """
    p = _param(p)
    _require_q_branch(p, "check_cm_theorem1")
    if int(k_max) != k_max or k_max < 0:
        raise DomainError(f"k_max must be a nonnegative integer, got {k_max!r}")
    if k_max > 4:
        raise OrderTooLarge(f"k_max {k_max} exceeds 4")
    cases = []
    for x in grid.points():
        for n in range(k_max + 1):
            d = theorem1_derivative(p, x, n, policy)
            value = (-1) ** n * d.value
            budget = d.err_bound + SLACK
            cases.append(_case(f"cm_n{n}", p.q, x, value + budget, budget))
    for x in spot_points:
        for n in range(1, k_max + 1):
            d = theorem1_derivative(p, x, n, policy)
            prev = theorem1_derivative(p, x, n - 1, policy)
            fd = finite_difference(lambda t: theorem1_derivative(p, t, n - 1, policy).value, x, 1)
            budget = d.err_bound + stencil_gain(1, default_step(x, 1)) * prev.err_bound + SLACK
            tol = max(1e-5, 20.0 * budget)
            cases.append(_case(f"fd_n{n}", p.q, x, tol - abs(fd - d.value), budget))
    return make_report("cm", p.q, k_max, cases)


class MonotoneFn(enum.Enum):
    PHI = "phi"
    VARPHI = "varphi"
    PHI_SUB = "phi_sub"
    THETA = "theta"
    REMARK2 = "remark2"
    BATIR = "batir"


def monotone_functions_for(p: QParam) -> tuple[MonotoneFn, ...]:
    if p.branch is Branch.SUPER_UNIT:
        return (MonotoneFn.PHI, MonotoneFn.VARPHI, MonotoneFn.REMARK2)
    if p.branch is Branch.SUB_UNIT:
        return (MonotoneFn.PHI_SUB, MonotoneFn.THETA, MonotoneFn.REMARK2)
    return (MonotoneFn.REMARK2, MonotoneFn.BATIR)


def _monotone_evaluator(fn: MonotoneFn, p: QParam, policy: SeriesPolicy):
    if fn is MonotoneFn.BATIR:
        return batir_function
    if fn is MonotoneFn.REMARK2:
        return lambda x: remark2_value(p, x, policy)
    kind = Theorem2Kind(fn.value)
    if p.branch is not kind.branch:
        raise BranchMismatch(f"{fn.value} requires the {kind.branch.value} branch, got q = {p.q}")
    return lambda x: theorem2_value(kind, p, x, policy)


def check_monotone(fn_id, p, grid: GridSpec = DEFAULT_GRID,
                   policy: SeriesPolicy = DEFAULT_POLICY) -> CheckReport:
    """Consecutive grid values must satisfy f(x_{i+1}) >= f(x_i) - budget."""
    fn = MonotoneFn(fn_id)
    p = classify(1.0) if fn is MonotoneFn.BATIR else _param(p)
    evaluate = _monotone_evaluator(fn, p, policy)
    xs = grid.points()
    vals = [evaluate(x) for x in xs]
    cases = []
    for x0, a, b in zip(xs, vals, vals[1:]):
        budget = a.err_bound + b.err_bound + 8.0 * EPS * max(abs(a.value), abs(b.value)) + SLACK
        cases.append(_case(f"monotone_{fn.value}", p.q, x0, b.value - a.value + budget, budget))
    return make_report("monotone", p.q, None, cases)


def check_sandwich(p, grid: GridSpec = DEFAULT_GRID, policy: SeriesPolicy = DEFAULT_POLICY,
                   probe_threshold: float = PROBE_THRESHOLD) -> CheckReport:
    """Strict lower < psi_q < upper on the grid plus the two sharpness probes.

    Strict cases carry no absolute slack: the gap minus its own error
    budget must stay positive.
    """
    p = _param(p)
    if p.branch is Branch.CLASSICAL:
        raise BranchMismatch("the double bounds need q != 1")
    psi1 = q_digamma(p, 1.0, policy)
    cases = []
    for x in grid.points():
        lo = lower_gap(p, x, policy, psi1)
        up = upper_gap(p, x, policy)
        lo_m, up_m = lo.value - lo.err_bound, up.value - up.err_bound
        budget = lo.err_bound if lo_m <= up_m else up.err_bound
        margin = min(lo_m, up_m)
        cases.append(_case("sandwich", p.q, x, margin, budget, margin > 0.0))
    lo = lower_gap(p, PROBE_LOW_X, policy, psi1)
    cases.append(_case("sharp_lower", p.q, PROBE_LOW_X,
                       probe_threshold - lo.value - lo.err_bound, lo.err_bound))
    up = upper_gap(p, PROBE_HIGH_X, policy)
    cases.append(_case("sharp_upper", p.q, PROBE_HIGH_X,
                       probe_threshold - up.value - up.err_bound, up.err_bound))
    return make_report("sandwich", p.q, None, cases)


def _dinv_qx_minus_one(lq: float, x: float, order: int) -> float:
    """order-th x-derivative of 1/(q^x - 1), order 0..2."""
    s = math.exp(lq * x)
    sm1 = math.expm1(lq * x)
    if order == 0:
        return 1.0 / sm1
    if order == 1:
        return -lq * s / sm1**2
    return lq * lq * s * (s + 1.0) / sm1**3


def _residual_case(label, p, x, residual, budget):
    return _case(label, p.q, x, budget - abs(residual), budget)


def check_identities(p, grid: GridSpec = DEFAULT_GRID, policy: SeriesPolicy = DEFAULT_POLICY) -> CheckReport:
    """Residuals of the reflection, difference-equation and exp identities."""
    p = _param(p)
    if p.branch is Branch.CLASSICAL:
        raise BranchMismatch("identities relate q and 1/q; q = 1 is excluded")
    inv = p.inverse()
    lq = p.ln_q
    cases = []
    for x in grid.points():
        # log-gamma reflection: ln G_q = C(x-1,2) ln q + ln G_{1/q}
        a, b = log_q_gamma(p, x, policy), log_q_gamma(inv, x, policy)
        shift = binom2(x - 1.0) * lq
        res = a.value - (shift + b.value)
        rnd = 8.0 * EPS * (abs(a.value) + abs(b.value) + abs(shift))
        cases.append(_residual_case("reflect_loggamma", p, x, res, a.err_bound + b.err_bound + rnd + SLACK))

        polys = {m: q_polygamma(p, m, x, policy) for m in range(3)}
        polys_inv = {m: q_polygamma(inv, m, x, policy) for m in range(3)}
        polys_next = {m: q_polygamma(p, m, x + 1.0, policy) for m in range(3)}
        linear = {0: lq * (x - 1.5), 1: lq, 2: 0.0}
        for m in range(3):
            u, v = polys[m], polys_inv[m]
            res = u.value - (linear[m] + v.value)
            rnd = 8.0 * EPS * (abs(u.value) + abs(v.value) + abs(linear[m]))
            cases.append(_residual_case(f"reflect_psi{m}", p, x, res,
                                        u.err_bound + v.err_bound + rnd + SLACK))

        # psi^(k-1)(x+1) - psi^(k-1)(x) = (ln q) d^(k-1)/dx^(k-1) [q^x/(q^x - 1)], k = 1, 2, 3;
        # q^x/(q^x-1) = 1 + 1/(q^x-1), so the derivatives match those of 1/(q^x-1) for k >= 2.
        for m in range(3):
            rhs = -lq / math.expm1(-lq * x) if m == 0 else lq * _dinv_qx_minus_one(lq, x, m)
            u, w = polys_next[m], polys[m]
            res = (u.value - w.value) - rhs
            rnd = 8.0 * EPS * (abs(u.value) + abs(w.value) + abs(rhs))
            cases.append(_residual_case(f"diff_psi{m}", p, x, res,
                                        u.err_bound + w.err_bound + rnd + SLACK))

        cases.append(_exp_identity_case(p, x, polys[0], polys_next[0], policy))
        cases.append(_transport_case(p, x, policy))
    return make_report("identities", p.q, None, cases)


def _exp_identity_case(p, x, psi, psi_next, policy):
    """exp(F(x)) = exp(psi(x+1) - s) - exp(psi(x) - s), F = phi_q (s = 0) or Phi_q (s = x ln q).

    All three exponentials are scaled by exp(-max exponent) before comparing.
    """
    if p.branch is Branch.SUPER_UNIT:
        kind, s = Theorem2Kind.PHI_SUPER, 0.0
    else:
        kind, s = Theorem2Kind.PHI_SUB, p.ln_q * x
    f = theorem2_value(kind, p, x, policy)
    exps = [f.value, psi_next.value - s, psi.value - s]
    errs = [f.err_bound, psi_next.err_bound, psi.err_bound]
    top = max(exps)
    scaled = [math.exp(e - top) for e in exps]
    res = scaled[0] - (scaled[1] - scaled[2])
    budget = 2.0 * sum(v * e for v, e in zip(scaled, errs)) + 8.0 * EPS * sum(scaled) + SLACK
    label = "exp_phi" if kind is Theorem2Kind.PHI_SUPER else "exp_phi_sub"
    return _residual_case(label, p, x, res, budget)


def _transport_case(p, x, policy):
    """Phi_q(x) - varphi_{1/q}(x) = (3/2) ln(1/q) for q < 1 (mirrored for q > 1)."""
    sub, sup = (p, p.inverse()) if p.branch is Branch.SUB_UNIT else (p.inverse(), p)
    a = theorem2_value(Theorem2Kind.PHI_SUB, sub, x, policy)
    b = theorem2_value(Theorem2Kind.VARPHI_SUPER, sup, x, policy)
    const = -1.5 * sub.ln_q
    res = a.value - b.value - const
    budget = a.err_bound + b.err_bound + 8.0 * EPS * (abs(a.value) + abs(b.value) + abs(const)) + SLACK
    return _residual_case("transport", p, x, res, budget)


def check_proof(p=2.0, policy: SeriesPolicy = DEFAULT_POLICY) -> CheckReport:
    """Coefficient-level inequality, antisymmetry identity and double-sum check.

    The strict inequality and antisymmetry are swept over a fixed q set; the
    double-sum representation is compared with theorem1_value at five x for
    the super-unit member of {q, 1/q}.
    """
    p = _param(p)
    if p.branch is Branch.CLASSICAL:
        raise BranchMismatch("the coefficient sums need q != 1")
    sup = p if p.branch is Branch.SUPER_UNIT else p.inverse()
    cases = []
    for q in PROOF_QS:
        for i in PROOF_I_RANGE:
            sides = proof_inequality_sides(i, q)
            gap = sides.upper - sides.lower
            cases.append(_case(f"proof_ineq_i{i:02d}", q, float(i), gap, 0.0, gap > 0.0))
            res = antisymmetry_sum(i, q)
            cases.append(_case(f"antisym_i{i:02d}", q, float(i), 1e-10 - abs(res), 1e-10))
    for x in DOUBLE_SUM_XS:
        direct = theorem1_value(sup, x, policy)
        scaled = direct.value / sup.ln_q**2
        lhs = series_identity_lhs(sup, x, policy)
        rel = abs(lhs - scaled) / abs(scaled)
        cases.append(_case("double_sum", sup.q, x, 1e-8 - rel, 1e-8))
    return make_report("proof", p.q, None, cases)


def check_classical(policy: SeriesPolicy = DEFAULT_POLICY, n_points: int = 32) -> CheckReport:
    """q -> 1 behaviour: continuity of psi_q, the Batir function, the remark2 function at q = 1."""
    cases = []
    for q in (0.999, 1.001):
        for x in GridSpec(0.5, 10.0, n_points).points():
            diff = q_digamma(q, x, policy).value - digamma_classical(x).value
            cases.append(_case("continuity", q, x, 0.01 - abs(diff), 0.01))
    batir_grid = GridSpec(0.01, 50.0, n_points)
    for c in check_monotone(MonotoneFn.BATIR, 1.0, batir_grid, policy).cases:
        cases.append(c)
    for x in batir_grid.points():
        v = batir_function(x).value
        margin = min(v + EULER_GAMMA + 1e-9, 1e-9 - v)
        cases.append(_case("batir_range", 1.0, x, margin, 1e-9))
    lo, hi = batir_function(batir_grid.x_min).value, batir_function(batir_grid.x_max).value
    cases.append(_case("batir_end_low", 1.0, batir_grid.x_min, 0.02 - abs(lo + EULER_GAMMA), 0.02))
    cases.append(_case("batir_end_high", 1.0, batir_grid.x_max, 0.02 - abs(hi), 0.02))
    r2_grid = GridSpec(0.05, 30.0, n_points)
    for c in check_monotone(MonotoneFn.REMARK2, 1.0, r2_grid, policy).cases:
        cases.append(c)
    for x in r2_grid.points():
        v = remark2_value(1.0, x, policy)
        cases.append(_case("remark2_below_one", 1.0, x, 1.0 - v.value - v.err_bound, v.err_bound,
                           1.0 - v.value - v.err_bound > 0.0))
    return make_report("classical", 1.0, None, cases)


def check_derivative_oracles(p, policy: SeriesPolicy = DEFAULT_POLICY,
                             spot_points=SPOT_POINTS) -> CheckReport:
    """Every polygamma order m = 1..6 against a central difference of order m-1."""
    p = _param(p)
    cases = []
    for x in spot_points:
        for m in range(1, 7):
            d = q_polygamma(p, m, x, policy)
            prev = q_polygamma(p, m - 1, x, policy)
            fd = finite_difference(lambda t: q_polygamma(p, m - 1, t, policy).value, x, 1)
            budget = d.err_bound + stencil_gain(1, default_step(x, 1)) * prev.err_bound + SLACK
            cases.append(_case(f"fd_psi{m}", p.q, x, max(1e-5, 20.0 * budget) - abs(fd - d.value), budget))
    return make_report("derivatives", p.q, None, cases)


SUITES = ("cm", "monotone", "sandwich", "identities", "proof", "classical", "derivatives")


def run_suite(name: str, p, grid: GridSpec = DEFAULT_GRID, policy: SeriesPolicy = DEFAULT_POLICY,
              k_max: int = 4, probe_threshold: float = PROBE_THRESHOLD) -> CheckReport:
    """Dispatch by suite name; ``all`` merges every suite applicable to q."""
    p = _param(p)
    if name == "all":
        names = SUITES if p.branch is not Branch.CLASSICAL else ("monotone", "classical", "derivatives")
        return merge_reports([run_suite(n, p, grid, policy, k_max, probe_threshold) for n in names])
    if name == "cm":
        return check_cm_theorem1(p, grid, k_max, policy)
    if name == "monotone":
        reports = [check_monotone(fn, p, grid, policy) for fn in monotone_functions_for(p)]
        return make_report("monotone", p.q, None, [c for r in reports for c in r.cases])
    if name == "sandwich":
        return check_sandwich(p, grid, policy, probe_threshold)
    if name == "identities":
        return check_identities(p, grid, policy)
    if name == "proof":
        return check_proof(p, policy)
    if name == "classical":
        return check_classical(policy)
    if name == "derivatives":
        return check_derivative_oracles(p, policy)
    raise DomainError(f"unknown suite {name!r}")
