"""Value types shared across the package: q classification, policies, results."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, NonPositiveQ, OrderTooLarge

CLASSICAL_WINDOW = 1e-12
MAX_ORDER = 6


class Branch(enum.Enum):
    SUB_UNIT = "sub-unit"  # 0 < q < 1
    CLASSICAL = "classical"  # q == 1
    SUPER_UNIT = "super-unit"  # q > 1


@dataclass(frozen=True)
class QParam:
    q: float
    branch: Branch
    ln_q: float

    @property
    def classical(self) -> bool:
        return self.branch is Branch.CLASSICAL

    def inverse(self) -> "QParam":
        """The parameter 1/q, with branch swapped."""
        return classify(1.0 / self.q)


def classify(q: float) -> QParam:
    """Validate ``q`` and attach its branch.

    Values within 1e-12 of one are snapped to the classical point q = 1,
    where both q-series lose all precision.
    """
    try:
        q = float(q)
    except (TypeError, ValueError) as exc:
        raise NonPositiveQ(f"q must be a positive real, got {q!r}") from exc
    if not math.isfinite(q) or q <= 0.0:
        raise NonPositiveQ(f"q must be a positive finite real, got {q!r}")
    if abs(q - 1.0) <= CLASSICAL_WINDOW:
        return QParam(1.0, Branch.CLASSICAL, 0.0)
    branch = Branch.SUB_UNIT if q < 1.0 else Branch.SUPER_UNIT
    return QParam(q, branch, math.log(q))


@dataclass(frozen=True)
class SeriesPolicy:
    rel_tol: float = 1e-13
    abs_tol: float = 1e-300
    max_terms: int = 10**6

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be positive")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ValueError("max_terms must be a positive integer")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_POLICY = SeriesPolicy()


@dataclass(frozen=True)
class Certified:
    """A value with a bound on its truncation error.

    ``err_bound`` covers the discarded tail of the series (or asymptotic
    expansion) only; floating-point rounding is not included.
    """

    value: float
    err_bound: float
    terms_used: int

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class DerivOrder:
    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise DomainError(f"derivative order must be a nonnegative integer, got {self.m!r}")
        if self.m > MAX_ORDER:
            raise OrderTooLarge(f"derivative order {self.m} exceeds cap {MAX_ORDER}")


def check_x(x: float) -> float:
    x = float(x)
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"x must be a positive finite real, got {x!r}")
    return x


def as_order(m) -> DerivOrder:
    return m if isinstance(m, DerivOrder) else DerivOrder(m)
