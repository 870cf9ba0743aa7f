"""Exception hierarchy shared by every module."""


class QGammaError(ValueError):
    """Base class for all evaluation errors raised by qpolygamma."""


class NonPositiveQ(QGammaError):
    pass


class DomainError(QGammaError):
    pass


class ToleranceNotMet(QGammaError):
    """The truncation tail could not be driven below tolerance within max_terms."""


class OrderTooLarge(QGammaError):
    pass


class BranchMismatch(QGammaError):
    pass


class ClassicalBranch(QGammaError):
    """Raised where a q != 1 formula is asked to handle q == 1."""


class LogDomainError(QGammaError):
    pass
