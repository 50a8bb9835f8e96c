"""Exception hierarchy shared by every module of the package."""


class SemiHilbertError(Exception):
    """Base class for all errors raised by semihilbert."""


class DimensionMismatch(SemiHilbertError, ValueError):
    pass


class NotHermitian(SemiHilbertError, ValueError):
    pass


class NotPositive(SemiHilbertError, ValueError):
    pass


class NoConvergence(SemiHilbertError, ArithmeticError):
    pass


class NotNormalizable(SemiHilbertError, ValueError):
    """A vector whose A-seminorm is numerically zero cannot be A-normalized."""


class NotNormalized(SemiHilbertError, ValueError):
    pass


class NotABounded(SemiHilbertError, ValueError):
    """T does not map null(A) into null(A); ``residual`` quantifies the defect."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class SpaceMismatch(SemiHilbertError, ValueError):
    pass


class EmptyRange(SemiHilbertError, ValueError):
    """The weight is zero, so range(A) is {0}."""


class ZeroOperator(SemiHilbertError, ValueError):
    pass


class WitnessNotFound(SemiHilbertError, ArithmeticError):
    def __init__(self, message, margin):
        super().__init__(message)
        self.margin = margin


class MinModulusZero(SemiHilbertError, ValueError):
    pass


class BadRank(SemiHilbertError, ValueError):
    pass


class InputFormatError(SemiHilbertError, ValueError):
    pass
