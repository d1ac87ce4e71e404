class FramelabError(Exception):
    """Base class for all library errors."""


class InvalidOperandError(FramelabError, ValueError):
    """Operands live over different algebras or have incompatible shapes."""


class NotInvertibleError(FramelabError, ArithmeticError):
    pass


class UnsupportedAlgebraError(FramelabError, ValueError):
    """The operation needs a commutative (diagonal) algebra."""


class NotAFrameError(FramelabError):
    """Lower frame bound vanishes (within tolerance).

    The computed bounds are kept on the exception so callers can still
    report them.
    """

    def __init__(self, message, lower=None, upper=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper


class DegenerateInputError(FramelabError, ValueError):
    pass


class GenerationFailedError(FramelabError, RuntimeError):
    pass
