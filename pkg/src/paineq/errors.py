"""Exception and warning classes."""


class PaineqError(Exception):
    """Base class for all errors raised by this package."""


class InvalidPermutation(PaineqError, ValueError):
    pass


class OrderCapExceeded(PaineqError):
    pass


class NotNilpotent(PaineqError):
    pass


class NotAbelian(PaineqError):
    pass


class NotNormal(PaineqError):
    pass


class InvalidTransversal(PaineqError, ValueError):
    pass


class OrderMismatch(PaineqError, ValueError):
    pass


class HypothesisViolated(PaineqError):
    """Inputs do not satisfy the hypotheses of the requested result."""


class MismatchError(PaineqError, AssertionError):
    """Two independent computations of the same quantity disagree.

    This always indicates a bug, never bad input.
    """


class ParseError(PaineqError, ValueError):
    pass


class DegenerateRow(PaineqError, ValueError):
    """A requested constraint row has every coefficient equal to zero."""


class NonIntegralWarning(UserWarning):
    pass


class NonCharacterWarning(UserWarning):
    pass
