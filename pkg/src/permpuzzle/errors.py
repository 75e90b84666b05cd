"""Exception types raised across the package."""


class PuzzleError(ValueError):
    """Base class for all errors raised by permpuzzle."""


class CompositeModulus(PuzzleError):
    pass


class ZeroInverse(PuzzleError, ZeroDivisionError):
    pass


class SubsetTooLarge(PuzzleError):
    pass


class InvalidParams(PuzzleError):
    pass


class DimensionMismatch(PuzzleError):
    pass


class InvalidTarget(PuzzleError):
    pass


class InvalidCount(PuzzleError):
    pass
