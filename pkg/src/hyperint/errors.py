"""Exception types raised across the package."""


class HyperintError(Exception):
    """Base class for all library errors."""


class UndefinedSymbol(HyperintError):
    """A bracket or Pochhammer symbol was requested outside its domain."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class NotPIntegral(HyperintError):
    pass


class NoForm(HyperintError):
    """The vectors do not lie on a common affine hyperplane w(u) = 1."""


class NotInCone(HyperintError):
    pass


class NotMember(HyperintError):
    """A point is not in the requested coset beta + ZA."""


class NotInM(HyperintError):
    pass


class InvalidInstance(HyperintError):
    pass


class InvalidState(HyperintError):
    pass


class NonReturn(HyperintError):
    """Orbit iteration exceeded the multiplicative order of h mod D."""


class PrecisionExhausted(HyperintError):
    pass


class TailBoundTooWeak(HyperintError):
    pass


class WindowUnderflow(HyperintError):
    pass


class UnsupportedDimension(HyperintError):
    pass
