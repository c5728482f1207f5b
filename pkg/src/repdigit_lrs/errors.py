"""Exception hierarchy shared by all modules."""


class ToolkitError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(ToolkitError, ValueError):
    pass


class DomainError(ToolkitError, ValueError):
    """A function was evaluated outside its domain (e.g. log of a ball touching 0)."""


class PrecisionExhausted(ToolkitError):
    """The precision cap was reached before a comparison or refinement resolved."""


class RepeatedRoots(ToolkitError):
    pass


class HypothesisViolation(ToolkitError):
    pass


class NoExpansion(ToolkitError):
    pass


class UnsupportedBase(InvalidInput):
    pass


class UnitBase(UnsupportedBase):
    """The base has |N(beta)| = 1."""


class DegreeTooLarge(ToolkitError):
    pass


class InternalError(ToolkitError):
    """A self-check failed; indicates a bug rather than bad input."""
