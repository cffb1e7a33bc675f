"""Exception hierarchy shared by all lawsonlab modules."""


class LawsonLabError(Exception):
    """Base class for every error raised by this package."""


class ParseError(LawsonLabError):
    """Malformed tableau text (bad rational, wrong number of entries, ...)."""


class InvariantError(LawsonLabError):
    """A tableau violates one of the structural invariants."""


class UnknownTableau(LawsonLabError):
    pass


class LimitExceeded(LawsonLabError, ValueError):
    pass


class DimensionMismatch(LawsonLabError, ValueError):
    pass


class NonFiniteState(LawsonLabError, FloatingPointError):
    """A stepper produced NaN or Inf, usually a sign of instability."""


class CapabilityMissing(LawsonLabError, AttributeError):
    pass


class ReferenceNotConverged(LawsonLabError):
    pass


class DegenerateInput(LawsonLabError, ValueError):
    pass


class ConfigError(LawsonLabError, ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""
