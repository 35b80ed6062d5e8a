"""Exception hierarchy shared by all evosieve modules."""


class LatticeError(Exception):
    """Base class for every error raised by evosieve."""


class BasisError(LatticeError, ValueError):
    """The input does not describe a valid full-rank square basis."""


class NotSquare(BasisError):
    pass


class DimensionTooSmall(BasisError):
    pass


class DependentRows(BasisError):
    pass


class ParseError(BasisError):
    """Malformed basis text (bad token or ragged rows)."""


class ZeroInput(LatticeError, ValueError):
    """An operation that needs a nonzero vector received the zero vector."""


class InvalidDelta(LatticeError, ValueError):
    pass


class InvalidParams(LatticeError, ValueError):
    pass


class SamplerStarvation(LatticeError, RuntimeError):
    """The sampler kept producing zeros or duplicates."""


class DimensionTooLarge(LatticeError, RuntimeError):
    pass
