"""Exception types shared across the toolkit."""


class TTShapeError(Exception):
    """Base class for every error raised by this package."""


class InvalidShape(TTShapeError):
    """Shape is empty, has a non-positive dimension, or overflows."""


class CardinalityMismatch(TTShapeError):
    """Element counts disagree where they are required to match."""


class InfeasibleShape(TTShapeError):
    """Target shape holds fewer elements than the data it must contain."""


class NotDivisible(TTShapeError):
    """Requested row count does not divide the element count."""


class NumericalFailure(TTShapeError):
    """The SVD backend failed to converge."""


class ShapeChainBroken(TTShapeError):
    """Adjacent cores disagree on their shared rank."""


class ShapeMismatch(TTShapeError):
    """Two tensors that must share a shape do not."""


class OrderMismatch(TTShapeError):
    """Two genomes that must share a length do not."""


class BadCrossoverPoint(TTShapeError):
    """Crossover point lies outside the valid interior range."""


class NoFeasibleShape(TTShapeError):
    """The search box contains no shape large enough for the data."""


class MalformedHeader(TTShapeError):
    """Archive is truncated or its header is internally inconsistent."""


class ChecksumMismatch(TTShapeError):
    """Archive checksum does not match its contents."""


class UnsupportedFormat(TTShapeError):
    """File format is not recognized or not usable here."""


class IoFailure(TTShapeError):
    """Underlying file read or write failed."""
