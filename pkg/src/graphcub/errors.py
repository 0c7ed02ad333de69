"""Exception types raised by the library.

The CLI maps these onto its exit-code contract: malformed input and
violated preconditions exit with 2, numeric/conditioning failures with 3.
"""


class GraphCubError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(GraphCubError, ValueError):
    """A parameter lies outside its documented domain."""


class DimensionError(GraphCubError, ValueError):
    """A vector length does not match the vertex count or sample-set size."""


class GraphFormatError(GraphCubError, ValueError):
    """Input describes something other than a simple connected graph."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ClosureSaturatedError(GraphCubError):
    """An iterated closure already covers V, so its boundary is empty."""


class CoverageError(GraphCubError):
    """A required covering condition (closure of U reaching V) fails."""

    def __init__(self, message, uncovered=()):
        super().__init__(message)
        self.uncovered = tuple(int(v) for v in uncovered)


class BandwidthTooLargeError(GraphCubError):
    """The requested bandwidth exceeds the admissible sampling threshold."""

    def __init__(self, message, threshold=None):
        super().__init__(message)
        self.threshold = threshold


class NotUniquenessSetError(GraphCubError):
    """The sample set cannot determine bandlimited signals (rank deficient)."""

    def __init__(self, message, rank=None, required=None):
        super().__init__(message)
        self.rank = rank
        self.required = required


class ConditioningError(GraphCubError):
    """A linear system is too ill-conditioned to solve reliably."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class EmptyQSetError(GraphCubError):
    """No interpolant satisfies the requested smoothness cap."""


class NumericError(GraphCubError):
    """A numerical routine failed or an internal consistency check broke."""
