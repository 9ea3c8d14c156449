"""Exception hierarchy.

Split along the CLI's exit-code contract: usage problems (exit 2),
data problems (exit 3), and check failures (exit 1) each map to one
branch of the tree.  Library code raises these; only the CLI decides
exit codes.
"""


class GoldbachShortError(Exception):
    """Base class for all library errors."""


class UsageError(GoldbachShortError):
    """Invalid invocation: bad flags, malformed config keys, empty grids."""


class DataError(GoldbachShortError):
    """A problem with input data or resources, not with the request shape."""


class InvalidRangeError(DataError):
    """lo > hi or a window outside the supported integer range."""


class RangeOverflowError(DataError):
    """Requested magnitude exceeds the supported machine-integer range."""


class CoverageError(DataError):
    """A Lambda window or psi table does not span the required range."""


class SpecViolationError(DataError):
    """WindowSpec constraint violated (N >= 2, 1 <= H <= N, |y| <= H)."""


class MismatchError(DataError):
    """Two inputs that must describe the same window disagree."""


class ZeroTableError(DataError):
    """Zero-table parse failure; carries the offending line number."""

    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number


class OrderingViolationError(ZeroTableError):
    """Ordinates not strictly ascending or not positive."""


class EmptyZeroSetError(DataError):
    """An operation that needs at least one zero received none."""


class ResourceError(DataError):
    """A transform or table would exceed the configured memory budget."""


class GridResolutionError(DataError):
    """Quadrature grid cannot meet the requested resolution within caps."""


class AliasBudgetError(DataError):
    """FFT grid too small for the kernel's coefficient length."""


class ConvergenceError(DataError):
    """Iterative refinement (bisection, quadrature) failed to converge."""


class CacheFormatError(DataError):
    """Sieve cache file has a wrong magic or version."""
