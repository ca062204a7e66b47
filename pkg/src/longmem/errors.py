"""Exception hierarchy and warning records shared across the toolkit.

The CLI maps the exceptions onto exit codes: validation problems (bad
input shape, out-of-range parameters, malformed files) exit with 3,
numeric failures (zero variance, empty neighborhoods) with 4.

Non-fatal conditions are reported as ``WarningRecord`` values with stable
codes so that table output and structured output carry the same
diagnostics.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class WarningRecord:
    """A non-fatal diagnostic with a stable machine-readable code."""

    code: str
    message: str


class LongmemError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(LongmemError):
    """Input violates a precondition (length, range, format)."""


class ParseError(ValidationError):
    """A data file could not be parsed.

    Carries the 1-based line number when the offending line is known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericError(LongmemError):
    """Computation is undefined for this input (e.g. zero variance)."""


class EpsTooSmallError(NumericError):
    """No reference point found enough neighbors within the radius.

    ``max_neighbors`` is the largest neighbor count observed, to guide
    the user toward a workable radius.
    """

    def __init__(self, message: str, max_neighbors: int = 0):
        self.max_neighbors = max_neighbors
        super().__init__(message)
