"""Exception and warning types raised across the package."""

from __future__ import annotations


class SildError(Exception):
    """Base class for all errors raised by this package."""


# Touchstone parsing -------------------------------------------------------

class TouchstoneError(SildError, ValueError):
    """A Touchstone file could not be parsed.

    ``line`` is the 1-based source line the problem was detected on, when known.
    """

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        self.message = message
        super().__init__(self._format())

    def _format(self) -> str:
        where = []
        if self.source:
            where.append(str(self.source))
        if self.line is not None:
            where.append(f"line {self.line}")
        prefix = ":".join(where)
        return f"{prefix}: {self.message}" if prefix else self.message

    def with_source(self, source: str) -> "TouchstoneError":
        self.source = source
        self.args = (self._format(),)
        return self


class NonAscendingFrequency(TouchstoneError):
    pass


class MalformedRecord(TouchstoneError):
    pass


class UnsupportedPortCount(TouchstoneError):
    pass


class UnsupportedParameterType(TouchstoneError):
    """Option line names Y/Z/H/G parameters; only S is supported."""


class NoiseDataUnsupported(TouchstoneError):
    pass


class NumericOverflow(TouchstoneError):
    """A value is NaN or infinite after conversion to rectangular form."""


# Analysis -------------------------------------------------------------------

class ZeroMagnitudeSample(SildError, ValueError):
    """Phase is undefined because a sample has zero magnitude."""


class GridMismatch(SildError, ValueError):
    pass


class EmptyBand(SildError, ValueError):
    pass


class NonUniformGrid(SildError, ValueError):
    pass


class PassivityViolation(SildError, ValueError):
    pass


class EmptyInput(SildError, ValueError):
    pass


class BatchAborted(SildError):
    """Raised under the fail-fast policy when one input cannot be analyzed."""

    def __init__(self, source_id: str, error: str):
        self.source_id = source_id
        self.error = error
        super().__init__(f"{source_id}: {error}")


# Warnings -------------------------------------------------------------------

class SildWarning(UserWarning):
    pass


class PhaseAliasingWarning(SildWarning):
    """Consecutive phase steps come close to pi; the grid may be too coarse."""


class NullSampleWarning(SildWarning):
    pass


class InsufficientBandwidth(SildWarning):
    """The frequency grid stops short of the requested summation cutoff."""


class NonUniformGridWarning(SildWarning):
    pass
