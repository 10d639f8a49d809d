"""Exception types shared across the package.

Everything raised deliberately derives from :class:`RfqubitError`, so callers
(CLI, service) can distinguish bad input from genuine bugs.
"""

from __future__ import annotations


class RfqubitError(Exception):
    """Base class for all errors raised by this package."""


class GridMismatchError(RfqubitError):
    """A frequency does not sit on the grid, or two grids disagree."""


class GridTooNarrowError(RfqubitError):
    """The grid truncates wavepacket tails or shifted components."""


class PortMismatchError(RfqubitError):
    """Port sets of two elements do not line up for composition."""


class NormalizationError(RfqubitError):
    """A state or qubit violates single-photon normalization."""


class TuningError(RfqubitError):
    """Device parameters are off the exact-tuning point where required."""


class ParameterError(RfqubitError):
    """A scalar parameter is outside its allowed range."""


class NetlistError(RfqubitError):
    """Netlist parse or validation failure with source position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", col {column}"
            where = f" ({where})"
        super().__init__(f"{message}{where}")
