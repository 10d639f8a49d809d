"""Discretized frequency axis.

All frequencies are offsets from the optical carrier, in the same angular
units as the sideband splitting Omega.  The grid is a uniform set of bin
centers ``omega_k = (k - c) * spacing`` with ``c = (n_bins - 1) / 2``, so the
carrier sits exactly on the center bin and the axis is symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError

# Relative slack when matching a frequency to a bin center.  Physical inputs
# are constructed from the same floats as the grid, so anything further off
# than this is a genuine mismatch, not roundoff.
_MATCH_RTOL = 1e-9


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform, carrier-centered frequency grid.

    Attributes
    ----------
    half_width:
        W; the outermost bin centers sit at +-W.
    spacing:
        Delta, step between adjacent bin centers.
    n_bins:
        Total number of bins; always odd so bin ``center_index`` is at 0.
    """

    half_width: float
    spacing: float
    n_bins: int

    def __post_init__(self):
        if self.spacing <= 0.0:
            raise GridMismatchError(f"spacing must be positive, got {self.spacing}")
        if self.n_bins < 3 or self.n_bins % 2 == 0:
            raise GridMismatchError(f"n_bins must be odd and >= 3, got {self.n_bins}")
        expected = (self.n_bins - 1) // 2 * self.spacing
        if not math.isclose(expected, self.half_width, rel_tol=1e-9, abs_tol=0.0):
            raise GridMismatchError(
                f"half_width {self.half_width} inconsistent with "
                f"{self.n_bins} bins of spacing {self.spacing}"
            )

    @classmethod
    def build(cls, half_width: float, spacing: float) -> "FrequencyGrid":
        """Grid covering at least +-half_width; W rounds up to whole bins."""
        if spacing <= 0.0 or half_width <= 0.0:
            raise GridMismatchError(
                f"need positive half_width and spacing, got W={half_width}, dW={spacing}"
            )
        m = math.ceil(half_width / spacing - _MATCH_RTOL)
        return cls(m * spacing, spacing, 2 * m + 1)

    @classmethod
    def for_wavepacket(cls, omega: float, sigma: float) -> "FrequencyGrid":
        """Analysis grid for Gaussian sidebands at +-omega of variance sigma.

        Spacing is the largest value <= sqrt(sigma)/20 that divides omega
        exactly (shifts by omega and 2*omega must land on bins); the half
        width covers 3*omega + 5*sqrt(sigma) so both the shifted components
        and the Gaussian tails close within the grid.
        """
        if omega <= 0.0 or sigma <= 0.0:
            raise GridMismatchError(f"need positive omega and sigma, got {omega}, {sigma}")
        width = math.sqrt(sigma)
        spacing = omega / math.ceil(20.0 * omega / width)
        return cls.build(3.0 * omega + 5.0 * width, spacing)

    @property
    def center_index(self) -> int:
        return (self.n_bins - 1) // 2

    def omegas(self) -> np.ndarray:
        """Bin-center frequencies, ascending."""
        c = self.center_index
        return (np.arange(self.n_bins) - c) * self.spacing

    def omega_of(self, index: int) -> float:
        if not 0 <= index < self.n_bins:
            raise GridMismatchError(f"bin index {index} outside [0, {self.n_bins})")
        return (index - self.center_index) * self.spacing

    def index_of(self, omega: float) -> int:
        """Bin whose center is omega; raises if omega is off-grid."""
        k = round(omega / self.spacing)
        if abs(omega - k * self.spacing) > _MATCH_RTOL * max(abs(omega), self.spacing):
            raise GridMismatchError(
                f"frequency {omega} is not a multiple of spacing {self.spacing}"
            )
        index = k + self.center_index
        if not 0 <= index < self.n_bins:
            raise GridMismatchError(
                f"frequency {omega} lies outside the grid (W = {self.half_width})"
            )
        return index

    def shift_bins(self, delta: float) -> int:
        """Signed bin count for a frequency shift; must be an exact multiple."""
        k = round(delta / self.spacing)
        if abs(delta - k * self.spacing) > _MATCH_RTOL * max(abs(delta), self.spacing):
            raise GridMismatchError(
                f"shift {delta} is not a multiple of spacing {self.spacing}"
            )
        return k
