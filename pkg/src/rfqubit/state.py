"""Single-photon states over (port, frequency-bin) modes.

A state is a complex amplitude per occupied mode plus a scalar ``lost_weight``
standing in for the vacuum component introduced by loss.  The logical basis
puts the photon at the lower sideband (-Omega) for ``|0>`` and the upper
sideband (+Omega) for ``|1>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import (
    GridMismatchError,
    GridTooNarrowError,
    NormalizationError,
    ParameterError,
)
from .grid import FrequencyGrid

# Canonical port labels used by the built-in devices.  Ports are plain
# strings so netlists can introduce their own; these two are reserved:
# SINK absorbs amplitude shifted off the grid, LOST labels the vacuum
# weight in emitted tables.
PORT_IN = "in"
PORT_V_IN = "v_in"
PORT_A1 = "A1"
PORT_A2 = "A2"
PORT_A3 = "A3"
PORT_A4 = "A4"
PORT_A5 = "A5"
PORT_A6 = "A6"
PORT_OUT = "out"
PORT_BACK = "back"
PORT_SINK = "sink"
LOST_LABEL = "lost"

_NORM_TOL = 1e-10


class ModeId(NamedTuple):
    """Address of a single mode: a port label and a grid bin index."""

    port: str
    bin: int


@dataclass(frozen=True)
class LogicalQubit:
    """Coefficients (mu, nu) on the +-Omega sidebands; |mu|^2+|nu|^2 = 1."""

    mu: complex
    nu: complex

    def __post_init__(self):
        norm = abs(self.mu) ** 2 + abs(self.nu) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise NormalizationError(
                f"|mu|^2 + |nu|^2 = {norm!r}, expected 1 within 1e-12"
            )

    @classmethod
    def zero(cls) -> "LogicalQubit":
        return cls(1.0, 0.0)

    @classmethod
    def one(cls) -> "LogicalQubit":
        return cls(0.0, 1.0)

    @classmethod
    def plus(cls) -> "LogicalQubit":
        s = 1.0 / math.sqrt(2.0)
        return cls(s, s)

    @classmethod
    def normalized(cls, mu: complex, nu: complex) -> "LogicalQubit":
        """Build from unnormalized coefficients (must not both vanish)."""
        norm = math.sqrt(abs(mu) ** 2 + abs(nu) ** 2)
        if norm == 0.0:
            raise NormalizationError("mu and nu cannot both be zero")
        return cls(mu / norm, nu / norm)


@dataclass(frozen=True)
class WavepacketParams:
    """Gaussian sideband wavepacket: splitting omega, frequency variance sigma.

    The narrowband regime needs ratio = omega^2 / sigma >= 1; below that the
    two sidebands are not even approximately orthogonal and the logical
    encoding breaks down.
    """

    omega: float
    sigma: float

    def __post_init__(self):
        if self.omega <= 0.0 or self.sigma <= 0.0:
            raise ParameterError(
                f"omega and sigma must be positive, got {self.omega}, {self.sigma}"
            )
        if self.ratio < 1.0 - 1e-12:
            raise ParameterError(
                f"omega^2/sigma = {self.ratio} < 1 is outside the narrowband regime"
            )

    @property
    def ratio(self) -> float:
        return self.omega ** 2 / self.sigma


class PhotonState:
    """Amplitudes over (port, bin) modes plus a lost (vacuum) weight.

    Immutable after construction; amplitude arrays are exposed read-only.
    Total probability (sum of |amplitude|^2 plus lost_weight) must be 1.
    """

    __slots__ = ("grid", "_amps", "lost_weight")

    def __init__(
        self,
        grid: FrequencyGrid,
        amplitudes: Mapping[str, np.ndarray],
        lost_weight: float = 0.0,
    ):
        self.grid = grid
        amps: dict[str, np.ndarray] = {}
        for port, arr in amplitudes.items():
            a = np.asarray(arr, dtype=complex)
            if a.shape != (grid.n_bins,):
                raise GridMismatchError(
                    f"port {port!r}: amplitude array has shape {a.shape}, "
                    f"expected ({grid.n_bins},)"
                )
            if not np.any(a):
                continue
            a = a.copy()
            a.flags.writeable = False
            amps[port] = a
        self._amps = amps
        self.lost_weight = float(lost_weight)
        total = self.total_probability
        if abs(total - 1.0) > _NORM_TOL:
            raise NormalizationError(f"total probability {total!r} differs from 1 beyond 1e-10")

    @property
    def total_probability(self) -> float:
        return sum(float(np.sum(np.abs(a) ** 2)) for a in self._amps.values()) + self.lost_weight

    def occupied_ports(self) -> tuple[str, ...]:
        return tuple(sorted(self._amps))

    def port_amplitudes(self, port: str) -> np.ndarray:
        """Read-only amplitude array for a port (zeros if unoccupied)."""
        arr = self._amps.get(port)
        if arr is None:
            arr = np.zeros(self.grid.n_bins, dtype=complex)
            arr.flags.writeable = False
        return arr

    def amplitude(self, port: str, omega: float) -> complex:
        arr = self._amps.get(port)
        if arr is None:
            # Still validate the frequency so off-grid queries fail loudly.
            self.grid.index_of(omega)
            return 0.0 + 0.0j
        return complex(arr[self.grid.index_of(omega)])

    def port_probability(self, port: str) -> float:
        arr = self._amps.get(port)
        return float(np.sum(np.abs(arr) ** 2)) if arr is not None else 0.0

    def modes(self) -> Iterable[tuple[ModeId, complex]]:
        """All nonzero (mode, amplitude) pairs, port-sorted, bins ascending."""
        for port in self.occupied_ports():
            arr = self._amps[port]
            for k in np.nonzero(arr)[0]:
                yield ModeId(port, int(k)), complex(arr[k])


def single_mode_state(grid: FrequencyGrid, port: str, omega: float) -> PhotonState:
    """Unit amplitude in exactly one mode."""
    arr = np.zeros(grid.n_bins, dtype=complex)
    arr[grid.index_of(omega)] = 1.0
    return PhotonState(grid, {port: arr})


def make_monochromatic_state(
    grid: FrequencyGrid,
    qubit: LogicalQubit,
    omega: float,
    port: str = PORT_IN,
) -> PhotonState:
    """Qubit at sharp sidebands: mu at -omega, nu at +omega on one port."""
    arr = np.zeros(grid.n_bins, dtype=complex)
    arr[grid.index_of(-omega)] += qubit.mu
    arr[grid.index_of(+omega)] += qubit.nu
    return PhotonState(grid, {port: arr})


def gaussian_envelope(omegas: np.ndarray, center: float, sigma: float) -> np.ndarray:
    """Unnormalized amplitude profile exp(-(omega - center)^2 / sigma)."""
    return np.exp(-((omegas - center) ** 2) / sigma)


def make_gaussian_qubit(
    grid: FrequencyGrid,
    qubit: LogicalQubit,
    params: WavepacketParams,
    port: str = PORT_IN,
) -> PhotonState:
    """Finite-bandwidth qubit: Gaussian envelopes around the two sidebands.

    The discrete amplitudes are renormalized on the grid; if the grid clips
    more than 1e-12 of either tail the construction refuses instead of
    silently biasing the normalization.
    """
    _check_tails(grid, params)
    om = grid.omegas()
    arr = qubit.mu * gaussian_envelope(om, -params.omega, params.sigma)
    arr = arr + qubit.nu * gaussian_envelope(om, +params.omega, params.sigma)
    norm = math.sqrt(float(np.sum(np.abs(arr) ** 2)))
    return PhotonState(grid, {port: arr / norm})


def _check_tails(grid: FrequencyGrid, params: WavepacketParams):
    # Probability density |exp(-(w -+ Omega)^2/sigma)|^2 is Gaussian with
    # std sqrt(sigma)/2; mass beyond the grid edge at distance d is
    # erfc(d * sqrt(2/sigma)) / 2 per tail.
    w, omega, sigma = grid.half_width, params.omega, params.sigma
    scale = math.sqrt(2.0 / sigma)
    clipped = 0.5 * (math.erfc((w - omega) * scale) + math.erfc((w + omega) * scale))
    if clipped > 1e-12:
        raise GridTooNarrowError(
            f"grid W = {w} clips {clipped:.3e} of the wavepacket tails "
            f"(omega = {omega}, sigma = {sigma})"
        )


def inner_product(a: PhotonState, b: PhotonState) -> complex:
    """<a|b> over mode amplitudes; lost weight does not contribute."""
    if a.grid != b.grid:
        raise GridMismatchError("states live on different grids")
    total = 0.0 + 0.0j
    for port in a.occupied_ports():
        if port in b.occupied_ports():
            total += complex(np.vdot(a.port_amplitudes(port), b.port_amplitudes(port)))
    return total


def state_fidelity(a: PhotonState, b: PhotonState) -> float:
    """|<a|b>|^2."""
    return abs(inner_product(a, b)) ** 2


def project_computational(
    state: PhotonState, omega: float, port: str
) -> tuple[complex, complex, float]:
    """Amplitudes on the -omega/+omega bins of a port, plus leaked weight.

    Returns (mu, nu, leak) where leak = 1 - |mu|^2 - |nu|^2 covers everything
    outside the two computational modes, including lost weight.
    """
    mu = state.amplitude(port, -omega)
    nu = state.amplitude(port, +omega)
    leak = 1.0 - abs(mu) ** 2 - abs(nu) ** 2
    return mu, nu, leak
