"""Composite frequency-domain devices.

The asymmetric Mach-Zehnder (splitter, phase/delay arm, recombiner) acts as a
frequency beamsplitter at exact tuning: phi = pi/2, omega*tau = pi/2, so the
-Omega sideband exits one way and +Omega the other.  Folding two AOM passes
between a forward and a backward MZ rotates the logical qubit by 2*theta
(a half-wave plate for the frequency basis).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .elements import (
    AomParams,
    ScatteringElement,
    _propagate,
    aom_pass,
    attenuation_stage,
    beamsplitter,
    compose,
    delay_arm,
    relabel,
    with_identity_on,
)
from .errors import TuningError
from .grid import FrequencyGrid
from .state import (
    PORT_A1,
    PORT_A2,
    PORT_A3,
    PORT_A4,
    PORT_A5,
    PORT_A6,
    PORT_BACK,
    PORT_IN,
    PORT_OUT,
    PORT_V_IN,
)

_EXACT_TOL = 1e-12


@dataclass(frozen=True)
class DeviceConfig:
    """Interferometer and AOM settings shared by the composite devices.

    omega is the sideband splitting; tau/phi set the MZ delay arm; theta is
    the single-pass AOM mixing angle and delta its drive frequency.  The
    eta factors are per-pass transmissions used when loss is requested.
    """

    omega: float
    tau: float
    phi: float
    delta: float
    theta: float = 0.0
    eta_aom: float = 1.0
    eta_mm: float = 1.0

    def __post_init__(self):
        if self.omega <= 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")

    @classmethod
    def exact(
        cls,
        omega: float,
        theta: float = 0.0,
        eta_aom: float = 1.0,
        eta_mm: float = 1.0,
    ) -> "DeviceConfig":
        """Exact tuning: phi = pi/2, omega*tau = pi/2, delta = 2*omega."""
        return cls(
            omega=omega,
            tau=math.pi / (2.0 * omega),
            phi=math.pi / 2.0,
            delta=2.0 * omega,
            theta=theta,
            eta_aom=eta_aom,
            eta_mm=eta_mm,
        )

    def replace(self, **changes) -> "DeviceConfig":
        return dataclasses.replace(self, **changes)

    @property
    def is_exact_tuning(self) -> bool:
        return (
            abs(self.phi - math.pi / 2.0) <= _EXACT_TOL
            and abs(self.omega * self.tau - math.pi / 2.0) <= _EXACT_TOL
            and abs(self.delta / self.omega - 2.0) <= _EXACT_TOL
        )


def mz_forward(grid: FrequencyGrid, cfg: DeviceConfig) -> ScatteringElement:
    """Asymmetric MZ from (in, v_in) to (A1, A2).

    With E(w) = exp(i(phi + w tau)) the closed form is
        A1(w) = [ in(w) (1 - E) + i v_in(w) (1 + E) ] / 2
        A2(w) = [ i in(w) (1 + E) + v_in(w) (E - 1) ] / 2
    """
    return compose(
        beamsplitter(grid, PORT_IN, PORT_V_IN),
        with_identity_on(delay_arm(grid, PORT_V_IN, cfg.tau, cfg.phi), (PORT_IN,)),
        beamsplitter(grid, PORT_IN, PORT_V_IN),
        relabel(grid, {PORT_IN: PORT_A1, PORT_V_IN: PORT_A2}),
    )


def mz_backward(grid: FrequencyGrid, cfg: DeviceConfig) -> ScatteringElement:
    """The recombining MZ from (A5, A6) to (out, back).

        out(w)  = [ i A5(w) (1 + E) + A6(w) (E - 1) ] / 2
        back(w) = [ A5(w) (1 - E) + i A6(w) (1 + E) ] / 2
    """
    return compose(
        beamsplitter(grid, PORT_A5, PORT_A6),
        with_identity_on(delay_arm(grid, PORT_A6, cfg.tau, cfg.phi), (PORT_A5,)),
        beamsplitter(grid, PORT_A5, PORT_A6),
        relabel(grid, {PORT_A5: PORT_BACK, PORT_A6: PORT_OUT}),
    )


def mz_closed_form(cfg: DeviceConfig, omegas: np.ndarray) -> dict[tuple[str, str], np.ndarray]:
    """Transfer coefficients of mz_forward, keyed (output, input)."""
    e = np.exp(1j * (cfg.phi + omegas * cfg.tau))
    return {
        (PORT_A1, PORT_IN): 0.5 * (1.0 - e),
        (PORT_A1, PORT_V_IN): 0.5j * (1.0 + e),
        (PORT_A2, PORT_IN): 0.5j * (1.0 + e),
        (PORT_A2, PORT_V_IN): 0.5 * (e - 1.0),
    }


def frequency_beamsplitter(grid: FrequencyGrid, cfg: DeviceConfig) -> ScatteringElement:
    """Exactly tuned forward MZ, self-checked to route the sidebands cleanly.

    +omega enters A1 with amplitude 1 and -omega enters A2 with amplitude i;
    cross-talk beyond 1e-12 (a wiring or tuning bug) refuses construction.
    """
    if not cfg.is_exact_tuning:
        raise TuningError(
            f"frequency beamsplitter needs exact tuning "
            f"(phi={cfg.phi}, omega*tau={cfg.omega * cfg.tau}, delta={cfg.delta})"
        )
    element = mz_forward(grid, cfg)
    lo, hi = grid.index_of(-cfg.omega), grid.index_of(+cfg.omega)
    m = element.dense_matrix(in_ports=(PORT_IN,), out_ports=(PORT_A1, PORT_A2))
    n = grid.n_bins
    checks = (
        abs(m[n + lo, lo] - 1.0j),  # -omega -> A2, amplitude i
        abs(m[hi, hi] - 1.0),       # +omega -> A1, amplitude 1
        abs(m[lo, lo]),             # cross-talk
        abs(m[n + hi, hi]),
    )
    if max(checks) > _EXACT_TOL:
        raise TuningError(f"sideband routing check failed: residual {max(checks):.3e}")
    return element


def rf_hwp(grid: FrequencyGrid, cfg: DeviceConfig, with_loss: bool = False) -> ScatteringElement:
    """Folded half-wave plate: forward MZ, two AOM passes, backward MZ.

    The double pass turns the single-pass angle theta into cos/sin(2 theta)
    on the recombined beam.  With ``with_loss`` every MZ pass applies eta_mm
    and every AOM pass eta_aom on both of its outputs.
    """
    aom = AomParams(cfg.theta, cfg.delta)
    parts = [mz_forward(grid, cfg)]
    if with_loss and cfg.eta_mm < 1.0:
        parts.append(attenuation_stage(grid, {PORT_A1: cfg.eta_mm, PORT_A2: cfg.eta_mm}))
    parts.append(aom_pass(grid, aom, PORT_A1, PORT_A2, PORT_A3, PORT_A4))
    if with_loss and cfg.eta_aom < 1.0:
        parts.append(attenuation_stage(grid, {PORT_A3: cfg.eta_aom, PORT_A4: cfg.eta_aom}))
    # The retroreflected pass swaps the roles of the two beams: the beam that
    # was up-shifted on the way in is up-shifted again, so A3 feeds A6.
    parts.append(aom_pass(grid, aom, PORT_A3, PORT_A4, PORT_A6, PORT_A5))
    if with_loss and cfg.eta_aom < 1.0:
        parts.append(attenuation_stage(grid, {PORT_A5: cfg.eta_aom, PORT_A6: cfg.eta_aom}))
    parts.append(mz_backward(grid, cfg))
    if with_loss and cfg.eta_mm < 1.0:
        parts.append(attenuation_stage(grid, {PORT_OUT: cfg.eta_mm, PORT_BACK: cfg.eta_mm}))
    return compose(*parts)


def rf_qwp(
    grid: FrequencyGrid, port: str, omega: float, relative_phase: float
) -> ScatteringElement:
    """Free propagation giving the +-omega sidebands a relative phase.

    A pure delay tau = relative_phase / (2 omega) advances the upper sideband
    by +phase/2 and the lower by -phase/2; four quarter-wave passes therefore
    compose to the identity up to a global phase.
    """
    if omega <= 0.0:
        raise ValueError(f"omega must be positive, got {omega}")
    return delay_arm(grid, port, relative_phase / (2.0 * omega), 0.0)


def extract_rotation(
    element: ScatteringElement,
    omega: float,
    in_port: str = PORT_IN,
    out_port: str = PORT_OUT,
) -> np.ndarray:
    """2x2 block of the device on the computational modes (-omega, +omega).

    Columns are the responses to a photon at in_port/-omega and in_port/+omega;
    rows are the out_port amplitudes at -omega and +omega.
    """
    grid = element.grid
    n = grid.n_bins
    lo, hi = grid.index_of(-omega), grid.index_of(+omega)
    block = np.zeros((2, 2), dtype=complex)
    for col, k in enumerate((lo, hi)):
        arr = np.zeros(n, dtype=complex)
        arr[k] = 1.0
        out = _propagate(element.stages, {in_port: arr}, (n,))
        res = out.get(out_port)
        if res is not None:
            block[0, col] = res[lo]
            block[1, col] = res[hi]
    return block


def target_rotation(theta: float) -> np.ndarray:
    """Ideal half-wave-plate block: minus a rotation by 2*theta."""
    c, s = math.cos(2.0 * theta), math.sin(2.0 * theta)
    return np.array([[-c, -s], [s, -c]], dtype=complex)
