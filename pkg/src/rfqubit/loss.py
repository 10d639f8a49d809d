"""Loss budget of the folded half-wave plate.

Each pass is modelled as scalar transmission: eta_aom per AOM pass (two
passes) and eta_mm of mode-matching per MZ pass (two passes), so the photon
survives with eta_T = eta_aom^2 * eta_mm^2 and the state becomes
rho' = eta_T rho + (1 - eta_T)|vac><vac|.  Overlaps with any single-photon
target scale by exactly eta_T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .state import PhotonState


def effective_transmission(eta_aom: float, eta_mm: float) -> float:
    """eta_T = eta_aom^2 * eta_mm^2 for the two-AOM-pass, two-MZ-pass fold."""
    for name, eta in (("eta_aom", eta_aom), ("eta_mm", eta_mm)):
        if not 0.0 <= eta <= 1.0:
            raise ParameterError(f"{name} = {eta} outside [0, 1]")
    return (eta_aom * eta_aom) * (eta_mm * eta_mm)


@dataclass(frozen=True)
class LossBudget:
    """Per-pass transmissions and the implied device transmission."""

    eta_aom: float
    eta_mm: float

    def __post_init__(self):
        effective_transmission(self.eta_aom, self.eta_mm)

    @property
    def eta_total(self) -> float:
        return effective_transmission(self.eta_aom, self.eta_mm)


def apply_device_loss(state: PhotonState, budget: LossBudget | float) -> PhotonState:
    """Attenuate every mode by sqrt(eta_T); the deficit becomes lost weight.

    ``budget`` may be a :class:`LossBudget` or the bare transmission eta_T.
    """
    eta = budget.eta_total if isinstance(budget, LossBudget) else float(budget)
    if not 0.0 <= eta <= 1.0:
        raise ParameterError(f"transmission = {eta} outside [0, 1]")
    scale = np.sqrt(eta)
    amps = {p: scale * state.port_amplitudes(p) for p in state.occupied_ports()}
    lost = state.lost_weight + (1.0 - eta) * (1.0 - state.lost_weight)
    return PhotonState(state.grid, amps, lost)
