"""Shared fixtures for the rfqubit test suite."""

import numpy as np
import pytest

from rfqubit import DeviceConfig, FrequencyGrid, PhotonState

SEED = 20260814


@pytest.fixture
def grid() -> FrequencyGrid:
    """17-bin grid: sidebands at +-1 sit two bins from center, room out to +-4."""
    return FrequencyGrid.build(4.0, 0.5)


@pytest.fixture
def exact_cfg() -> DeviceConfig:
    return DeviceConfig.exact(1.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


def random_state(
    grid: FrequencyGrid, rng: np.random.Generator, ports=("in",)
) -> PhotonState:
    """Normalized random multi-port state (fixed seed comes from the caller)."""
    amps = {
        port: rng.normal(size=grid.n_bins) + 1j * rng.normal(size=grid.n_bins)
        for port in ports
    }
    norm = np.sqrt(sum(np.sum(np.abs(a) ** 2) for a in amps.values()))
    return PhotonState(grid, {p: a / norm for p, a in amps.items()})
