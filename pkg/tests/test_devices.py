"""Interferometer devices: routing, rotation extraction, and tuning checks."""

import numpy as np
import pytest

from rfqubit import (
    DeviceConfig,
    FrequencyGrid,
    LogicalQubit,
    TuningError,
    apply,
    compose,
    extract_rotation,
    frequency_beamsplitter,
    isometry_defect,
    make_monochromatic_state,
    mz_backward,
    mz_closed_form,
    mz_forward,
    project_computational,
    relabel,
    rf_hwp,
    rf_qwp,
    single_mode_state,
    target_rotation,
)

THETAS = (0.0, np.pi / 8, np.pi / 4, 3 * np.pi / 8, np.pi / 2)


def test_exact_config_is_tuned():
    cfg = DeviceConfig.exact(1.0)
    assert cfg.is_exact_tuning
    assert cfg.tau == pytest.approx(np.pi / 2)
    assert cfg.delta == pytest.approx(2.0)
    assert not cfg.replace(phi=np.pi / 2 + 1e-6).is_exact_tuning


def test_mz_forward_matches_closed_form(grid, exact_cfg):
    elem = mz_forward(grid, exact_cfg)
    n = grid.n_bins
    closed = mz_closed_form(exact_cfg, grid.omegas())
    m = elem.dense_matrix(in_ports=("in", "v_in"), out_ports=("A1", "A2"))
    expected = np.zeros((2 * n, 2 * n), dtype=complex)
    for j, src in enumerate(("in", "v_in")):
        for i, dst in enumerate(("A1", "A2")):
            expected[i * n : (i + 1) * n, j * n : (j + 1) * n] = np.diag(
                closed[(dst, src)]
            )
    np.testing.assert_allclose(m, expected, atol=1e-12)


def test_mz_forward_balanced_at_center(grid, exact_cfg):
    # at omega = 0 the arms are in quadrature: an input splits 50/50
    out = apply(mz_forward(grid, exact_cfg), single_mode_state(grid, "in", 0.0))
    assert out.port_probability("A1") == pytest.approx(0.5)
    assert out.port_probability("A2") == pytest.approx(0.5)


def test_mz_backward_merges_sidebands(grid, exact_cfg):
    elem = mz_backward(grid, exact_cfg)
    out = apply(elem, single_mode_state(grid, "A6", 1.0))
    assert out.amplitude("out", 1.0) == pytest.approx(-1.0, abs=1e-12)
    out = apply(elem, single_mode_state(grid, "A5", 1.0))
    assert out.amplitude("back", 1.0) == pytest.approx(1.0, abs=1e-12)


def test_frequency_beamsplitter_routing(grid, exact_cfg):
    fbs = frequency_beamsplitter(grid, exact_cfg)
    upper = apply(fbs, single_mode_state(grid, "in", 1.0))
    assert upper.amplitude("A1", 1.0) == pytest.approx(1.0, abs=1e-12)
    assert upper.port_probability("A2") < 1e-24
    lower = apply(fbs, single_mode_state(grid, "in", -1.0))
    assert lower.amplitude("A2", -1.0) == pytest.approx(1j, abs=1e-12)
    assert lower.port_probability("A1") < 1e-24


def test_frequency_beamsplitter_vacuum_port(grid, exact_cfg):
    # the auxiliary input is routed too (unitarity of the 2x2 block)
    fbs = frequency_beamsplitter(grid, exact_cfg)
    out = apply(fbs, single_mode_state(grid, "v_in", -1.0))
    assert out.amplitude("A1", -1.0) == pytest.approx(1j, abs=1e-12)
    out = apply(fbs, single_mode_state(grid, "v_in", 1.0))
    assert out.amplitude("A2", 1.0) == pytest.approx(-1.0, abs=1e-12)


def test_frequency_beamsplitter_requires_tuning(grid, exact_cfg):
    with pytest.raises(TuningError):
        frequency_beamsplitter(grid, exact_cfg.replace(phi=0.0))


@pytest.mark.parametrize("theta", THETAS)
def test_hwp_block_matches_target(grid, theta):
    cfg = DeviceConfig.exact(1.0, theta=theta)
    block = extract_rotation(rf_hwp(grid, cfg), 1.0)
    np.testing.assert_allclose(block, target_rotation(theta), atol=1e-12)
    assert np.linalg.det(block) == pytest.approx(1.0, abs=1e-12)


def test_hwp_composition_adds_angles(grid):
    th1, th2 = 0.3, 0.55
    first = rf_hwp(grid, DeviceConfig.exact(1.0, theta=th1))
    second = rf_hwp(grid, DeviceConfig.exact(1.0, theta=th2))
    chained = compose(first, relabel(grid, {"out": "in", "back": "v_in"}), second)
    block = extract_rotation(chained, 1.0)
    np.testing.assert_allclose(
        block, target_rotation(th2) @ target_rotation(th1), atol=1e-12
    )


def test_hwp_monochromatic_has_no_leakage(grid):
    cfg = DeviceConfig.exact(1.0, theta=np.pi / 8)
    state = apply(rf_hwp(grid, cfg), make_monochromatic_state(grid, LogicalQubit.zero(), 1.0))
    mu, nu, leak = project_computational(state, 1.0, port="out")
    assert mu == pytest.approx(-np.cos(np.pi / 4), abs=1e-12)
    assert nu == pytest.approx(np.sin(np.pi / 4), abs=1e-12)
    assert leak < 1e-12  # float residue only; the physical channels below are empty
    assert state.port_probability("back") < 1e-24


@pytest.mark.parametrize("theta", [0.0, np.pi / 8, np.pi / 4])
def test_hwp_detuned_phase_leaks_quadratically(grid, theta):
    # a phase error eps on the split/merge pair leaks eps^2 (cos^2 + sin^2/2)
    # of the population into the unused arm
    coeff = np.cos(2 * theta) ** 2 + 0.5 * np.sin(2 * theta) ** 2
    state = make_monochromatic_state(grid, LogicalQubit.zero(), 1.0)
    for eps, rel in ((1e-3, 1e-3), (1e-2, 1e-3)):
        cfg = DeviceConfig.exact(1.0, theta=theta).replace(phi=np.pi / 2 + eps)
        p_back = apply(rf_hwp(grid, cfg), state).port_probability("back")
        assert p_back == pytest.approx(eps**2 * coeff, rel=rel)


def test_hwp_is_isometry(grid):
    for theta in (0.0, 0.37, np.pi / 2):
        cfg = DeviceConfig.exact(1.0, theta=theta)
        assert isometry_defect(rf_hwp(grid, cfg)) < 1e-12


def test_qwp_sets_relative_phase(grid):
    state = make_monochromatic_state(grid, LogicalQubit.plus(), 1.0)
    out = apply(rf_qwp(grid, "in", 1.0, np.pi / 2), state)
    ratio = out.amplitude("in", 1.0) / out.amplitude("in", -1.0)
    assert ratio == pytest.approx(np.exp(1j * np.pi / 2))


def test_four_quarter_turns_are_identity_up_to_phase(grid):
    quarter = rf_qwp(grid, "in", 1.0, np.pi / 2)
    full = compose(quarter, quarter, quarter, quarter)
    state = make_monochromatic_state(grid, LogicalQubit.normalized(0.6, 0.8j), 1.0)
    out = apply(full, state)
    # global phase drops out of every interference observable
    overlap = out.amplitude("in", -1.0) * np.conj(state.amplitude("in", -1.0)) + out.amplitude(
        "in", 1.0
    ) * np.conj(state.amplitude("in", 1.0))
    assert abs(overlap) == pytest.approx(1.0, abs=1e-12)


def test_hwp_block_on_refined_grid_is_stable():
    coarse = FrequencyGrid.build(4.0, 0.5)
    fine = FrequencyGrid.build(4.0, 0.125)
    cfg = DeviceConfig.exact(1.0, theta=0.3)
    b1 = extract_rotation(rf_hwp(coarse, cfg), 1.0)
    b2 = extract_rotation(rf_hwp(fine, cfg), 1.0)
    np.testing.assert_allclose(b1, b2, atol=1e-12)
