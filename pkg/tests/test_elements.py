"""Scattering elements: construction, composition, and conservation laws."""

import numpy as np
import pytest

from rfqubit import (
    AomParams,
    FrequencyGrid,
    GridMismatchError,
    ParameterError,
    PortMismatchError,
    aom_pass,
    apply,
    beamsplitter,
    compose,
    delay_arm,
    identity_element,
    isometry_defect,
    loss_element,
    relabel,
    single_mode_state,
    with_identity_on,
)
from rfqubit.elements import attenuation_stage

from conftest import random_state

INV_SQRT2 = 1.0 / np.sqrt(2.0)


def test_beamsplitter_splits_single_mode(grid):
    state = apply(beamsplitter(grid, "a", "b"), single_mode_state(grid, "a", 1.0))
    assert state.amplitude("a", 1.0) == pytest.approx(INV_SQRT2)
    assert state.amplitude("b", 1.0) == pytest.approx(1j * INV_SQRT2)
    assert state.total_probability == pytest.approx(1.0)


def test_two_beamsplitters_swap_with_phase(grid):
    # BS . BS acts as [[0, i], [i, 0]] on the two beams
    double = compose(beamsplitter(grid, "a", "b"), beamsplitter(grid, "a", "b"))
    out = apply(double, single_mode_state(grid, "a", 1.0))
    assert out.amplitude("b", 1.0) == pytest.approx(1j, abs=1e-15)
    assert abs(out.amplitude("a", 1.0)) < 1e-15


@pytest.mark.parametrize("tau,phi", [(0.0, 0.0), (1.3, 0.4), (np.pi / 2, np.pi / 2)])
def test_delay_applies_linear_phase(grid, tau, phi):
    elem = delay_arm(grid, "a", tau, phi)
    for omega in (-1.0, 0.0, 2.5):
        out = apply(elem, single_mode_state(grid, "a", omega))
        assert out.amplitude("a", omega) == pytest.approx(np.exp(1j * (phi + omega * tau)))


def test_delay_leaves_other_ports_alone(grid, rng):
    state = random_state(grid, rng, ports=("a", "b"))
    out = apply(delay_arm(grid, "a", 0.7, 0.2), state)
    np.testing.assert_array_equal(out.port_amplitudes("b"), state.port_amplitudes("b"))


def test_aom_half_coupling(grid):
    # theta = pi/4: half stays, half crosses with an i and a frequency kick
    elem = aom_pass(grid, AomParams(np.pi / 4, 2.0), "a", "b", "c", "d")
    out = apply(elem, single_mode_state(grid, "a", 1.0))
    assert out.amplitude("c", 1.0) == pytest.approx(INV_SQRT2)
    assert out.amplitude("d", -1.0) == pytest.approx(1j * INV_SQRT2)
    out = apply(elem, single_mode_state(grid, "b", -1.0))
    assert out.amplitude("d", -1.0) == pytest.approx(INV_SQRT2)
    assert out.amplitude("c", 1.0) == pytest.approx(1j * INV_SQRT2)


def test_aom_full_coupling_is_shifted_permutation(grid):
    # theta = pi/2 diffracts everything: each input column maps to exactly one
    # output mode (possibly a sink mode near the grid edge) with weight i
    elem = aom_pass(grid, AomParams(np.pi / 2, 2.0), "a", "b", "c", "d")
    m = elem.dense_matrix()
    nonzero_per_col = np.sum(np.abs(m) > 1e-15, axis=0)
    assert np.all(nonzero_per_col == 1)
    assert np.allclose(np.abs(m[np.abs(m) > 1e-15]), 1.0)


def test_aom_clips_to_named_sink(grid):
    # a mode shifted past the grid edge parks on the sink for that beam,
    # tagged with the clipping stage's position in the element
    elem = aom_pass(grid, AomParams(np.pi / 2, 2.0), "a", "b", "c", "d")
    out = apply(elem, single_mode_state(grid, "b", 3.5))  # 3.5 + 2 exceeds W = 4
    assert out.amplitude("sink.0.c", 3.5) == pytest.approx(1j)
    assert out.total_probability == pytest.approx(1.0)


def test_repeated_clipping_stays_incoherent(grid, rng):
    # two successive shift stages clipping toward the same beam must not
    # interfere: total probability is conserved no matter how the clip
    # amplitudes happen to align
    elem = aom_pass(grid, AomParams(np.pi / 4, 2.0), "a", "b", "a", "b")
    state = random_state(grid, rng, ports=("a", "b"))
    once = apply(elem, state)
    twice = apply(elem, once)
    assert once.total_probability == pytest.approx(1.0, abs=1e-12)
    assert twice.total_probability == pytest.approx(1.0, abs=1e-12)
    # the two events are parked under distinct stage tags
    sinks = [p for p in twice.occupied_ports() if p.startswith("sink.")]
    assert any(p.startswith("sink.0.") for p in sinks)
    assert any(p.startswith("sink.1.") for p in sinks)


def test_aom_rejects_bad_parameters(grid):
    with pytest.raises(ParameterError):
        AomParams(-0.1, 2.0)
    with pytest.raises(ParameterError):
        AomParams(2.0, 2.0)  # above pi/2
    with pytest.raises(ParameterError):
        AomParams(0.3, -2.0)
    with pytest.raises(GridMismatchError):
        aom_pass(grid, AomParams(0.3, 0.7), "a", "b", "c", "d")  # 0.7 off grid


def test_loss_element_moves_weight_to_lost(grid):
    eta = 0.64
    out = apply(loss_element(grid, "a", eta), single_mode_state(grid, "a", 1.0))
    assert out.amplitude("a", 1.0) == pytest.approx(np.sqrt(eta))
    assert out.lost_weight == pytest.approx(1.0 - eta)
    assert out.total_probability == pytest.approx(1.0)


def test_attenuation_stage_is_per_port(grid, rng):
    state = random_state(grid, rng, ports=("a", "b"))
    p_a = state.port_probability("a")
    out = apply(attenuation_stage(grid, {"a": 0.25, "b": 1.0}), state)
    assert out.port_probability("a") == pytest.approx(0.25 * p_a)
    np.testing.assert_array_equal(out.port_amplitudes("b"), state.port_amplitudes("b"))
    assert out.lost_weight == pytest.approx(0.75 * p_a)


def test_compose_rejects_uncovered_ports(grid):
    bs = beamsplitter(grid, "a", "b")
    with pytest.raises(PortMismatchError):
        compose(bs, delay_arm(grid, "c", 1.0, 0.0))


def test_compose_associativity_is_exact(grid, rng):
    a = beamsplitter(grid, "a", "b")
    b = aom_pass(grid, AomParams(0.3, 2.0), "a", "b", "c", "d")
    c = beamsplitter(grid, "c", "d")
    state = random_state(grid, rng, ports=("a", "b"))
    left = apply(compose(compose(a, b), c), state)
    right = apply(compose(a, compose(b, c)), state)
    for port in left.occupied_ports():
        np.testing.assert_array_equal(
            left.port_amplitudes(port), right.port_amplitudes(port)
        )


def test_compose_matches_sequential_apply(grid, rng):
    chain = [
        beamsplitter(grid, "a", "b"),
        with_identity_on(delay_arm(grid, "b", np.pi / 2, np.pi / 2), ("a",)),
        beamsplitter(grid, "a", "b"),
    ]
    state = random_state(grid, rng, ports=("a", "b"))
    stepped = state
    for elem in chain:
        stepped = apply(elem, stepped)
    fused = apply(compose(*chain), state)
    for port in stepped.occupied_ports():
        np.testing.assert_allclose(
            fused.port_amplitudes(port), stepped.port_amplitudes(port), atol=1e-15
        )


def test_relabel_moves_amplitudes(grid):
    out = apply(relabel(grid, {"a": "x"}), single_mode_state(grid, "a", 1.0))
    assert out.amplitude("x", 1.0) == pytest.approx(1.0)
    assert out.port_probability("a") == 0.0
    with pytest.raises(PortMismatchError):
        relabel(grid, {"a": "x", "b": "x"})


def test_with_identity_on_widens_ports(grid):
    elem = with_identity_on(delay_arm(grid, "a", 1.0, 0.0), ("b",))
    assert "b" in elem.input_ports and "b" in elem.output_ports
    out = apply(elem, single_mode_state(grid, "b", 1.0))
    assert out.amplitude("b", 1.0) == pytest.approx(1.0)


def test_identity_element_is_identity(grid, rng):
    state = random_state(grid, rng, ports=("a", "b"))
    out = apply(identity_element(grid, ("a", "b")), state)
    for port in ("a", "b"):
        np.testing.assert_array_equal(out.port_amplitudes(port), state.port_amplitudes(port))


def test_reserved_port_names_rejected(grid):
    for bad in ("lost", "sink", "sink.a", "", "has space"):
        with pytest.raises(PortMismatchError):
            delay_arm(grid, bad, 1.0, 0.0)


@pytest.mark.parametrize(
    "builder",
    [
        lambda g: beamsplitter(g, "a", "b"),
        lambda g: delay_arm(g, "a", 1.3, 0.4),
        lambda g: aom_pass(g, AomParams(0.3, 2.0), "a", "b", "c", "d"),
        lambda g: aom_pass(g, AomParams(np.pi / 2, 3.0), "a", "b", "c", "d"),
        lambda g: compose(
            beamsplitter(g, "a", "b"),
            aom_pass(g, AomParams(0.5, 2.0), "a", "b", "c", "d"),
        ),
    ],
)
def test_lossless_elements_are_isometries(grid, builder):
    assert isometry_defect(builder(grid)) < 1e-12


def test_loss_element_defect_equals_deficit(grid):
    assert isometry_defect(loss_element(grid, "a", 0.64)) == pytest.approx(0.36)


def test_probability_conserved_on_random_states(grid, rng):
    chain = compose(
        beamsplitter(grid, "a", "b"),
        aom_pass(grid, AomParams(0.4, 2.0), "a", "b", "c", "d"),
        aom_pass(grid, AomParams(0.4, 2.0), "c", "d", "f", "e"),
        beamsplitter(grid, "e", "f"),
    )
    for _ in range(5):
        state = random_state(grid, rng, ports=("a", "b"))
        out = apply(chain, state)
        assert out.total_probability == pytest.approx(1.0, abs=1e-12)
        assert out.lost_weight == 0.0
