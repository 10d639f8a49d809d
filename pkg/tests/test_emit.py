"""Deterministic CSV/JSON rendering of run records and sweep tables."""

import json

import numpy as np
import pytest

from rfqubit import FrequencyGrid, parse_netlist, run_netlist
from rfqubit.emit import (
    FIDELITY_CSV_FIELDS,
    PROB_FLOOR,
    SPECTRA_CSV_FIELDS,
    fidelity_csv,
    fmt_complex,
    fmt_float,
    port_sort_key,
    render_json,
    spectra_csv,
    spectra_json,
)
from rfqubit.wavepacket import FidelityResult

NETLIST = """grid W=4 dW=0.5
bs a b
loss a eta=0.64
input a kind=mono mu=0.6+0j nu=0.8+0j omega=1
run
"""


@pytest.mark.parametrize(
    "value,expected",
    [
        (0.0, "0"),
        (-0.0, "0"),  # negative zero never leaks into the output
        (1.0, "1"),
        (0.81450625, "0.81450625"),
        (1 / 3, "0.333333333333"),
        (-2.5e-13, "-2.5e-13"),
        (123456789012345.0, "1.23456789012e+14"),
    ],
)
def test_fmt_float(value, expected):
    assert fmt_float(value) == expected


@pytest.mark.parametrize(
    "value,expected",
    [
        (1 + 0j, "1+0j"),
        (0 - 1j, "0-1j"),
        (complex(-0.0, -0.0), "0+0j"),
        (0.6 + 0.8j, "0.6+0.8j"),
    ],
)
def test_fmt_complex(value, expected):
    assert fmt_complex(value) == expected
    assert complex(expected) == pytest.approx(value)


def test_render_json_is_sorted_stable():
    payload = {"b": [1, 2.5, None, True], "a": {"x": "s"}}
    text = render_json(payload)
    assert json.loads(text) == payload  # insertion order preserved, valid JSON
    assert render_json(payload) == text
    with pytest.raises(TypeError):
        render_json(object())


def test_port_ordering_puts_sinks_last():
    ports = ["sink.A3", "out", "zeta", "in", "A2", "back"]
    assert sorted(ports, key=port_sort_key) == [
        "in",
        "A2",
        "out",
        "back",
        "zeta",
        "sink.A3",
    ]


def test_spectra_csv_layout():
    records = run_netlist(parse_netlist(NETLIST))
    text = spectra_csv(records)
    lines = text.splitlines()
    assert lines[0] == ",".join(SPECTRA_CSV_FIELDS)
    # port a at -1 and +1, port b at -1 and +1, then the lost row
    body = [line.split(",") for line in lines[1:]]
    assert [row[1] for row in body] == ["a", "a", "b", "b", "lost"]
    assert [row[2] for row in body] == ["-1", "1", "-1", "1", "0"]
    a_lo = body[0]
    assert a_lo[3] == fmt_float(0.5 * 0.36 * 0.64)
    lost = body[-1]
    assert lost[3] == fmt_float(0.5 * 0.36)
    # emission is a pure function of the records
    assert spectra_csv(records) == text


def test_spectra_csv_drops_numerical_dust():
    grid = FrequencyGrid.build(4.0, 0.5)
    amps = np.zeros(grid.n_bins, dtype=complex)
    amps[0] = np.sqrt(PROB_FLOOR) / 10.0  # below the floor
    amps[1] = np.sqrt(1.0 - PROB_FLOOR / 100.0)

    class Rec:
        run_id = "run1.in0"
        label = "test"
        omega = 1.0

        def __init__(self, state):
            self.state = state

    from rfqubit import PhotonState

    rec = Rec(PhotonState(grid, {"a": amps}))
    rows = spectra_csv([rec]).splitlines()[1:]
    assert len(rows) == 2  # one surviving bin plus the lost row
    assert rows[0].split(",")[2] == fmt_float(-3.5)


def test_spectra_json_round_trips():
    records = run_netlist(parse_netlist(NETLIST))
    text = spectra_json(records)
    payload = json.loads(text)
    rec = payload["records"][0]
    assert rec["run_id"] == "run1.in0"
    assert rec["input"].startswith("a kind=mono")
    assert rec["total_probability"] == pytest.approx(1.0)
    assert rec["lost_weight"] == pytest.approx(0.5 * 0.36)
    assert rec["rows"][-1]["port"] == "lost"
    assert spectra_json(records) == text


def test_fidelity_csv_layout():
    rows = [
        FidelityResult(10.0, 0.0, 0.9419682484, 0.0580317516),
        FidelityResult(100.0, 0.39269908, 0.9938628892, 0.0061533),
    ]
    text = fidelity_csv(rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(FIDELITY_CSV_FIELDS)
    assert lines[1] == "10,0,0.9419682484,0.0580317516"
    assert lines[2].startswith("100,0.39269908,")
