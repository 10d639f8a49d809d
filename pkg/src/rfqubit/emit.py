"""Deterministic CSV/JSON rendering.

All numbers go through the same 12-significant-digit formatter so repeated
runs, the CLI, and the service produce byte-identical output.  JSON is
rendered by hand because the stdlib encoder would reintroduce repr-style
floats.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping, Sequence

import numpy as np

from .state import (
    LOST_LABEL,
    PORT_A1,
    PORT_A2,
    PORT_A3,
    PORT_A4,
    PORT_A5,
    PORT_A6,
    PORT_BACK,
    PORT_IN,
    PORT_OUT,
    PORT_SINK,
    PORT_V_IN,
)

SPECTRA_CSV_FIELDS = ("run_id", "port", "bin_omega_over_Omega", "prob", "amp_re", "amp_im")
FIDELITY_CSV_FIELDS = ("ratio", "theta", "fidelity", "leak")

# Probabilities at or below this are numerical dust, not physics; they are
# dropped from emitted tables to keep them stable across platforms.
PROB_FLOOR = 1e-15

_PORT_ORDER = {
    p: i
    for i, p in enumerate(
        (
            PORT_IN,
            PORT_V_IN,
            PORT_A1,
            PORT_A2,
            PORT_A3,
            PORT_A4,
            PORT_A5,
            PORT_A6,
            PORT_OUT,
            PORT_BACK,
        )
    )
}
_USER_RANK = len(_PORT_ORDER)
_SINK_RANK = _USER_RANK + 1


def port_sort_key(port: str) -> tuple[int, str]:
    """Device ports in circuit order, then user ports, absorbers last."""
    if port == PORT_SINK or port.startswith(PORT_SINK + "."):
        return (_SINK_RANK, port)
    return (_PORT_ORDER.get(port, _USER_RANK), port)


def fmt_float(x: float) -> str:
    """12 significant digits; negative zero normalized."""
    return "%.12g" % (float(x) + 0.0)


def fmt_complex(z: complex) -> str:
    """Canonical complex literal re+imj, reparseable by complex()."""
    re, im = float(z.real) + 0.0, float(z.imag) + 0.0
    sign = "+" if im >= 0.0 else "-"
    return f"{fmt_float(re)}{sign}{fmt_float(abs(im))}j"


def render_json(value, indent: int = 0) -> str:
    """Render a dict/list/scalar tree with deterministic float formatting."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, Mapping):
        if not value:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(k))}: {render_json(v, indent + 1)}"
            for k, v in value.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not len(value):
            return "[]"
        items = [f"{inner}{render_json(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return fmt_float(float(value))
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot render {type(value).__name__} deterministically")


def _record_rows(record) -> list[dict]:
    state = record.state
    grid = state.grid
    omegas = grid.omegas()
    rows = []
    for port in sorted(state.occupied_ports(), key=port_sort_key):
        amps = state.port_amplitudes(port)
        probs = np.abs(amps) ** 2
        for k in np.nonzero(probs > PROB_FLOOR)[0]:
            rows.append(
                {
                    "port": port,
                    "bin_omega_over_Omega": omegas[k] / record.omega,
                    "prob": probs[k],
                    "amp_re": amps[k].real,
                    "amp_im": amps[k].imag,
                }
            )
    rows.append(
        {
            "port": LOST_LABEL,
            "bin_omega_over_Omega": 0.0,
            "prob": state.lost_weight,
            "amp_re": 0.0,
            "amp_im": 0.0,
        }
    )
    return rows


def spectra_csv(records: Iterable) -> str:
    lines = [",".join(SPECTRA_CSV_FIELDS)]
    for record in records:
        for row in _record_rows(record):
            lines.append(
                ",".join(
                    (
                        record.run_id,
                        row["port"],
                        fmt_float(row["bin_omega_over_Omega"]),
                        fmt_float(row["prob"]),
                        fmt_float(row["amp_re"]),
                        fmt_float(row["amp_im"]),
                    )
                )
            )
    return "\n".join(lines) + "\n"


def spectra_json(records: Iterable) -> str:
    payload = {
        "records": [
            {
                "run_id": record.run_id,
                "input": record.label,
                "omega": record.omega,
                "total_probability": record.state.total_probability,
                "lost_weight": record.state.lost_weight,
                "rows": _record_rows(record),
            }
            for record in records
        ]
    }
    return render_json(payload) + "\n"


def fidelity_csv(results: Sequence) -> str:
    lines = [",".join(FIDELITY_CSV_FIELDS)]
    for r in results:
        lines.append(
            ",".join(
                (fmt_float(r.ratio), fmt_float(r.theta), fmt_float(r.fidelity), fmt_float(r.leak))
            )
        )
    return "\n".join(lines) + "\n"
