"""Request handlers.

Every handler takes a validated request model and returns
``(content, media_type)`` with fully deterministic bytes, so the CLI can
call them in-process and the HTTP layer stays a thin wrapper.
"""

from __future__ import annotations

import math

from ..devices import DeviceConfig, extract_rotation, frequency_beamsplitter, rf_hwp
from ..elements import apply
from ..emit import fidelity_csv, render_json, spectra_csv, spectra_json
from ..errors import NormalizationError
from ..grid import FrequencyGrid
from ..loss import LossBudget
from ..netlist import ResultRecord, parse_netlist, run_netlist
from ..state import (
    PORT_IN,
    LogicalQubit,
    WavepacketParams,
    make_gaussian_qubit,
    make_monochromatic_state,
    project_computational,
)
from ..wavepacket import fidelity_sweep
from .models import (
    FbsDemoRequest,
    FidelitySweepRequest,
    HwpRotateRequest,
    LossBudgetRequest,
    NetlistRunRequest,
)

CSV = "text/csv; charset=utf-8"
JSON = "application/json"


def _mono_grid(omega: float) -> FrequencyGrid:
    return FrequencyGrid.build(4.0 * omega, omega / 2.0)


def _parse_coeff(text: str, name: str) -> complex:
    try:
        return complex(text)
    except ValueError:
        raise NormalizationError(f"malformed complex for {name}: {text!r}") from None


def fbs_demo(req: FbsDemoRequest) -> tuple[str, str]:
    omega = req.omega
    if req.kind == "mono":
        grid = _mono_grid(omega)
        states = [
            make_monochromatic_state(grid, q, omega)
            for q in (LogicalQubit.zero(), LogicalQubit.one())
        ]
    else:
        params = WavepacketParams(omega, omega**2 / req.ratio)
        grid = FrequencyGrid.for_wavepacket(params.omega, params.sigma)
        states = [
            make_gaussian_qubit(grid, q, params)
            for q in (LogicalQubit.zero(), LogicalQubit.one())
        ]
    element = frequency_beamsplitter(grid, DeviceConfig.exact(omega))
    records = [
        ResultRecord(
            run_id=f"fbs.basis{i}",
            label=f"{PORT_IN} {req.kind} basis {i}",
            omega=omega,
            state=apply(element, state),
        )
        for i, state in enumerate(states)
    ]
    return spectra_csv(records), CSV


def hwp_rotate(req: HwpRotateRequest) -> tuple[str, str]:
    qubit = LogicalQubit(_parse_coeff(req.mu, "mu"), _parse_coeff(req.nu, "nu"))
    grid = _mono_grid(req.omega)
    cfg = DeviceConfig.exact(req.omega, req.theta)
    device = rf_hwp(grid, cfg)
    block = extract_rotation(device, req.omega)
    state = apply(device, make_monochromatic_state(grid, qubit, req.omega))
    mu_out, nu_out, leak = project_computational(state, req.omega, "out")
    payload = {
        "omega": req.omega,
        "theta": req.theta,
        "block_re": [[block[i, j].real for j in (0, 1)] for i in (0, 1)],
        "block_im": [[block[i, j].imag for j in (0, 1)] for i in (0, 1)],
        "input": {
            "mu_re": qubit.mu.real,
            "mu_im": qubit.mu.imag,
            "nu_re": qubit.nu.real,
            "nu_im": qubit.nu.imag,
        },
        "output": {
            "mu_re": mu_out.real,
            "mu_im": mu_out.imag,
            "nu_re": nu_out.real,
            "nu_im": nu_out.imag,
            "leak": leak,
        },
        "port_probabilities": {
            port: state.port_probability(port)
            for port in sorted(state.occupied_ports())
        },
    }
    return render_json(payload) + "\n", JSON


def sweep(req: FidelitySweepRequest) -> tuple[str, str]:
    results = fidelity_sweep(req.ratios, req.thetas, omega=req.omega, index=req.input_index)
    return fidelity_csv(results), CSV


def loss_budget(req: LossBudgetRequest) -> tuple[str, str]:
    budget = LossBudget(req.eta_aom, req.eta_mm)
    eta = budget.eta_total
    payload = {
        "eta_aom": budget.eta_aom,
        "eta_mm": budget.eta_mm,
        "eta_total": eta,
        "loss_fraction": 1.0 - eta,
        # a fully opaque budget has no finite dB figure
        "insertion_loss_db": None if eta == 0.0 else -10.0 * math.log10(eta),
    }
    return render_json(payload) + "\n", JSON


def netlist_run(req: NetlistRunRequest) -> tuple[str, str]:
    records = run_netlist(parse_netlist(req.text))
    if req.format == "json":
        return spectra_json(records), JSON
    return spectra_csv(records), CSV
