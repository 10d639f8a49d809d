"""Line-oriented netlist language for wiring scattering elements.

Grammar (one statement per line, ``#`` starts a comment):

    grid W=<float> dW=<float>
    bs <port> <port>
    delay <port> tau=<float> phi=<float>
    aom <in_a> <in_b> <out_a> <out_b> theta=<float> delta=<float>
    loss <port> eta=<float>
    device <fbs|rfhwp> omega=<float> [theta=] [tau=] [phi=] [delta=]
                                     [eta_aom=] [eta_mm=]
    input <port> kind=<mono|gauss> [mu=<complex>] [nu=<complex>]
                 omega=<float> [sigma=<float>]
    run

The ``grid`` line comes first and appears once.  ``bs``, ``aom`` and
``device`` introduce port names; ``delay``, ``loss`` and ``input`` may only
reference ports already introduced.  Complex literals use the form
``re+imj``.  Each ``run`` propagates every declared input through the
elements declared so far, in order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from .devices import DeviceConfig, frequency_beamsplitter, rf_hwp
from .elements import AomParams, aom_pass, apply, beamsplitter, delay_arm, loss_element
from .emit import fmt_complex, fmt_float
from .errors import NetlistError, RfqubitError
from .grid import FrequencyGrid
from .state import (
    LogicalQubit,
    PhotonState,
    WavepacketParams,
    make_gaussian_qubit,
    make_monochromatic_state,
)

_PORT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_RESERVED_PORTS = ("sink", "lost")
_DEVICE_PORTS = {
    "fbs": ("in", "v_in", "A1", "A2"),
    "rfhwp": ("in", "v_in", "out", "back"),
}
_DEVICE_PARAM_ORDER = ("omega", "theta", "tau", "phi", "delta", "eta_aom", "eta_mm")


@dataclass(frozen=True)
class GridStmt:
    half_width: float
    spacing: float
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BsStmt:
    a: str
    b: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class DelayStmt:
    port: str
    tau: float
    phi: float
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AomStmt:
    in_a: str
    in_b: str
    out_a: str
    out_b: str
    theta: float
    delta: float
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LossStmt:
    port: str
    eta: float
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class DeviceStmt:
    kind: str
    params: tuple[tuple[str, float], ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class InputStmt:
    port: str
    kind: str
    mu: complex
    nu: complex
    omega: float
    sigma: float | None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RunStmt:
    line: int = field(default=0, compare=False)


Statement = Union[
    GridStmt, BsStmt, DelayStmt, AomStmt, LossStmt, DeviceStmt, InputStmt, RunStmt
]


@dataclass(frozen=True)
class Netlist:
    statements: tuple[Statement, ...]


@dataclass(frozen=True)
class ResultRecord:
    """Final state of one input for one run directive."""

    run_id: str
    label: str
    omega: float
    state: PhotonState


def _tokens(text: str) -> Iterator[tuple[int, list[tuple[str, int]]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", body)]
        if toks:
            yield lineno, toks


def _parse_float(text: str, name: str, line: int, col: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise NetlistError(f"malformed number for {name}: {text!r}", line, col) from None
    if not math.isfinite(value):
        raise NetlistError(f"{name} must be finite, got {text!r}", line, col)
    return value


def _parse_complex(text: str, name: str, line: int, col: int) -> complex:
    try:
        value = complex(text)
    except ValueError:
        raise NetlistError(f"malformed complex for {name}: {text!r}", line, col) from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NetlistError(f"{name} must be finite, got {text!r}", line, col)
    return value


def _split_params(
    toks: list[tuple[str, int]], allowed: tuple[str, ...], line: int
) -> dict[str, tuple[str, int]]:
    seen: dict[str, tuple[str, int]] = {}
    for text, col in toks:
        key, eq, value = text.partition("=")
        if not eq or not key:
            raise NetlistError(f"expected key=value, got {text!r}", line, col)
        if key not in allowed:
            raise NetlistError(f"unknown parameter {key!r}", line, col)
        if key in seen:
            raise NetlistError(f"duplicate parameter {key!r}", line, col)
        seen[key] = (value, col)
    return seen


def _require(
    params: dict[str, tuple[str, int]], names: tuple[str, ...], line: int, col: int
):
    for name in names:
        if name not in params:
            raise NetlistError(f"missing parameter {name!r}", line, col)


class _Parser:
    def __init__(self):
        self.statements: list[Statement] = []
        self.ports: set[str] = set()
        self.grid: GridStmt | None = None

    def port(self, toks, idx, line, introduce: bool) -> str:
        if idx >= len(toks):
            raise NetlistError("missing port name", line, toks[0][1])
        text, col = toks[idx]
        if not _PORT_RE.match(text) or "=" in text:
            raise NetlistError(f"expected a port name, got {text!r}", line, col)
        if text in _RESERVED_PORTS:
            raise NetlistError(f"port name {text!r} is reserved", line, col)
        if introduce:
            self.ports.add(text)
        elif text not in self.ports:
            raise NetlistError(f"undeclared port {text!r}", line, col)
        return text

    def check_on_grid(self, value: float, name: str, line: int, col: int):
        spacing = self.grid.spacing
        k = round(value / spacing)
        if abs(value - k * spacing) > 1e-9 * max(abs(value), spacing):
            raise NetlistError(
                f"{name} = {value} is not a multiple of grid spacing {spacing}",
                line,
                col,
            )

    def feed(self, line: int, toks: list[tuple[str, int]]):
        kind, col0 = toks[0]
        if self.grid is None and kind != "grid":
            raise NetlistError("grid must be declared first", line, col0)
        handler = getattr(self, f"stmt_{kind}", None)
        if handler is None:
            raise NetlistError(f"unknown statement {kind!r}", line, col0)
        handler(line, col0, toks[1:])

    def stmt_grid(self, line, col0, toks):
        if self.grid is not None:
            raise NetlistError("duplicate grid statement", line, col0)
        params = _split_params(toks, ("W", "dW"), line)
        _require(params, ("W", "dW"), line, col0)
        w = _parse_float(params["W"][0], "W", line, params["W"][1])
        dw = _parse_float(params["dW"][0], "dW", line, params["dW"][1])
        if w <= 0.0 or dw <= 0.0:
            raise NetlistError("W and dW must be positive", line, col0)
        self.grid = GridStmt(w, dw, line)
        self.statements.append(self.grid)

    def stmt_bs(self, line, col0, toks):
        a = self.port(toks, 0, line, introduce=True)
        b = self.port(toks, 1, line, introduce=True)
        if len(toks) > 2:
            raise NetlistError(f"unexpected token {toks[2][0]!r}", line, toks[2][1])
        if a == b:
            raise NetlistError("bs ports must differ", line, toks[1][1])
        self.statements.append(BsStmt(a, b, line))

    def stmt_delay(self, line, col0, toks):
        p = self.port(toks, 0, line, introduce=False)
        params = _split_params(toks[1:], ("tau", "phi"), line)
        _require(params, ("tau", "phi"), line, col0)
        tau = _parse_float(params["tau"][0], "tau", line, params["tau"][1])
        phi = _parse_float(params["phi"][0], "phi", line, params["phi"][1])
        self.statements.append(DelayStmt(p, tau, phi, line))

    def stmt_aom(self, line, col0, toks):
        names = [self.port(toks, i, line, introduce=True) for i in range(4)]
        params = _split_params(toks[4:], ("theta", "delta"), line)
        _require(params, ("theta", "delta"), line, col0)
        theta = _parse_float(params["theta"][0], "theta", line, params["theta"][1])
        delta = _parse_float(params["delta"][0], "delta", line, params["delta"][1])
        if not 0.0 <= theta <= math.pi / 2.0:
            raise NetlistError(
                f"theta = {theta} outside [0, pi/2]", line, params["theta"][1]
            )
        if delta <= 0.0:
            raise NetlistError("delta must be positive", line, params["delta"][1])
        self.check_on_grid(delta, "delta", line, params["delta"][1])
        self.statements.append(AomStmt(*names, theta, delta, line))

    def stmt_loss(self, line, col0, toks):
        p = self.port(toks, 0, line, introduce=False)
        params = _split_params(toks[1:], ("eta",), line)
        _require(params, ("eta",), line, col0)
        eta = _parse_float(params["eta"][0], "eta", line, params["eta"][1])
        if not 0.0 <= eta <= 1.0:
            raise NetlistError(f"eta = {eta} outside [0, 1]", line, params["eta"][1])
        self.statements.append(LossStmt(p, eta, line))

    def stmt_device(self, line, col0, toks):
        if not toks:
            raise NetlistError("missing device kind", line, col0)
        kind, kcol = toks[0]
        if kind not in _DEVICE_PORTS:
            raise NetlistError(f"unknown device kind {kind!r}", line, kcol)
        params = _split_params(toks[1:], _DEVICE_PARAM_ORDER, line)
        _require(params, ("omega",), line, col0)
        resolved = []
        for name in _DEVICE_PARAM_ORDER:
            if name not in params:
                continue
            value = _parse_float(params[name][0], name, line, params[name][1])
            if name == "omega":
                if value <= 0.0:
                    raise NetlistError("omega must be positive", line, params[name][1])
                self.check_on_grid(value, "omega", line, params[name][1])
            if name == "delta":
                self.check_on_grid(value, "delta", line, params[name][1])
            if name in ("eta_aom", "eta_mm") and not 0.0 <= value <= 1.0:
                raise NetlistError(f"{name} = {value} outside [0, 1]", line, params[name][1])
            resolved.append((name, value))
        self.ports.update(_DEVICE_PORTS[kind])
        self.statements.append(DeviceStmt(kind, tuple(resolved), line))

    def stmt_input(self, line, col0, toks):
        p = self.port(toks, 0, line, introduce=False)
        params = _split_params(toks[1:], ("kind", "mu", "nu", "omega", "sigma"), line)
        _require(params, ("kind", "omega"), line, col0)
        kind, kcol = params["kind"]
        if kind not in ("mono", "gauss"):
            raise NetlistError(f"kind must be mono or gauss, got {kind!r}", line, kcol)
        mu = 1.0 + 0.0j
        nu = 0.0 + 0.0j
        if "mu" in params:
            mu = _parse_complex(params["mu"][0], "mu", line, params["mu"][1])
        if "nu" in params:
            nu = _parse_complex(params["nu"][0], "nu", line, params["nu"][1])
        norm = abs(mu) ** 2 + abs(nu) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise NetlistError(
                f"|mu|^2 + |nu|^2 = {norm!r} is not 1 within 1e-12", line, col0
            )
        omega = _parse_float(params["omega"][0], "omega", line, params["omega"][1])
        if omega <= 0.0:
            raise NetlistError("omega must be positive", line, params["omega"][1])
        self.check_on_grid(omega, "omega", line, params["omega"][1])
        sigma = None
        if kind == "gauss":
            _require(params, ("sigma",), line, col0)
            sigma = _parse_float(params["sigma"][0], "sigma", line, params["sigma"][1])
            if sigma <= 0.0:
                raise NetlistError("sigma must be positive", line, params["sigma"][1])
        elif "sigma" in params:
            raise NetlistError("sigma is only valid for kind=gauss", line, params["sigma"][1])
        self.statements.append(InputStmt(p, kind, mu, nu, omega, sigma, line))

    def stmt_run(self, line, col0, toks):
        if toks:
            raise NetlistError(f"unexpected token {toks[0][0]!r}", line, toks[0][1])
        self.statements.append(RunStmt(line))


def parse_netlist(text: str) -> Netlist:
    parser = _Parser()
    for line, toks in _tokens(text):
        parser.feed(line, toks)
    if parser.grid is None:
        raise NetlistError("empty netlist: no grid statement", 1, 1)
    return Netlist(tuple(parser.statements))


def _render(stmt: Statement) -> str:
    if isinstance(stmt, GridStmt):
        return f"grid W={fmt_float(stmt.half_width)} dW={fmt_float(stmt.spacing)}"
    if isinstance(stmt, BsStmt):
        return f"bs {stmt.a} {stmt.b}"
    if isinstance(stmt, DelayStmt):
        return f"delay {stmt.port} tau={fmt_float(stmt.tau)} phi={fmt_float(stmt.phi)}"
    if isinstance(stmt, AomStmt):
        return (
            f"aom {stmt.in_a} {stmt.in_b} {stmt.out_a} {stmt.out_b} "
            f"theta={fmt_float(stmt.theta)} delta={fmt_float(stmt.delta)}"
        )
    if isinstance(stmt, LossStmt):
        return f"loss {stmt.port} eta={fmt_float(stmt.eta)}"
    if isinstance(stmt, DeviceStmt):
        parts = [f"device {stmt.kind}"]
        parts.extend(f"{k}={fmt_float(v)}" for k, v in stmt.params)
        return " ".join(parts)
    if isinstance(stmt, InputStmt):
        out = (
            f"input {stmt.port} kind={stmt.kind} mu={fmt_complex(stmt.mu)} "
            f"nu={fmt_complex(stmt.nu)} omega={fmt_float(stmt.omega)}"
        )
        if stmt.sigma is not None:
            out += f" sigma={fmt_float(stmt.sigma)}"
        return out
    if isinstance(stmt, RunStmt):
        return "run"
    raise TypeError(f"cannot render {type(stmt).__name__}")


def pretty_print(netlist: Netlist) -> str:
    """Canonical text form; parsing it back gives an equal Netlist."""
    return "\n".join(_render(stmt) for stmt in netlist.statements) + "\n"


def _build_device(grid: FrequencyGrid, stmt: DeviceStmt):
    given = dict(stmt.params)
    cfg = DeviceConfig.exact(
        given["omega"],
        theta=given.get("theta", 0.0),
        eta_aom=given.get("eta_aom", 1.0),
        eta_mm=given.get("eta_mm", 1.0),
    )
    overrides = {k: given[k] for k in ("tau", "phi", "delta") if k in given}
    if overrides:
        cfg = cfg.replace(**overrides)
    if stmt.kind == "fbs":
        return frequency_beamsplitter(grid, cfg)
    lossy = cfg.eta_aom < 1.0 or cfg.eta_mm < 1.0
    return rf_hwp(grid, cfg, with_loss=lossy)


def _build_input(grid: FrequencyGrid, stmt: InputStmt) -> PhotonState:
    qubit = LogicalQubit(stmt.mu, stmt.nu)
    if stmt.kind == "mono":
        return make_monochromatic_state(grid, qubit, stmt.omega, port=stmt.port)
    params = WavepacketParams(stmt.omega, stmt.sigma)
    return make_gaussian_qubit(grid, qubit, params, port=stmt.port)


def run_netlist(netlist: Netlist) -> list[ResultRecord]:
    """Execute every run directive; one record per (run, input) pair."""
    grid: FrequencyGrid | None = None
    elements = []
    inputs: list[InputStmt] = []
    records: list[ResultRecord] = []
    run_index = 0
    for stmt in netlist.statements:
        try:
            if isinstance(stmt, GridStmt):
                grid = FrequencyGrid.build(stmt.half_width, stmt.spacing)
            elif isinstance(stmt, BsStmt):
                elements.append(beamsplitter(grid, stmt.a, stmt.b))
            elif isinstance(stmt, DelayStmt):
                elements.append(delay_arm(grid, stmt.port, stmt.tau, stmt.phi))
            elif isinstance(stmt, AomStmt):
                elements.append(
                    aom_pass(
                        grid,
                        AomParams(stmt.theta, stmt.delta),
                        stmt.in_a,
                        stmt.in_b,
                        stmt.out_a,
                        stmt.out_b,
                    )
                )
            elif isinstance(stmt, LossStmt):
                elements.append(loss_element(grid, stmt.port, stmt.eta))
            elif isinstance(stmt, DeviceStmt):
                elements.append(_build_device(grid, stmt))
            elif isinstance(stmt, InputStmt):
                inputs.append(stmt)
            elif isinstance(stmt, RunStmt):
                if not inputs:
                    raise NetlistError("run with no declared inputs", stmt.line)
                run_index += 1
                for i, inp in enumerate(inputs):
                    try:
                        state = _build_input(grid, inp)
                    except (RfqubitError, ValueError) as exc:
                        raise NetlistError(str(exc), inp.line) from exc
                    for element in elements:
                        state = apply(element, state)
                    records.append(
                        ResultRecord(
                            run_id=f"run{run_index}.in{i}",
                            label=_render(inp).removeprefix("input "),
                            omega=inp.omega,
                            state=state,
                        )
                    )
        except NetlistError:
            raise
        except (RfqubitError, ValueError) as exc:
            raise NetlistError(str(exc), stmt.line) from exc
    return records
