"""Linear optical elements as frequency-indexed scattering maps.

An element is a chain of stages.  Each stage is a set of terms
``out[out_port][k + shift] += coeff[k] * in[in_port][k]``; ports a stage does
not consume pass through unchanged.  Amplitude shifted past the grid edge is
parked on a reserved absorber port (same bin index, coefficient kept), one
per destination beam — ``sink.<out_port>`` — because clipped components of
different beams are distinct physical modes and must not interfere.  With
that, every lossless stage is an exact isometry on the enlarged port set.

Composition concatenates stage chains, which makes
``apply(compose(a, b), s) == apply(b, apply(a, s))`` hold exactly, not just
up to roundoff reordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import GridMismatchError, ParameterError, PortMismatchError
from .grid import FrequencyGrid
from .state import LOST_LABEL, PORT_SINK, PhotonState

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class _Term:
    in_port: str
    out_port: str
    shift: int
    coeff: complex | np.ndarray


@dataclass(frozen=True, eq=False)
class _Stage:
    terms: tuple[_Term, ...]
    lossless: bool = True


def sink_port(out_port: str, ordinal: int) -> str:
    """Absorber port for amplitude clipped while heading to ``out_port``.

    The label carries the position of the clipping stage inside the applied
    element: clip events from different stages belong to physically distinct
    beams and must never add coherently, even when port names repeat after
    composition.  The label is a pure function of the stage tuple, so
    identical elements produce identical spectra.
    """
    return f"{PORT_SINK}.{ordinal}.{out_port}"


def _check_port(name: str) -> str:
    if not name or any(ch.isspace() for ch in name):
        raise PortMismatchError(f"invalid port label {name!r}")
    if name == LOST_LABEL or name == PORT_SINK or name.startswith(PORT_SINK + "."):
        raise PortMismatchError(f"port label {name!r} is reserved")
    return name


@dataclass(frozen=True, eq=False)
class AomParams:
    """Single AOM pass: mixing angle theta in [0, pi/2], drive frequency delta > 0."""

    theta: float
    delta: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi / 2.0:
            raise ParameterError(f"theta = {self.theta} outside [0, pi/2]")
        if self.delta <= 0.0:
            raise ParameterError(f"delta = {self.delta} must be positive")


@dataclass(frozen=True, eq=False)
class ScatteringElement:
    """A chain of scattering stages over named ports on a fixed grid.

    ``input_ports``/``output_ports`` declare the actively coupled ports; at
    apply time the element is the identity on everything else.  ``sink`` is
    implicit and always passes through / accumulates clipped shifts.
    """

    grid: FrequencyGrid
    input_ports: tuple[str, ...]
    output_ports: tuple[str, ...]
    stages: tuple[_Stage, ...]

    @property
    def lossless(self) -> bool:
        return all(st.lossless for st in self.stages)

    def apply(self, state: PhotonState) -> PhotonState:
        return apply(self, state)

    def sink_ports(self) -> tuple[str, ...]:
        """Absorber ports any stage of this element can populate."""
        names = {
            sink_port(t.out_port, ordinal)
            for ordinal, stage in enumerate(self.stages)
            for t in stage.terms
            if t.shift != 0
        }
        return tuple(sorted(names))

    def dense_matrix(
        self,
        in_ports: Iterable[str] | None = None,
        out_ports: Iterable[str] | None = None,
    ) -> np.ndarray:
        """Matrix over (port, bin) modes; mode order is port-major, bins ascending.

        Output rows default to the declared outputs plus the reachable
        absorber ports, so the matrix of a lossless element satisfies
        S^H S = I even when shifts clip at the grid edge.
        """
        n = self.grid.n_bins
        ins = tuple(in_ports) if in_ports is not None else self.input_ports
        outs = (
            tuple(out_ports)
            if out_ports is not None
            else self.output_ports + self.sink_ports()
        )
        total = n * len(ins)
        amps = {}
        for j, port in enumerate(ins):
            block = np.zeros((n, total), dtype=complex)
            block[:, j * n : (j + 1) * n] = np.eye(n)
            amps[port] = block
        out = _propagate(self.stages, amps, (n, total))
        rows = [out.get(p, np.zeros((n, total), dtype=complex)) for p in outs]
        return np.vstack(rows)


def _propagate(
    stages: Iterable[_Stage],
    amps: Mapping[str, np.ndarray],
    shape: tuple[int, ...],
) -> dict[str, np.ndarray]:
    current = dict(amps)
    for ordinal, stage in enumerate(stages):
        current = _apply_terms(stage.terms, current, shape, ordinal)
    return current


def _apply_terms(
    terms: tuple[_Term, ...],
    amps: Mapping[str, np.ndarray],
    shape: tuple[int, ...],
    ordinal: int,
) -> dict[str, np.ndarray]:
    n = shape[0]
    out: dict[str, np.ndarray] = {}

    def acc(port: str) -> np.ndarray:
        arr = out.get(port)
        if arr is None:
            arr = np.zeros(shape, dtype=complex)
            out[port] = arr
        return arr

    consumed = {t.in_port for t in terms}
    for port, arr in amps.items():
        if port not in consumed:
            acc(port)[...] += arr

    for t in terms:
        src = amps.get(t.in_port)
        if src is None:
            continue
        if isinstance(t.coeff, np.ndarray) and src.ndim == 2:
            contrib = t.coeff[:, None] * src
        else:
            contrib = t.coeff * src
        s = t.shift
        if s == 0:
            acc(t.out_port)[...] += contrib
        elif s > 0:
            keep = n - s
            if keep > 0:
                acc(t.out_port)[s:] += contrib[:keep]
            lo = max(keep, 0)
            acc(sink_port(t.out_port, ordinal))[lo:] += contrib[lo:]
        else:
            keep = n + s
            if keep > 0:
                acc(t.out_port)[:keep] += contrib[-s:]
            hi = min(-s, n)
            acc(sink_port(t.out_port, ordinal))[:hi] += contrib[:hi]
    return {p: a for p, a in out.items() if np.any(a)}


def _norm2(amps: Mapping[str, np.ndarray]) -> float:
    return sum(float(np.sum(np.abs(a) ** 2)) for a in amps.values())


def _sink_ordinal(label: str) -> int:
    return int(label.split(".", 2)[1])


def apply(element: ScatteringElement, state: PhotonState) -> PhotonState:
    """Propagate a state through an element; identity on undeclared ports."""
    if element.grid != state.grid:
        raise GridMismatchError("element and state grids differ")
    n = element.grid.n_bins
    amps: Mapping[str, np.ndarray] = {
        p: state.port_amplitudes(p) for p in state.occupied_ports()
    }
    # continue the sink numbering past whatever earlier applications left
    # behind, so clip events from successive elements stay distinguishable
    offset = 1 + max(
        (_sink_ordinal(p) for p in amps if p.startswith(PORT_SINK + ".")),
        default=-1,
    )
    lost = state.lost_weight
    for ordinal, stage in enumerate(element.stages):
        new = _apply_terms(stage.terms, amps, (n,), offset + ordinal)
        if not stage.lossless:
            lost += max(0.0, _norm2(amps) - _norm2(new))
        amps = new
    return PhotonState(element.grid, amps, lost)


def compose(first: ScatteringElement, *rest: ScatteringElement) -> ScatteringElement:
    """Chain elements left to right; later input ports must cover earlier outputs."""
    result = first
    for nxt in rest:
        if nxt.grid != result.grid:
            raise GridMismatchError("cannot compose elements on different grids")
        missing = set(result.output_ports) - set(nxt.input_ports)
        if missing:
            raise PortMismatchError(
                f"second element does not accept ports {sorted(missing)}"
            )
        extra_in = tuple(p for p in nxt.input_ports if p not in result.input_ports and p not in result.output_ports)
        result = ScatteringElement(
            grid=result.grid,
            input_ports=result.input_ports + extra_in,
            output_ports=nxt.output_ports,
            stages=result.stages + nxt.stages,
        )
    return result


def with_identity_on(element: ScatteringElement, ports: Iterable[str]) -> ScatteringElement:
    """Widen the declared port sets; behaviour is unchanged (pass-through)."""
    extra = tuple(_check_port(p) for p in ports)
    return ScatteringElement(
        grid=element.grid,
        input_ports=element.input_ports + tuple(p for p in extra if p not in element.input_ports),
        output_ports=element.output_ports + tuple(p for p in extra if p not in element.output_ports),
        stages=element.stages,
    )


def identity_element(grid: FrequencyGrid, ports: Iterable[str]) -> ScatteringElement:
    named = tuple(_check_port(p) for p in ports)
    return ScatteringElement(grid, named, named, stages=())


def relabel(grid: FrequencyGrid, mapping: Mapping[str, str]) -> ScatteringElement:
    """Rename ports; amplitudes are carried over unchanged."""
    if len(set(mapping.values())) != len(mapping):
        raise PortMismatchError(f"relabel targets collide: {mapping}")
    terms = tuple(
        _Term(_check_port(old), _check_port(new), 0, 1.0 + 0.0j)
        for old, new in mapping.items()
    )
    return ScatteringElement(grid, tuple(mapping), tuple(mapping.values()), (_Stage(terms),))


def beamsplitter(grid: FrequencyGrid, a: str, b: str) -> ScatteringElement:
    """Symmetric 50/50 splitter: out_a = (a + i b)/sqrt2, out_b = (i a + b)/sqrt2."""
    _check_port(a), _check_port(b)
    if a == b:
        raise PortMismatchError(f"beamsplitter needs two distinct ports, got {a!r} twice")
    t = _INV_SQRT2 + 0.0j
    r = 1.0j * _INV_SQRT2
    terms = (
        _Term(a, a, 0, t),
        _Term(b, a, 0, r),
        _Term(a, b, 0, r),
        _Term(b, b, 0, t),
    )
    return ScatteringElement(grid, (a, b), (a, b), (_Stage(terms),))


def delay_arm(grid: FrequencyGrid, port: str, tau: float, phi: float) -> ScatteringElement:
    """Propagation phase exp(i(phi + omega*tau)) on one port."""
    _check_port(port)
    coeff = np.exp(1j * (phi + grid.omegas() * tau))
    terms = (_Term(port, port, 0, coeff),)
    return ScatteringElement(grid, (port,), (port,), (_Stage(terms),))


def aom_pass(
    grid: FrequencyGrid,
    params: AomParams,
    in_a: str,
    in_b: str,
    out_a: str,
    out_b: str,
) -> ScatteringElement:
    """One pass through an AOM coupling two beams with a frequency kick.

    The undiffracted component keeps its frequency with weight cos(theta);
    the diffracted component crosses beams with weight i*sin(theta) and is
    shifted by the drive: ``out_a`` receives the up-shifted part of ``in_b``,
    ``out_b`` the down-shifted part of ``in_a``:

        out_a(w) = cos(theta) in_a(w) + i sin(theta) in_b(w - delta)
        out_b(w) = cos(theta) in_b(w) + i sin(theta) in_a(w + delta)
    """
    for p in (in_a, in_b, out_a, out_b):
        _check_port(p)
    if in_a == in_b or out_a == out_b:
        raise PortMismatchError("AOM ports must be pairwise distinct per side")
    shift = grid.shift_bins(params.delta)
    c = math.cos(params.theta) + 0.0j
    s = 1.0j * math.sin(params.theta)
    terms = (
        _Term(in_a, out_a, 0, c),
        _Term(in_b, out_a, +shift, s),
        _Term(in_b, out_b, 0, c),
        _Term(in_a, out_b, -shift, s),
    )
    return ScatteringElement(grid, (in_a, in_b), (out_a, out_b), (_Stage(terms),))


def loss_element(grid: FrequencyGrid, port: str, eta: float) -> ScatteringElement:
    """Scalar transmission eta on one port; the deficit becomes lost weight."""
    _check_port(port)
    if not 0.0 <= eta <= 1.0:
        raise ParameterError(f"eta = {eta} outside [0, 1]")
    terms = (_Term(port, port, 0, math.sqrt(eta) + 0.0j),)
    return ScatteringElement(grid, (port,), (port,), (_Stage(terms, lossless=False),))


def attenuation_stage(grid: FrequencyGrid, etas: Mapping[str, float]) -> ScatteringElement:
    """Independent transmissions on several ports in a single lossy stage."""
    terms = []
    for port, eta in etas.items():
        _check_port(port)
        if not 0.0 <= eta <= 1.0:
            raise ParameterError(f"eta = {eta} outside [0, 1]")
        terms.append(_Term(port, port, 0, math.sqrt(eta) + 0.0j))
    ports = tuple(etas)
    return ScatteringElement(grid, ports, ports, (_Stage(tuple(terms), lossless=False),))


def isometry_defect(element: ScatteringElement) -> float:
    """max |S^H S - I| with sink rows included; 0 for an exact isometry."""
    m = element.dense_matrix()
    gram = m.conj().T @ m
    return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))
