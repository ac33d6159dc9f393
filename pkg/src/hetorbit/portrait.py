"""Phase portraits of ``Δ²x_{n-1} + A sin x_n = 0`` in the original coordinates.

Here the stable centres are the multiples of 2π and the saddles sit at odd
multiples of π; ``y = x - π`` maps these orbits to the translated ones used
everywhere else in the package. Each orbit is iterated on the phase plane
``(x_n, Δx_n)`` by ``x' = x + v``, ``v' = v - A sin x'``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .core import TWO_PI, Params, PhaseState

OVERFLOW_LIMIT = 1e6
DEFAULT_STEPS = 10_000
MONOTONE_WINDOW = 100
ENERGY_SLACK = 2.0


class OrbitClass(str, Enum):
    LIBRATION = "libration"
    ROTATION = "rotation"
    DISORDERED = "disordered"


@dataclass(frozen=True, eq=False)
class OrbitTrace:
    params: Params
    initial: PhaseState
    x: np.ndarray
    dx: np.ndarray
    classification: OrbitClass
    overflow: bool = False

    def __len__(self):
        return self.x.size

    @property
    def points(self) -> list[PhaseState]:
        return [PhaseState(float(a), float(b)) for a, b in zip(self.x, self.dx)]

    def map_residual(self) -> np.ndarray:
        """``Δ²x_{n-1} + A sin x_n`` rebuilt from the stored differences."""
        return (self.dx[1:] - self.dx[:-1]) + self.params.amplitude * np.sin(self.x[1:])

    def position_residual(self) -> np.ndarray:
        """``x_{n+1} - x_n - Δx_n``; zero up to one rounding of ``x``."""
        return self.x[1:] - self.x[:-1] - self.dx[:-1]


def classify(
    x: Sequence[float],
    dx: Sequence[float] | None = None,
    amplitude: float | None = None,
    window: int = MONOTONE_WINDOW,
    energy_slack: float = ENERGY_SLACK,
) -> OrbitClass:
    """Label a trace as libration, rotation or disordered.

    Libration: every point stays inside the open cell ``(c - π, c + π)`` of
    its starting centre ``c = 2π round(x_0 / 2π)``.

    Rotation: the trace ends in a monotone run of at least
    ``max(window, len/2)`` points crossing two or more cell boundaries. When
    ``amplitude`` is given the run must also look like an invariant curve:
    the spread of ``(Δx)²`` over it may not exceed ``energy_slack · 4A``, the
    spread allowed by the continuum energy.

    Anything else is disordered.
    """
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two points to classify")
    d = np.diff(x) if dx is None else np.asarray(dx, dtype=float)[: x.size - 1]
    c = TWO_PI * round(x[0] / TWO_PI)
    if np.all(np.abs(x - c) < math.pi):
        return OrbitClass.LIBRATION

    sign = np.sign(d[-1])
    if sign == 0:
        return OrbitClass.DISORDERED
    off = np.nonzero(np.sign(d) != sign)[0]
    start = int(off[-1]) + 1 if off.size else 0
    run = x.size - start
    if run < min(x.size, max(window, x.size // 2)):
        return OrbitClass.DISORDERED
    cells = np.floor((x[[start, -1]] + math.pi) / TWO_PI)
    if abs(cells[1] - cells[0]) < 2:
        return OrbitClass.DISORDERED
    if amplitude is not None:
        v2 = d[start:] ** 2
        if v2.size and v2.max() - v2.min() > energy_slack * 4.0 * amplitude:
            return OrbitClass.DISORDERED
    return OrbitClass.ROTATION


def iterate_orbit(params: Params, initial: PhaseState, steps: int, window: int = MONOTONE_WINDOW) -> OrbitTrace:
    """Iterate ``steps`` times from ``initial``; ``steps + 1`` points unless overflowed.

    Once ``|x|`` exceeds ``OVERFLOW_LIMIT`` the trace is cut there, flagged
    and classified as disordered.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    xs, vs, count = _kernels.orbit(
        float(initial.position), float(initial.velocity), -params.amplitude, int(steps), OVERFLOW_LIMIT
    )
    xs = np.array(xs[:count])
    vs = np.array(vs[:count])
    overflow = count < steps + 1
    if overflow:
        cls = OrbitClass.DISORDERED
    else:
        cls = classify(xs, vs, params.amplitude, window=window)
    return OrbitTrace(params, initial, xs, vs, cls, overflow)


def default_initial_conditions(params: Params) -> list[PhaseState]:
    """Eighteen librating seeds ``x_0 = ±0.4, ..., ±3.6`` plus two rotating ones.

    The rotation seeds start at ``x = 0`` with speed ``±1.05 · 2√A``, just
    above the continuum separatrix speed ``2√A``.
    """
    ics = []
    for k in range(1, 10):
        x0 = round(0.4 * k, 10)
        ics.append(PhaseState(-x0, 0.0))
        ics.append(PhaseState(x0, 0.0))
    v = 2.0 * math.sqrt(params.amplitude) * 1.05
    ics.append(PhaseState(0.0, v))
    ics.append(PhaseState(0.0, -v))
    return ics


def portrait_grid(params: Params, ic_list: Iterable[PhaseState] | None = None, steps: int = DEFAULT_STEPS) -> list[OrbitTrace]:
    ics = default_initial_conditions(params) if ic_list is None else list(ic_list)
    if not ics:
        raise ValueError("initial condition list is empty")
    return [iterate_orbit(params, ic, steps) for ic in ics]


def count_classes(traces: Iterable[OrbitTrace]) -> dict[str, int]:
    out = {c.value: 0 for c in OrbitClass}
    for t in traces:
        out[t.classification.value] += 1
    return out


def write_csv(traces: Sequence[OrbitTrace], fh) -> None:
    """Rows ``trace_id,n,x,dx`` with 17 significant digits."""
    fh.write("trace_id,n,x,dx\n")
    for tid, t in enumerate(traces):
        for n, (a, b) in enumerate(zip(t.x.tolist(), t.dx.tolist())):
            fh.write(f"{tid},{n},{a:.17g},{b:.17g}\n")


_PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


def default_ranges(params: Params) -> tuple[tuple[float, float], tuple[float, float]]:
    vmax = 3.0 * math.sqrt(params.amplitude) * 2.0
    return (-2.0 * TWO_PI, 2.0 * TWO_PI), (-vmax, vmax)


def write_svg(
    traces: Sequence[OrbitTrace],
    fh,
    x_range: tuple[float, float] | None = None,
    dx_range: tuple[float, float] | None = None,
    size: tuple[int, int] = (800, 500),
) -> None:
    """One polyline per trace in the ``(x, Δx)`` plane; points outside the box are dropped."""
    if not traces:
        raise ValueError("no traces")
    dxr, dvr = default_ranges(traces[0].params)
    x0, x1 = x_range or dxr
    v0, v1 = dx_range or dvr
    w, h = size
    fh.write(f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n')
    fh.write(f'<rect width="{w}" height="{h}" fill="white"/>\n')
    # axes through the origin when it is in view
    if x0 < 0 < x1:
        ax = (0 - x0) / (x1 - x0) * w
        fh.write(f'<line x1="{ax:.2f}" y1="0" x2="{ax:.2f}" y2="{h}" stroke="#bbb" stroke-width="0.5"/>\n')
    if v0 < 0 < v1:
        ay = h - (0 - v0) / (v1 - v0) * h
        fh.write(f'<line x1="0" y1="{ay:.2f}" x2="{w}" y2="{ay:.2f}" stroke="#bbb" stroke-width="0.5"/>\n')
    for tid, t in enumerate(traces):
        keep = (t.x >= x0) & (t.x <= x1) & (t.dx >= v0) & (t.dx <= v1)
        px = (t.x[keep] - x0) / (x1 - x0) * w
        py = h - (t.dx[keep] - v0) / (v1 - v0) * h
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px.tolist(), py.tolist()))
        color = _PALETTE[tid % len(_PALETTE)]
        fh.write(
            f'<polyline id="trace-{tid}" class="{t.classification.value}" fill="none" stroke="{color}" '
            f'stroke-width="0.6" points="{pts}"/>\n'
        )
    fh.write("</svg>\n")
