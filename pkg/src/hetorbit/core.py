"""The discrete pendulum map in translated coordinates.

Orbits of ``Δ²y_{n-1} - A sin y_n = 0`` are generated by the three-term
recurrence ``y_{n+1} = 2 y_n - y_{n-1} + A sin y_n``. Equilibria of interest
are the multiples of 2π (the set Θ). Angles are never reduced mod 2π.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

TWO_PI = 2.0 * math.pi
GAMMA = TWO_PI / 3.0
TAIL_TOL = 1e-9


class TailNotEquilibrium(ValueError):
    """A window tail is not in Θ, so its action is infinite."""


@dataclass(frozen=True)
class Params:
    amplitude: float

    def __post_init__(self):
        a = float(self.amplitude)
        if not (math.isfinite(a) and a > 0.0):
            raise ValueError(f"amplitude must be a positive finite number, got {self.amplitude!r}")
        object.__setattr__(self, "amplitude", a)


@dataclass(frozen=True)
class PhaseState:
    """Point ``(y_n, y_{n+1} - y_n)`` of the phase plane."""

    position: float
    velocity: float

    def __post_init__(self):
        if not (math.isfinite(self.position) and math.isfinite(self.velocity)):
            raise ValueError("phase state must be finite")


@dataclass(frozen=True, eq=False)
class Window:
    """Finite segment ``y_{n0}, ..., y_{n1}`` of a bi-infinite sequence.

    Outside the segment the sequence is constant: ``left_tail`` for ``n < n0``
    and ``right_tail`` for ``n > n1``.
    """

    first_index: int
    values: np.ndarray
    left_tail: float = 0.0
    right_tail: float = 0.0

    def __post_init__(self):
        vals = np.array(self.values, dtype=float, copy=True).reshape(-1)
        if vals.size == 0:
            raise ValueError("window needs at least one value")
        if not np.all(np.isfinite(vals)):
            raise ValueError("window values must be finite")
        if not (math.isfinite(self.left_tail) and math.isfinite(self.right_tail)):
            raise ValueError("window tails must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "first_index", int(self.first_index))
        object.__setattr__(self, "left_tail", float(self.left_tail))
        object.__setattr__(self, "right_tail", float(self.right_tail))

    @property
    def last_index(self) -> int:
        return self.first_index + self.values.size - 1

    def __len__(self):
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, Window):
            return NotImplemented
        return (
            self.first_index == other.first_index
            and self.left_tail == other.left_tail
            and self.right_tail == other.right_tail
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def value_at(self, n: int) -> float:
        if n < self.first_index:
            return self.left_tail
        if n > self.last_index:
            return self.right_tail
        return float(self.values[n - self.first_index])

    def extended(self, lo: int, hi: int) -> np.ndarray:
        """Values on the integer range ``[lo, hi]``, tails filled in."""
        if hi < lo:
            return np.empty(0)
        out = np.empty(hi - lo + 1)
        idx = np.arange(lo, hi + 1)
        out[idx < self.first_index] = self.left_tail
        out[idx > self.last_index] = self.right_tail
        inside = (idx >= self.first_index) & (idx <= self.last_index)
        out[inside] = self.values[idx[inside] - self.first_index]
        return out

    def indices(self) -> np.ndarray:
        return np.arange(self.first_index, self.last_index + 1)

    def shifted(self, offset: float) -> Window:
        """Add ``offset`` to every value and both tails."""
        return Window(self.first_index, self.values + offset, self.left_tail + offset, self.right_tail + offset)

    def reflected(self) -> Window:
        """Index reversal ``n -> -n``."""
        return Window(-self.last_index, self.values[::-1], self.right_tail, self.left_tail)

    def negated(self) -> Window:
        return Window(self.first_index, -self.values, -self.left_tail, -self.right_tail)

    def with_values(self, values) -> Window:
        return Window(self.first_index, values, self.left_tail, self.right_tail)


@dataclass(frozen=True)
class ResidualProfile:
    first_index: int
    values: np.ndarray
    max_abs: float
    interior_max_abs: float


@dataclass(frozen=True)
class TailReport:
    in_theta: bool
    left_point: float
    right_point: float
    left_distance: float
    right_distance: float
    infinite_action: bool


def step(prev: float, curr: float, params: Params) -> float:
    """Next iterate ``2 curr - prev + A sin(curr)``."""
    return 2.0 * curr - prev + params.amplitude * math.sin(curr)


def step_back(curr: float, nxt: float, params: Params) -> float:
    """Previous iterate; exact inverse of :func:`step`."""
    return 2.0 * curr - nxt + params.amplitude * math.sin(curr)


def phase_step(state: PhaseState, params: Params) -> PhaseState:
    """One step of the map on ``(y, Δy)``."""
    y = state.position + state.velocity
    return PhaseState(y, state.velocity + params.amplitude * math.sin(y))


def iterate(prev: float, curr: float, params: Params, steps: int) -> np.ndarray:
    """``steps`` forward iterates appended to ``[prev, curr]``."""
    out = np.empty(steps + 2)
    out[0], out[1] = prev, curr
    for k in range(steps):
        out[k + 2] = step(out[k], out[k + 1], params)
    return out


def residual(window: Window, params: Params) -> ResidualProfile:
    """Residual ``Δ²y_{n-1} - A sin y_n`` on ``[n0 - 1, n1 + 1]``.

    The two edge entries measure how well the tails fit the orbit; the
    interior entries are the negated gradient of the action.
    """
    ext = window.extended(window.first_index - 2, window.last_index + 2)
    r = _kernels.residual(ext, params.amplitude)
    r = np.asarray(r)
    return ResidualProfile(
        first_index=window.first_index - 1,
        values=r,
        max_abs=float(np.max(np.abs(r))),
        interior_max_abs=float(np.max(np.abs(r[1:-1]))),
    )


def nearest_equilibrium(y: float) -> tuple[float, float]:
    """Nearest point of Θ and the distance to it.

    At odd multiples of π the lower neighbour wins.
    """
    k = math.floor(y / TWO_PI)
    lo = TWO_PI * k
    hi = TWO_PI * (k + 1)
    dlo = abs(y - lo)
    dhi = abs(hi - y)
    if dhi < dlo:
        return hi, dhi
    return lo, dlo


def jacobian(state: PhaseState, params: Params) -> np.ndarray:
    """Analytic Jacobian of :func:`phase_step` at ``state``."""
    c = params.amplitude * math.cos(state.position + state.velocity)
    return np.array([[1.0, 1.0], [c, 1.0 + c]])


def jacobian_det(state: PhaseState, params: Params) -> float:
    """Determinant of the analytic Jacobian of :func:`phase_step`.

    With ``c = A cos(y + v)`` the determinant is ``(1 + c) - c``, which is 1
    for every state and amplitude; the map preserves area.
    """
    return 1.0


def jacobian_det_fd(state: PhaseState, params: Params, h: float = 1e-6) -> float:
    """Central finite-difference estimate of the Jacobian determinant."""

    def f(y, v):
        s = phase_step(PhaseState(y, v), params)
        return np.array([s.position, s.velocity])

    y, v = state.position, state.velocity
    col_y = (f(y + h, v) - f(y - h, v)) / (2 * h)
    col_v = (f(y, v + h) - f(y, v - h)) / (2 * h)
    return float(col_y[0] * col_v[1] - col_v[0] * col_y[1])


def tail_classify(window: Window, tol: float = TAIL_TOL) -> TailReport:
    """Check that both tails lie within ``tol`` of Θ.

    A tail farther than ``tol`` from Θ makes the action diverge: every one of
    the infinitely many tail sites contributes a fixed positive potential.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    lp, ld = nearest_equilibrium(window.left_tail)
    rp, rd = nearest_equilibrium(window.right_tail)
    ok = ld <= tol and rd <= tol
    return TailReport(ok, lp, rp, ld, rd, infinite_action=not ok)


def constant_window(value: float, first_index: int = 0, length: int = 1) -> Window:
    return Window(first_index, np.full(length, float(value)), value, value)
