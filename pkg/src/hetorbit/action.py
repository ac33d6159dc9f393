"""Action functional, Hilbert-space geometry and explicit lower bounds.

The action of a sequence is ``J(y) = Σ_n [½ (Δy_n)² + A (1 - cos y_n)]``.
For a :class:`~hetorbit.core.Window` whose tails lie in Θ only the terms with
``n`` in ``[n0 - 1, n1]`` can be nonzero, so the sum is finite and exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .core import GAMMA, TAIL_TOL, TWO_PI, Params, TailNotEquilibrium, Window, residual, tail_classify


class InvalidRange(ValueError):
    pass


class OutOfRange(ValueError):
    pass


class HypothesisViolated(ValueError):
    """A site inside one of the intervals lies within ε of Θ."""

    def __init__(self, index: int, value: float, epsilon: float):
        self.index = index
        self.value = value
        super().__init__(f"y_{index} = {value!r} lies inside the {epsilon}-neighbourhood of Θ")


@dataclass(frozen=True)
class BoundReport:
    bound_value: float
    action_value: float
    slack: float
    displacement: float


def _potential(y, amplitude):
    # 1 - cos y written as 2 sin²(y/2) after reduction to [-π, π]: accurate near Θ
    y = np.asarray(y, dtype=float)
    y = y - TWO_PI * np.floor(y / TWO_PI + 0.5)
    return amplitude * (2.0 * np.sin(0.5 * y) ** 2)


def action(window: Window, params: Params) -> float:
    """Value of the action functional; raises if a tail is off Θ."""
    report = tail_classify(window, TAIL_TOL)
    if not report.in_theta:
        raise TailNotEquilibrium(
            f"tails ({window.left_tail!r}, {window.right_tail!r}) are not both in Θ; the action is infinite"
        )
    return float(_kernels.action_sum(window.values, window.left_tail, window.right_tail, params.amplitude))


def action_terms(window: Window, params: Params, lo: int, hi: int) -> np.ndarray:
    """Per-site terms ``½ (Δy_n)² + A (1 - cos y_n)`` for ``n`` in ``[lo, hi]``."""
    ext = window.extended(lo, hi + 1)
    d = np.diff(ext)
    return 0.5 * d * d + _potential(ext[:-1], params.amplitude)


def action_partial(s: int, t: int, window: Window, params: Params) -> float:
    """Truncated action ``Σ_{n=s}^{t}``; finite for any window.

    Sites far outside the window contribute a constant tail term each, which
    is counted in closed form rather than enumerated.
    """
    if s > t:
        raise InvalidRange(f"need s <= t, got s={s}, t={t}")
    lo = max(s, window.first_index - 1)
    hi = min(t, window.last_index)
    total = []
    if lo <= hi:
        total.extend(action_terms(window, params, lo, hi).tolist())
    # sites n < n0 - 1 (left tail, zero difference)
    n_left = max(0, min(t, window.first_index - 2) - s + 1)
    if n_left:
        total.append(n_left * float(_potential(window.left_tail, params.amplitude)))
    # sites n > n1 (right tail)
    n_right = max(0, t - max(s, window.last_index + 1) + 1)
    if n_right:
        total.append(n_right * float(_potential(window.right_tail, params.amplitude)))
    return math.fsum(total)


def gradient(window: Window, params: Params) -> np.ndarray:
    """Partial derivatives ``∂J/∂y_n`` over ``[n0, n1]`` with tails held fixed.

    Equals ``-Δ²y_{n-1} + A sin y_n``, the negated residual.
    """
    return -residual(window, params).values[1:-1]


def _common_range(*windows: Window) -> tuple[int, int]:
    lo = min(min(w.first_index for w in windows), 0) - 1
    hi = max(max(w.last_index for w in windows), 0) + 1
    return lo, hi


def h_inner(a: Window, b: Window) -> float:
    """``<a, b> = Σ Δa_k Δb_k + a_0 b_0``."""
    lo, hi = _common_range(a, b)
    ea = a.extended(lo, hi)
    eb = b.extended(lo, hi)
    return math.fsum((np.diff(ea) * np.diff(eb)).tolist()) + a.value_at(0) * b.value_at(0)


def h_norm(window: Window) -> float:
    lo, hi = _common_range(window)
    e = window.extended(lo, hi)
    d = np.diff(e)
    y0 = window.value_at(0)
    return math.sqrt(math.fsum((d * d).tolist()) + y0 * y0)


def alpha(epsilon: float) -> float:
    """``min (1 - cos t)`` over ``t`` at distance at least ε from Θ, i.e. ``1 - cos ε``."""
    if not (0.0 < epsilon <= math.pi):
        raise OutOfRange(f"epsilon must lie in (0, pi], got {epsilon!r}")
    return 2.0 * math.sin(0.5 * epsilon) ** 2


def distance_to_theta(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    return np.abs(y - 2.0 * math.pi * np.round(y / (2.0 * math.pi)))


def _validate_intervals(intervals: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    out = [(int(n), int(m)) for n, m in intervals]
    prev_end = None
    for n, m in out:
        if not n < m:
            raise ValueError(f"interval ({n}, {m}) must have n < m")
        if prev_end is not None and n <= prev_end:
            raise ValueError("intervals must be disjoint and increasing")
        prev_end = m
    return out


def lemma2_bound(window: Window, intervals, epsilon: float, params: Params) -> BoundReport:
    """Lower bound ``√(2 A α_ε) Σ_k |y_{m_k} - y_{n_k}|`` for the action.

    Valid whenever every site of every closed interval ``[n_k, m_k]`` stays at
    distance at least ε from Θ; otherwise :class:`HypothesisViolated` names the
    first offending site.
    """
    ivs = _validate_intervals(intervals)
    a_eps = alpha(epsilon)
    for n, m in ivs:
        seg = window.extended(n, m)
        bad = np.nonzero(distance_to_theta(seg) < epsilon)[0]
        if bad.size:
            i = n + int(bad[0])
            raise HypothesisViolated(i, window.value_at(i), epsilon)
    disp = math.fsum(abs(window.value_at(m) - window.value_at(n)) for n, m in ivs)
    bound = math.sqrt(2.0 * params.amplitude * a_eps) * disp
    value = action(window, params)
    return BoundReport(bound_value=bound, action_value=value, slack=value - bound, displacement=disp)


@dataclass(frozen=True)
class BoundChain:
    """Intermediate quantities of the lower-bound argument, per interval.

    ``partial`` is the action restricted to the difference terms
    ``n_k <= i <= m_k - 1``; ``balanced`` is ``l_k² / (2 r_k) + A α_ε r_k``
    with ``r_k = m_k - n_k`` the number of those terms; ``bound`` is
    ``√(2 A α_ε) l_k``. Each is at most the previous one.
    """

    action_value: float
    partial: np.ndarray
    balanced: np.ndarray
    bound: np.ndarray
    cauchy_schwarz_lhs: np.ndarray
    cauchy_schwarz_rhs: np.ndarray


def lemma2_chain(window: Window, intervals, epsilon: float, params: Params) -> BoundChain:
    ivs = _validate_intervals(intervals)
    a_eps = alpha(epsilon)
    amp = params.amplitude
    partial, balanced, bound, cs_l, cs_r = [], [], [], [], []
    for n, m in ivs:
        seg = window.extended(n, m)
        d = np.diff(seg)
        r = m - n
        disp = abs(seg[-1] - seg[0])
        partial.append(math.fsum((0.5 * d * d + _potential(seg[:-1], amp)).tolist()))
        balanced.append(disp * disp / (2.0 * r) + amp * a_eps * r)
        bound.append(math.sqrt(2.0 * amp * a_eps) * disp)
        cs_l.append(float(np.sum(np.abs(d))))
        cs_r.append(math.sqrt(r) * math.sqrt(float(np.sum(d * d))))
    return BoundChain(
        action_value=action(window, params),
        partial=np.array(partial),
        balanced=np.array(balanced),
        bound=np.array(bound),
        cauchy_schwarz_lhs=np.array(cs_l),
        cauchy_schwarz_rhs=np.array(cs_r),
    )


def _delta_margin(x: float, epsilon: float, amplitude: float) -> float:
    # √(2A α_x) ε/6 - ½(2x)² - x², with √(2 α_x) = 2 sin(x/2)
    return epsilon * math.sqrt(amplitude) * math.sin(0.5 * x) / 3.0 - 3.0 * x * x


def find_delta(epsilon: float, params: Params, tol: float = 1e-12) -> float:
    """Largest δ (to within ``tol``) with ``6δ < ε`` and ``3δ² < √(2 A α_δ) ε / 6``.

    The margin function vanishes at 0, is positive just to the right of it and
    is concave, so the admissible set is an interval ``(0, δ*)`` and bisection
    on the margin locates ``δ*``. The returned value is strictly admissible.
    """
    if not (0.0 < epsilon < GAMMA):
        raise OutOfRange(f"epsilon must lie in (0, 2π/3), got {epsilon!r}")
    amp = params.amplitude
    cap = epsilon / 6.0

    def ok(x):
        return 6.0 * x < epsilon and _delta_margin(x, epsilon, amp) > 0.0

    lo = cap
    while not ok(lo):
        lo *= 0.5
        if lo < 1e-300:
            raise ArithmeticError("no admissible delta found")
    # the previous (doubled) trial was inadmissible
    hi = min(2.0 * lo, cap)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo
