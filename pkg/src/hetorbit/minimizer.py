"""Constrained minimization of the action over Γ_ε(ξ).

Γ_ε(ξ) holds the sequences running from 0 (at -∞) to ξ (at +∞) that never
enter the open ε-ball of any other multiple of 2π. On a finite window the
tails are clamped to exactly 0 and ξ, and feasibility of the interior values
is maintained by projection: a value that lands inside a forbidden ball is
moved to the nearest point of its boundary.

The descent is a projected Newton method (Bertsekas-style two-metric
projection). Coordinates sitting on a ball boundary with the gradient pushing
inwards are frozen; the remaining ones take a Newton step with the exact
tridiagonal Hessian ``tridiag(-1, 2 + A cos y_n, -1)``, regularized when it is
not positive definite, followed by an Armijo search along the projection arc.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal, solveh_banded

from .action import action
from .core import GAMMA, TWO_PI, Params, Window, residual

logger = logging.getLogger(__name__)

BOUNDARY_TOL = 1e-10
MEMBERSHIP_SLACK = 1e-12
TAIL_MATCH_TOL = 1e-9


class InfeasibleInit(ValueError):
    pass


class SolveError(RuntimeError):
    """Base for numerical failures that still carry the best iterate."""

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class NotConverged(SolveError):
    pass


class CertificateDenied(SolveError):
    pass


@dataclass(frozen=True)
class ConstraintSpec:
    epsilon: float
    target: float

    def __post_init__(self):
        eps = float(self.epsilon)
        if not (0.0 < eps < GAMMA):
            raise ValueError(f"epsilon must lie in (0, 2π/3), got {self.epsilon!r}")
        k = round(float(self.target) / TWO_PI)
        if k == 0 or abs(self.target - TWO_PI * k) > 1e-9 * max(1.0, abs(self.target)):
            raise ValueError(f"target must be a nonzero multiple of 2π, got {self.target!r}")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "target", TWO_PI * k)

    @classmethod
    def from_multiple(cls, epsilon: float, k: int) -> ConstraintSpec:
        return cls(epsilon, TWO_PI * int(k))

    @property
    def multiple(self) -> int:
        return round(self.target / TWO_PI)


@dataclass(frozen=True)
class Violation:
    index: int
    value: float
    equilibrium: float


@dataclass(frozen=True)
class MembershipReport:
    ok: bool
    left_ok: bool
    right_ok: bool
    violations: tuple[Violation, ...]

    def __bool__(self):
        return self.ok


@dataclass
class MinimizeResult:
    window: Window
    action_value: float
    max_residual: float
    edge_residual: float
    constraint_active: bool
    active_indices: list[int]
    active_equilibria: list[float]
    iterations: int
    converged: bool
    grad_max: float
    history: list[float] = field(default_factory=list, repr=False)


def _forbidden(values: np.ndarray, spec: ConstraintSpec):
    """Nearest multiple of 2π per value and whether it is a forbidden centre."""
    theta = TWO_PI * np.round(values / TWO_PI)
    forbidden = (theta != 0.0) & (theta != spec.target)
    return theta, forbidden


def membership(window: Window, spec: ConstraintSpec) -> MembershipReport:
    """Check the three defining conditions of Γ_ε(ξ) on a window."""
    left_ok = abs(window.left_tail) <= TAIL_MATCH_TOL
    right_ok = abs(window.right_tail - spec.target) <= TAIL_MATCH_TOL
    vals = window.values
    theta, forbidden = _forbidden(vals, spec)
    bad = forbidden & (np.abs(vals - theta) < spec.epsilon - MEMBERSHIP_SLACK)
    violations = tuple(
        Violation(window.first_index + int(i), float(vals[i]), float(theta[i])) for i in np.nonzero(bad)[0]
    )
    return MembershipReport(left_ok and right_ok and not violations, left_ok, right_ok, violations)


def project(values: np.ndarray, spec: ConstraintSpec, previous: np.ndarray | None = None) -> np.ndarray:
    """Move every value inside a forbidden ball to the nearest boundary point.

    A value exactly at a ball centre goes to the side of its previous value,
    and towards 0 if that is also the centre.
    """
    v = np.array(values, dtype=float, copy=True)
    theta, forbidden = _forbidden(v, spec)
    offset = v - theta
    inside = forbidden & (np.abs(offset) < spec.epsilon)
    if not inside.any():
        return v
    side = np.sign(offset)
    tie = inside & (side == 0)
    if tie.any():
        if previous is not None:
            side[tie] = np.sign(np.asarray(previous, dtype=float)[tie] - theta[tie])
        still = tie & (side == 0)
        side[still] = -np.sign(theta[still])
    v[inside] = theta[inside] + side[inside] * spec.epsilon
    return v


def default_half_width(params: Params) -> int:
    """``ceil(20/√A)`` clamped to ``[16, 10⁵]``: twenty decay lengths per side."""
    return int(min(max(math.ceil(20.0 / math.sqrt(params.amplitude)), 16), 100_000))


def separatrix_profile(params: Params, spec: ConstraintSpec, half_width: int, center: float = 0.0) -> Window:
    """Continuum kink ``4 arctan(exp(√A (n - c)))`` rescaled to end at ξ, made feasible."""
    n = np.arange(-half_width, half_width + 1, dtype=float)
    y = 4.0 * np.arctan(np.exp(math.sqrt(params.amplitude) * (n - center))) * (spec.target / TWO_PI)
    return Window(-half_width, project(y, spec), 0.0, spec.target)


def jump_profile(spec: ConstraintSpec, half_width: int) -> Window:
    n = np.arange(-half_width, half_width + 1)
    return Window(-half_width, np.where(n < 0, 0.0, spec.target), 0.0, spec.target)


def perturbed_profile(params: Params, spec: ConstraintSpec, half_width: int, seed: int, scale: float = 0.2) -> Window:
    rng = np.random.default_rng(seed)
    base = separatrix_profile(params, spec, half_width)
    noisy = base.values + rng.normal(0.0, scale, size=base.values.size)
    return base.with_values(project(noisy, spec, base.values))


def _action_delta(old: np.ndarray, new: np.ndarray, left: float, right: float, amp: float) -> float:
    """``J(new) - J(old)`` summed from per-site differences, accurate near convergence."""
    eo = np.concatenate(([left], old, [right]))
    en = np.concatenate(([left], new, [right]))
    do = np.diff(eo)
    dn = np.diff(en)
    kin = 0.5 * (dn - do) * (dn + do)
    # cos(a) - cos(b) = -2 sin((a-b)/2) sin((a+b)/2)
    pot = 2.0 * amp * np.sin(0.5 * (new - old)) * np.sin(0.5 * (new + old))
    return math.fsum(kin.tolist()) + math.fsum(pot.tolist())


def _active_set(values, grad, spec):
    theta, forbidden = _forbidden(values, spec)
    offset = values - theta
    on_boundary = forbidden & (np.abs(np.abs(offset) - spec.epsilon) <= BOUNDARY_TOL)
    return on_boundary & (grad * offset > 0.0), theta


def _newton_direction(values, grad, active, amp):
    m = values.size
    diag = 2.0 + amp * np.cos(values)
    off = -np.ones(m - 1)
    off[active[:-1] | active[1:]] = 0.0
    diag = np.where(active, 1.0, diag)
    rhs = np.where(active, 0.0, grad)
    ab = np.zeros((2, m))
    ab[0, 1:] = off
    for mu in (1e-10, 1e-6, 1e-3, 1e-1, 1.0, 10.0, 100.0):
        ab[1] = diag + mu
        try:
            return solveh_banded(ab, rhs, check_finite=False)
        except LinAlgError:
            continue
    return rhs / (4.0 + amp)


def _escape_direction(values, active, amp, tol=1e-8):
    """Eigenvector of the lowest free Hessian mode when it is negative, else None.

    Newton steps can stall on a symmetric saddle of the action (the kink
    centred on a lattice site); this mode is the way off it.
    """
    diag = 2.0 + amp * np.cos(values)
    off = -np.ones(values.size - 1)
    off[active[:-1] | active[1:]] = 0.0
    diag = np.where(active, 1e6, diag)
    w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))
    if w[0] >= -tol:
        return None
    return v[:, 0]


def minimize(
    params: Params,
    spec: ConstraintSpec,
    window_half_width: int | None = None,
    init: Window | str = "default",
    tol_grad: float = 1e-10,
    max_iter: int = 100_000,
    step_cap: float = 1.0,
    raise_on_failure: bool = False,
) -> MinimizeResult:
    """Minimize the action over the window representation of Γ_ε(ξ).

    Parameters
    ----------
    window_half_width
        Window covers ``[-N, N]``; ``None`` picks :func:`default_half_width`.
        Ignored when ``init`` is a :class:`Window`.
    init
        ``"default"``, ``"jump"`` or a feasible window with tails 0 and ξ.
    tol_grad
        Stop once ``max |∂J/∂y_n|`` over coordinates not held by an active
        constraint is at most this.

    Returns
    -------
    MinimizeResult
        ``converged`` is False when ``max_iter`` ran out or no descent step
        could be found; with ``raise_on_failure`` a :class:`NotConverged`
        carrying the result is raised instead.
    """
    if tol_grad <= 0:
        raise ValueError("tol_grad must be positive")
    amp = params.amplitude
    if isinstance(init, Window):
        report = membership(init, spec)
        if not report:
            raise InfeasibleInit(f"initial window is not in Γ_ε(ξ): {report}")
        start = Window(init.first_index, init.values, 0.0, spec.target)
    else:
        N = default_half_width(params) if window_half_width is None else int(window_half_width)
        if N < 4:
            raise ValueError("window_half_width must be at least 4")
        if init == "default":
            start = separatrix_profile(params, spec, N)
        elif init == "jump":
            start = jump_profile(spec, N)
        else:
            raise ValueError(f"unknown init {init!r}")

    left, right = 0.0, spec.target
    y = start.values.copy()
    win = start
    J = action(win, params)
    history = [J]
    iterations = 0
    converged = False
    lipschitz = 4.0 + amp

    while True:
        grad = -residual(win, params).values[1:-1]
        active, _ = _active_set(y, grad, spec)
        free_g = np.abs(grad[~active])
        gmax = float(free_g.max()) if free_g.size else 0.0
        escape = None
        if gmax <= tol_grad:
            escape = _escape_direction(y, active, amp)
            if escape is None:
                converged = True
                break
        if iterations >= max_iter:
            break

        if escape is not None:
            directions = (escape * step_cap, -escape * step_cap)
        else:
            d = _newton_direction(y, grad, active, amp)
            big = float(np.max(np.abs(d)))
            if big > step_cap:
                d *= step_cap / big
            directions = (d, np.where(active, 0.0, grad) / lipschitz)

        accepted = False
        for direction in directions:
            t = 1.0
            while t >= 1e-12:
                trial = project(y - t * direction, spec, y)
                moved = y - trial
                dJ = _action_delta(y, trial, left, right, amp)
                predicted = float(grad @ moved)
                if escape is not None:
                    ok = dJ < -1e-14 * max(1.0, abs(J))
                else:
                    ok = dJ <= -1e-4 * predicted and dJ <= 0.0 and np.any(moved != 0.0)
                if ok:
                    accepted = True
                    break
                t *= 0.5
            if accepted:
                break
        if not accepted:
            logger.debug("no descent step at iteration %d (gmax=%.3e)", iterations, gmax)
            break

        y = trial
        win = Window(start.first_index, y, left, right)
        J = action(win, params)
        history.append(J)
        iterations += 1

    res = residual(win, params)
    active, theta = _active_set(y, -res.values[1:-1], spec)
    idx = np.nonzero(active)[0]
    result = MinimizeResult(
        window=win,
        action_value=J,
        max_residual=res.interior_max_abs,
        edge_residual=max(abs(float(res.values[0])), abs(float(res.values[-1]))),
        constraint_active=bool(idx.size),
        active_indices=[win.first_index + int(i) for i in idx],
        active_equilibria=sorted({float(theta[i]) for i in idx}),
        iterations=iterations,
        converged=converged,
        grad_max=gmax,
        history=history,
    )
    if not converged and raise_on_failure:
        raise NotConverged(f"minimize stopped after {iterations} iterations with gradient {gmax:.3e}", result)
    return result


@dataclass
class SweepResult:
    epsilon: float
    values: dict[float, float]
    converged: dict[float, bool]
    results: dict[float, MinimizeResult] = field(repr=False)
    minimizing_targets: list[float]
    c_global: float


def multistart(
    params: Params,
    spec: ConstraintSpec,
    window_half_width: int | None = None,
    tol_grad: float = 1e-10,
    max_iter: int = 100_000,
    starts: int = 3,
    seed: int = 0,
) -> MinimizeResult:
    """Best of several minimizations: separatrix profile, jump profile, then seeded perturbations."""
    N = default_half_width(params) if window_half_width is None else int(window_half_width)
    inits: list[Window | str] = ["default", "jump"]
    for k in range(max(0, starts - 2)):
        inits.append(perturbed_profile(params, spec, N, seed + k))
    best = None
    for init in inits[: max(1, starts)]:
        r = minimize(params, spec, N, init=init, tol_grad=tol_grad, max_iter=max_iter)
        if best is None or (r.converged, -r.action_value) > (best.converged, -best.action_value):
            best = r
    return best


def c_epsilon_sweep(
    params: Params,
    epsilon: float,
    targets,
    window_half_width: int | None = None,
    tol_grad: float = 1e-10,
    max_iter: int = 100_000,
    starts: int = 3,
    seed: int = 0,
    rel_tol: float = 1e-6,
) -> SweepResult:
    """Estimate ``c_ε(ξ)`` for each target and the set of minimizing targets."""
    targets = list(targets)
    if not targets:
        raise ValueError("targets must be nonempty")
    values, conv, results = {}, {}, {}
    for xi in targets:
        spec = ConstraintSpec(epsilon, xi)
        r = multistart(params, spec, window_half_width, tol_grad, max_iter, starts, seed)
        values[spec.target] = r.action_value
        conv[spec.target] = r.converged
        results[spec.target] = r
    c = min(values.values())
    upsilon = [xi for xi, v in values.items() if v <= c * (1.0 + rel_tol)]
    return SweepResult(epsilon, values, conv, results, upsilon, c)


@dataclass
class HeteroclinicResult:
    result: MinimizeResult
    stages: list[MinimizeResult]
    schedule: list[float]
    certificate: bool
    monotone: bool

    @property
    def stage_actions(self) -> list[float]:
        return [s.action_value for s in self.stages]


def heteroclinic(
    params: Params,
    target: float,
    epsilon_schedule,
    window_half_width: int | None = None,
    tol_grad: float = 1e-10,
    tol_residual: float = 1e-8,
    max_iter: int = 100_000,
    monotone_tol: float = 1e-9,
) -> HeteroclinicResult:
    """Minimize along a decreasing ε schedule and certify the last minimizer.

    Each stage warm-starts from the previous minimizer, which remains feasible
    because Γ_ε(ξ) grows as ε shrinks; stage actions are therefore
    non-increasing. The certificate is granted when the final minimizer
    converged, touches no forbidden ball and has interior residual at most
    ``tol_residual``.

    Raises
    ------
    CertificateDenied
        The final stage still presses against a forbidden ball, or its
        residual exceeds ``tol_residual``.
    NotConverged
        The final stage ran out of iterations.
    """
    schedule = [float(e) for e in epsilon_schedule]
    if len(schedule) < 2:
        raise ValueError("epsilon schedule needs at least two values")
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("epsilon schedule must be strictly decreasing")
    stages: list[MinimizeResult] = []
    init: Window | str = "default"
    for eps in schedule:
        spec = ConstraintSpec(eps, target)
        r = minimize(params, spec, window_half_width, init=init, tol_grad=tol_grad, max_iter=max_iter)
        stages.append(r)
        init = r.window
    return certify(stages, schedule, tol_residual, monotone_tol)


def certify(stages: list[MinimizeResult], schedule, tol_residual: float = 1e-8, monotone_tol: float = 1e-9):
    """Grant or deny the heteroclinic certificate for the last of ``stages``."""
    actions = [s.action_value for s in stages]
    monotone = all(b <= a + monotone_tol for a, b in zip(actions, actions[1:]))
    final = stages[-1]
    cert = final.converged and not final.constraint_active and final.max_residual <= tol_residual
    out = HeteroclinicResult(final, stages, list(schedule), cert, monotone)
    if final.constraint_active:
        raise CertificateDenied(
            f"constraint active at indices {final.active_indices} against {final.active_equilibria}", out
        )
    if not final.converged:
        raise NotConverged(f"final stage did not converge (gradient {final.grad_max:.3e})", out)
    if not cert:
        raise CertificateDenied(f"residual {final.max_residual:.3e} exceeds {tol_residual:.1e}", out)
    return out


@dataclass
class AdjacencyReport:
    epsilon: float
    c_one: float
    c_two: float
    ratio: float
    passed: bool
    converged: bool


def adjacency_check(
    params: Params,
    epsilon: float,
    window_half_width: int | None = None,
    tol_grad: float = 1e-10,
    max_iter: int = 100_000,
    margin: float = 0.5,
    seed: int = 0,
) -> AdjacencyReport:
    """Compare ``c_ε(2π)`` with ``c_ε(4π)``; pass when the gap is at least ``margin · c_ε(2π)``."""
    sweep = c_epsilon_sweep(params, epsilon, [TWO_PI, 2 * TWO_PI], window_half_width, tol_grad, max_iter, seed=seed)
    c1 = sweep.values[TWO_PI]
    c2 = sweep.values[2 * TWO_PI]
    conv = all(sweep.converged.values())
    if not conv:
        raise NotConverged("adjacency sweep did not converge", sweep)
    return AdjacencyReport(epsilon, c1, c2, c2 / c1, c2 - c1 >= margin * c1, conv)
