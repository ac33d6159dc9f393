"""Independent reference computations used to pin expected values.

Nothing here imports the package: the action is re-derived from its
definition and minimized with L-BFGS-B, and δ comes from a bracketing root
finder.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq, minimize

TWO_PI = 2.0 * math.pi


def action_and_grad(y, left, right, amp):
    ext = np.concatenate(([left], y, [right]))
    d = np.diff(ext)
    j = 0.5 * np.dot(d, d) + amp * np.sum(1.0 - np.cos(y))
    g = d[:-1] - d[1:] + amp * np.sin(y)
    return j, g


def lbfgs_heteroclinic(amp, target, half_width, split=None, epsilon=None):
    """Minimize the window action from 0 to ``target``.

    With ``split`` and ``epsilon`` the sites before ``split`` are bounded above
    by ``target/2 - epsilon`` and the rest below by ``target/2 + epsilon``
    (the ball around the middle equilibrium of a 0 to 4π connection).
    """
    n = np.arange(-half_width, half_width + 1, dtype=float)
    y0 = target / TWO_PI * 4.0 * np.arctan(np.exp(math.sqrt(amp) * (n - 0.5)))
    bounds = None
    if split is not None:
        mid = 0.5 * target
        bounds = [(None, mid - epsilon) if i < split else (mid + epsilon, None) for i in range(n.size)]
        y0 = np.clip(y0, [b[0] if b[0] is not None else -np.inf for b in bounds],
                     [b[1] if b[1] is not None else np.inf for b in bounds])
    res = minimize(
        action_and_grad, y0, args=(0.0, target, amp), jac=True, method="L-BFGS-B", bounds=bounds,
        options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 200000, "maxcor": 30},
    )
    return float(res.fun), res.x


def constrained_4pi(amp, epsilon, half_width):
    """c_ε(4π) by enumerating where monotone sites jump over the ball at 2π."""
    best = math.inf
    for split in range(half_width - 3, half_width + 5):
        val, _ = lbfgs_heteroclinic(amp, 2.0 * TWO_PI, half_width, split, epsilon)
        best = min(best, val)
    return best


def delta_oracle(epsilon, amp):
    f = lambda x: epsilon * math.sqrt(amp) * math.sin(0.5 * x) / 3.0 - 3.0 * x * x
    cap = epsilon / 6.0
    if f(cap) > 0:
        return cap
    return brentq(f, 1e-9 * cap, cap, xtol=1e-15, rtol=1e-15)


def continuum_action(amp):
    return 8.0 * math.sqrt(amp)


if __name__ == "__main__":
    print("A=1 N=40", repr(lbfgs_heteroclinic(1.0, TWO_PI, 40)[0]))
    print("A=0.1 N=64", repr(lbfgs_heteroclinic(0.1, TWO_PI, 64)[0]))
    print("A=0.01 N=200", repr(lbfgs_heteroclinic(0.01, TWO_PI, 200)[0]))
    print("A=1 4pi eps.3", repr(constrained_4pi(1.0, 0.3, 40)))
    print("A=0.01 4pi eps.3", repr(constrained_4pi(0.01, 0.3, 200)))
    print("delta(1,1)", repr(delta_oracle(1.0, 1.0)))
