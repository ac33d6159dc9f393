"""Pure-Python kernels; reference twin of ``_ckernels.pyx``.

Every function here has the same signature and semantics as its compiled
counterpart. ``orbit`` performs the same floating-point operations in the same
order as the compiled loop, so both backends emit bit-identical traces.
"""
import math

import numpy as np

TWO_PI = 2.0 * math.pi


def orbit(x0, v0, coef, steps, limit):
    """Iterate ``x' = x + v``, ``v' = v + coef*sin(x')`` from ``(x0, v0)``.

    Returns ``(xs, vs, count)`` where the first ``count`` entries are valid.
    Iteration stops early once ``|x|`` exceeds ``limit``; the offending point
    is not stored.
    """
    xs = np.empty(steps + 1)
    vs = np.empty(steps + 1)
    x = float(x0)
    v = float(v0)
    xs[0] = x
    vs[0] = v
    count = 1
    sin = math.sin
    for _ in range(steps):
        x = x + v
        v = v + coef * sin(x)
        if not abs(x) <= limit:
            break
        xs[count] = x
        vs[count] = v
        count += 1
    return xs, vs, count


def residual(ext, amplitude):
    """Second-difference residual ``(e[i+1] - 2 e[i]) + e[i-1] - A sin e[i]`` on ``ext[1:-1]``."""
    ext = np.asarray(ext, dtype=float)
    return (ext[2:] - 2.0 * ext[1:-1]) + ext[:-2] - amplitude * np.sin(ext[1:-1])


def action_sum(values, left, right, amplitude):
    """Sum of ``0.5*d**2 + A*2*sin(y/2)**2`` over the finite support of a window."""
    values = np.asarray(values, dtype=float)
    ext = np.concatenate(([left], values, [right]))
    d = np.diff(ext)
    kinetic = 0.5 * d * d
    # reduce to [-π, π] first so sites on Θ contribute exactly zero
    red = values - TWO_PI * np.floor(values / TWO_PI + 0.5)
    potential = amplitude * (2.0 * np.sin(0.5 * red) ** 2)
    terms = kinetic.copy()
    terms[1:] += potential
    return math.fsum(terms.tolist())
