"""Seeded property suites behind ``hetorbit verify``.

Each suite returns a plain dict with at least ``passed`` and ``cases`` so the
CLI can serialize it directly.
"""
from __future__ import annotations

import math

import numpy as np

from .action import action, gradient, h_inner, h_norm, lemma2_bound
from .core import TWO_PI, Params, PhaseState, Window, jacobian_det_fd, step, step_back
from .minimizer import adjacency_check, c_epsilon_sweep


def random_window(rng: np.random.Generator, max_len: int = 40, spread: float = 3.0 * math.pi) -> Window:
    """Random values with tails on Θ."""
    n = int(rng.integers(1, max_len + 1))
    first = int(rng.integers(-15, 16))
    values = rng.uniform(-spread, spread, size=n)
    left, right = TWO_PI * rng.integers(-2, 3, size=2)
    return Window(first, values, float(left), float(right))


def allowed_value(rng: np.random.Generator, epsilon: float) -> float:
    """A value at distance at least ε from Θ."""
    k = int(rng.integers(-2, 3))
    side = 1.0 if rng.random() < 0.5 else -1.0
    return TWO_PI * k + side * (epsilon + rng.random() * (math.pi - epsilon))


def random_lemma2_case(rng: np.random.Generator):
    amp = float(rng.uniform(0.05, 10.0))
    eps = float(rng.uniform(1e-6, math.pi / 2))
    w = random_window(rng, max_len=30)
    vals = w.values.copy()
    n = vals.size
    intervals = []
    pos = 0
    while pos < n - 1 and rng.random() < 0.8:
        a = int(rng.integers(pos, n - 1))
        b = int(rng.integers(a + 1, min(n, a + 12)))
        intervals.append((w.first_index + a, w.first_index + b))
        for i in range(a, b + 1):
            vals[i] = allowed_value(rng, eps)
        pos = b + 1
    return w.with_values(vals), intervals, eps, Params(amp)


def suite_lemma2(cases: int = 1000, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    worst = math.inf
    for _ in range(cases):
        w, ivs, eps, p = random_lemma2_case(rng)
        rep = lemma2_bound(w, ivs, eps, p)
        worst = min(worst, rep.slack)
    return {"passed": bool(worst >= -1e-12), "cases": cases, "min_slack": worst}


def suite_symmetry(cases: int = 200, seed: int = 0, rel_tol: float = 1e-12) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        w = random_window(rng)
        p = Params(float(rng.uniform(0.05, 10.0)))
        j = action(w, p)
        for other in (w.shifted(TWO_PI), w.shifted(-TWO_PI), w.reflected()):
            worst = max(worst, abs(action(other, p) - j) / max(j, 1e-300))
    return {"passed": bool(worst <= rel_tol), "cases": cases, "max_rel_error": worst}


def suite_gradient(cases: int = 100, seed: int = 0, h: float = 1e-6, tol: float = 1e-6) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        w = random_window(rng, max_len=20)
        p = Params(float(rng.uniform(0.05, 10.0)))
        g = gradient(w, p)
        for i in range(w.values.size):
            e = np.zeros(w.values.size)
            e[i] = h
            fd = (action(w.with_values(w.values + e), p) - action(w.with_values(w.values - e), p)) / (2 * h)
            worst = max(worst, abs(fd - g[i]))
    return {"passed": bool(worst <= tol), "cases": cases, "max_abs_error": worst}


def suite_norm(cases: int = 200, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        a, b = random_window(rng), random_window(rng)
        worst = max(worst, abs(h_norm(a) ** 2 - h_inner(a, a)) / max(h_inner(a, a), 1e-300))
        worst = max(worst, abs(h_inner(a, b) - h_inner(b, a)))
    return {"passed": bool(worst <= 1e-12), "cases": cases, "max_error": worst}


def suite_map(cases: int = 100, seed: int = 0, steps: int = 200) -> dict:
    rng = np.random.default_rng(seed)
    worst_rev = 0.0
    worst_det = 0.0
    for _ in range(cases):
        p = Params(float(rng.uniform(0.01, 1.0)))
        y0, dy0 = rng.uniform(-1.0, 1.0, size=2)
        prev, curr = y0, y0 + dy0
        a, b = prev, curr
        for _ in range(steps):
            a, b = b, step(a, b, p)
        for _ in range(steps):
            a, b = step_back(a, b, p), a
        worst_rev = max(worst_rev, abs(a - prev), abs(b - curr))
        s = PhaseState(*rng.uniform(-3.0, 3.0, size=2))
        worst_det = max(worst_det, abs(jacobian_det_fd(s, Params(float(rng.uniform(0.01, 10.0)))) - 1.0))
    return {
        "passed": bool(worst_rev <= 1e-6 and worst_det <= 1e-5),
        "cases": cases,
        "max_reversal_error": worst_rev,
        "max_det_error": worst_det,
    }


def suite_adjacency(amplitude: float = 1.0, epsilon: float = 0.3, seed: int = 0) -> dict:
    rep = adjacency_check(Params(amplitude), epsilon, seed=seed)
    return {
        "passed": bool(rep.passed),
        "cases": 1,
        "amplitude": amplitude,
        "epsilon": epsilon,
        "c_2pi": rep.c_one,
        "c_4pi": rep.c_two,
        "ratio": rep.ratio,
    }


def suite_monotonicity(amplitude: float = 1.0, epsilons=(0.6, 0.45, 0.3, 0.15), seed: int = 0, tol: float = 1e-6) -> dict:
    values = [c_epsilon_sweep(Params(amplitude), e, [TWO_PI], seed=seed).values[TWO_PI] for e in epsilons]
    ok = all(b <= a + tol for a, b in zip(values, values[1:]))
    return {"passed": bool(ok), "cases": len(values), "epsilons": list(epsilons), "c_values": values}


SUITES = {
    "lemma2": suite_lemma2,
    "symmetry": suite_symmetry,
    "gradient": suite_gradient,
    "norm": suite_norm,
    "map": suite_map,
    "adjacency": suite_adjacency,
    "monotonicity": suite_monotonicity,
}


def run(names, seed: int = 0, amplitude: float = 1.0) -> dict:
    report = {}
    for name in names:
        fn = SUITES[name]
        if name in ("adjacency", "monotonicity"):
            report[name] = fn(amplitude=amplitude, seed=seed)
        else:
            report[name] = fn(seed=seed)
    return report
