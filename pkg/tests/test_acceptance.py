"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line that is printed in the terminal
summary (and directly when this file is run as a script).
"""
import math
import sys
import time

import numpy as np
import pytest

import conftest
import frozen
from hetorbit.core import TWO_PI, Params, PhaseState, jacobian_det_fd, residual, step, step_back
from hetorbit.minimizer import adjacency_check, c_epsilon_sweep, heteroclinic
from hetorbit.portrait import OrbitClass, portrait_grid
from hetorbit.verify import suite_gradient, suite_lemma2, suite_symmetry

SCHEDULE = [0.6, 0.3, 0.15]


def report(number, ok, detail):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.mark.parametrize("amp", [0.1, 1.0])
def test_c01_stationarity(amp):
    t0 = time.perf_counter()
    h = heteroclinic(Params(amp), TWO_PI, SCHEDULE)
    dt = time.perf_counter() - t0
    r = h.result
    ok = h.certificate and r.max_residual <= 1e-8 and not r.constraint_active and dt <= 10.0
    report(1, ok, f"A={amp}: certificate={h.certificate} residual={r.max_residual:.2e} active={r.constraint_active} {dt:.2f}s")


def test_c02_continuum_limit():
    amp = 1e-3
    t0 = time.perf_counter()
    h = heteroclinic(Params(amp), TWO_PI, SCHEDULE)
    dt = time.perf_counter() - t0
    ratio = h.result.action_value / math.sqrt(amp)
    ok = h.certificate and 7.9 <= ratio <= 8.1 and dt <= 60.0
    report(2, ok, f"A=1e-3, N={len(h.result.window) // 2}: J/sqrt(A)={ratio:.6f} (continuum 8) {dt:.2f}s")


def test_c03_excursion_bound():
    res = suite_lemma2(cases=1000, seed=0)
    report(3, res["min_slack"] >= -1e-12, f"{res['cases']} cases, min slack {res['min_slack']:.3e}")


def test_c04_symmetry():
    res = suite_symmetry(cases=200, seed=0, rel_tol=1e-12)
    report(4, res["passed"], f"{res['cases']} windows, max relative change {res['max_rel_error']:.2e}")


def test_c05_epsilon_monotonicity():
    eps = [0.6, 0.45, 0.3, 0.15]
    vals = [c_epsilon_sweep(Params(1.0), e, [TWO_PI]).values[TWO_PI] for e in eps]
    ok = all(b <= a + 1e-6 for a, b in zip(vals, vals[1:]))
    report(5, ok, "c values " + ", ".join(f"{v:.10f}" for v in vals))


def test_c06_adjacency():
    big = adjacency_check(Params(1.0), 0.3)
    small = adjacency_check(Params(0.01), 0.3)
    ok_big = big.c_two >= 1.5 * big.c_one
    ok_small = 1.9 <= small.ratio <= 2.1
    # independent check of the small-amplitude ratio
    oracle_ratio = frozen.C_4PI_EPS03[(0.01, 200)] / frozen.C_2PI[(0.01, 200)]
    report(
        6,
        ok_big and ok_small,
        f"A=1 ratio {big.ratio:.4f} (need >= 1.5); A=0.01 ratio {small.ratio:.4f} (need [1.9, 2.1], oracle {oracle_ratio:.4f})",
    )


def test_c07_map_structure():
    rng = np.random.default_rng(0)
    worst_rev = 0.0
    worst_det = 0.0
    for _ in range(100):
        p = Params(float(rng.uniform(1e-3, 1.0)))
        y0, dy0 = rng.uniform(-1.0, 1.0, size=2)
        a, b = y0, y0 + dy0
        for _ in range(200):
            a, b = b, step(a, b, p)
        for _ in range(200):
            a, b = step_back(a, b, p), a
        worst_rev = max(worst_rev, abs(a - y0), abs(b - (y0 + dy0)))
        s = PhaseState(*rng.uniform(-3.0, 3.0, size=2))
        worst_det = max(worst_det, abs(jacobian_det_fd(s, p) - 1.0))
    ok = worst_rev <= 1e-6 and worst_det <= 1e-5
    report(7, ok, f"max forward-backward error {worst_rev:.3e} (need 1e-6); max |det-1| {worst_det:.2e}")


def test_c08_gradient():
    res = suite_gradient(cases=100, seed=0, h=1e-6, tol=1e-6)
    report(8, res["passed"], f"{res['cases']} windows, max |fd - grad| {res['max_abs_error']:.2e}")


def test_c09_portraits():
    small = portrait_grid(Params(0.1))
    bounded = sum(1 for t in small if t.classification is OrbitClass.LIBRATION and np.max(np.abs(t.x)) < math.pi)
    large = portrait_grid(Params(10.0))
    disordered = sum(1 for t in large if t.classification is OrbitClass.DISORDERED)
    expected = frozen.PORTRAIT_COUNTS[0.1]["bounded_librations"]
    ok = bounded >= 9 and disordered >= 1 and bounded == expected
    report(9, ok, f"A=0.1 bounded librations {bounded} (need >= 9); A=10 disordered {disordered} (need >= 1)")


def test_c10_multiplicity():
    p = Params(1.0)
    h = heteroclinic(p, TWO_PI, SCHEDULE)
    w = h.result.window
    copies = {
        "reflected": w.reflected(),
        "shifted": w.shifted(TWO_PI),
        "reflected+shifted": w.reflected().shifted(-TWO_PI),
    }
    res = {k: residual(c, p).interior_max_abs for k, c in copies.items()}
    distinct = not np.array_equal(w.reflected().values, w.values)
    ok = h.certificate and all(v <= 1e-8 for v in res.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, v in res.items())
    report(10, ok, f"{detail}; reflected copy distinct from original: {distinct}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
