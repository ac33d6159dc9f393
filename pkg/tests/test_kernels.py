import importlib
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from hetorbit import _kernels, _pykernels

try:
    from hetorbit import _ckernels
except ImportError:  # pragma: no cover - extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def test_backend_name():
    assert _kernels.BACKEND in ("cython", "python")


def test_forced_python_backend():
    env = dict(os.environ, HETORBIT_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import hetorbit; print(hetorbit.BACKEND)"], env=env, capture_output=True, text=True
    )
    assert out.stdout.strip() == "python"


@needs_ext
@pytest.mark.parametrize("x0, v0, coef", [(1.0, 0.0, -0.1), (0.3, 2.0, -1.0), (1.0, 0.0, -10.0), (0.0, 2e5, -10.0)])
def test_orbit_bit_identical(x0, v0, coef):
    a = _pykernels.orbit(x0, v0, coef, 3000, 1e6)
    b = _ckernels.orbit(x0, v0, coef, 3000, 1e6)
    assert a[2] == b[2]
    np.testing.assert_array_equal(a[0][: a[2]], b[0][: b[2]])
    np.testing.assert_array_equal(a[1][: a[2]], b[1][: b[2]])


@needs_ext
def test_residual_and_action_agree():
    rng = np.random.default_rng(0)
    for _ in range(50):
        ext = rng.uniform(-10, 10, rng.integers(3, 40))
        amp = float(rng.uniform(0.01, 10))
        np.testing.assert_allclose(_pykernels.residual(ext, amp), _ckernels.residual(ext, amp), rtol=0, atol=1e-13)
        vals = ext[1:-1]
        a = _pykernels.action_sum(vals, 0.0, 2 * math.pi, amp)
        b = _ckernels.action_sum(vals, 0.0, 2 * math.pi, amp)
        assert a == pytest.approx(b, rel=1e-14)


def test_potential_vanishes_on_theta():
    vals = np.array([0.0, 2 * math.pi, -4 * math.pi])
    assert _pykernels.action_sum(vals, 0.0, 0.0, 1.0) == pytest.approx(28 * math.pi**2, rel=1e-15)
    if _ckernels is not None:
        assert _ckernels.action_sum(vals, 0.0, 0.0, 1.0) == _pykernels.action_sum(vals, 0.0, 0.0, 1.0)


def test_orbit_stops_on_limit():
    xs, vs, count = _pykernels.orbit(0.0, 10.0, 0.0, 100, 35.0)
    assert count == 4 and xs[count - 1] == 30.0
