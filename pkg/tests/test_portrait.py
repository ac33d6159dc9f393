import io
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import frozen
from hetorbit.core import TWO_PI, Params, PhaseState
from hetorbit.portrait import (
    OrbitClass,
    classify,
    count_classes,
    default_initial_conditions,
    default_ranges,
    iterate_orbit,
    portrait_grid,
    write_csv,
    write_svg,
)


@pytest.mark.parametrize("amp", [0.1, 1.0, 10.0])
def test_centre_is_fixed(amp):
    t = iterate_orbit(Params(amp), PhaseState(0.0, 0.0), 50)
    assert np.all(t.x == 0.0) and np.all(t.dx == 0.0)
    assert t.classification is OrbitClass.LIBRATION


def test_saddle_stays_put():
    t = iterate_orbit(Params(1.0), PhaseState(math.pi, 0.0), 20)
    assert np.allclose(t.x, math.pi, atol=1e-12)


def test_small_amplitude_libration_is_bounded():
    t = iterate_orbit(Params(0.1), PhaseState(1.0, 0.0), 10_000)
    assert t.classification is OrbitClass.LIBRATION
    assert len(t) == 10_001 and np.max(np.abs(t.x)) < math.pi


def test_large_amplitude_orbit_is_disordered():
    t = iterate_orbit(Params(10.0), PhaseState(1.0, 0.0), 10_000)
    assert t.classification is OrbitClass.DISORDERED


def test_overflow_truncates_and_flags():
    t = iterate_orbit(Params(10.0), PhaseState(0.0, 2e5), 100)
    assert t.overflow and len(t) < 101
    assert t.classification is OrbitClass.DISORDERED
    assert np.all(np.abs(t.x) <= 1e6)


@pytest.mark.parametrize("amp", [0.1, 1.0, 10.0])
def test_map_residual(amp):
    for t in portrait_grid(Params(amp), steps=2000):
        if len(t) > 1:
            assert np.max(np.abs(t.map_residual())) <= 1e-12 * max(1.0, np.max(np.abs(t.dx)))


@settings(max_examples=30)
@given(st.floats(-3, 3), st.floats(-1, 1), st.floats(0.05, 5.0))
def test_reflection_symmetry(x, v, amp):
    p = Params(amp)
    a = iterate_orbit(p, PhaseState(x, v), 300)
    b = iterate_orbit(p, PhaseState(-x, -v), 300)
    np.testing.assert_array_equal(a.x, -b.x)
    np.testing.assert_array_equal(a.dx, -b.dx)


def test_shift_symmetry():
    p = Params(0.5)
    a = iterate_orbit(p, PhaseState(0.7, 0.2), 200)
    b = iterate_orbit(p, PhaseState(0.7 + TWO_PI, 0.2), 200)
    np.testing.assert_allclose(b.x - TWO_PI, a.x, atol=1e-9)


def test_determinism():
    a = portrait_grid(Params(1.0), steps=500)
    b = portrait_grid(Params(1.0), steps=500)
    for s, t in zip(a, b):
        assert np.array_equal(s.x, t.x) and s.classification == t.classification


@pytest.mark.parametrize(
    "xs, expected",
    [
        (np.zeros(200), OrbitClass.LIBRATION),
        (0.5 * np.arange(200), OrbitClass.ROTATION),
        (-0.5 * np.arange(200), OrbitClass.ROTATION),
        (np.concatenate([np.zeros(150), 0.5 * np.arange(50)]), OrbitClass.DISORDERED),
        (3.0 * np.sin(np.arange(200)) + np.where(np.arange(200) % 2, 0, 1.0), OrbitClass.DISORDERED),
    ],
)
def test_classify_examples(xs, expected):
    assert classify(xs) is expected


def test_classify_energy_check():
    # monotone but with wildly varying speed
    x = np.cumsum(np.where(np.arange(300) % 2, 0.01, 5.0))
    assert classify(x) is OrbitClass.ROTATION
    assert classify(x, amplitude=0.1) is OrbitClass.DISORDERED


def test_classify_needs_points():
    with pytest.raises(ValueError):
        classify([0.0])


def test_default_grid_counts():
    for amp, expected in frozen.PORTRAIT_COUNTS.items():
        traces = portrait_grid(Params(amp))
        counts = count_classes(traces)
        for k in ("libration", "rotation", "disordered"):
            assert counts[k] == expected[k], (amp, counts)


def test_small_amplitude_has_nine_bounded_librations():
    traces = portrait_grid(Params(0.1))
    bounded = [t for t in traces if t.classification is OrbitClass.LIBRATION and np.max(np.abs(t.x)) < math.pi]
    assert len(bounded) >= 9


def test_unit_amplitude_has_non_libration():
    counts = count_classes(portrait_grid(Params(1.0)))
    assert counts["libration"] < 20


def test_steps_one_gives_length_two():
    traces = portrait_grid(Params(0.1), steps=1)
    assert {len(t) for t in traces} == {2}


def test_grid_errors():
    with pytest.raises(ValueError):
        portrait_grid(Params(1.0), [])
    with pytest.raises(ValueError):
        iterate_orbit(Params(1.0), PhaseState(0.0, 0.0), 0)


def test_default_initial_conditions():
    ics = default_initial_conditions(Params(4.0))
    assert len(ics) == 20
    assert ics[-2].velocity == pytest.approx(2 * 2.0 * 1.05)
    assert default_ranges(Params(4.0)) == ((-2 * TWO_PI, 2 * TWO_PI), (-12.0, 12.0))


def test_csv_and_svg_output():
    traces = portrait_grid(Params(0.1), [PhaseState(1.0, 0.0), PhaseState(0.0, 0.7)], steps=10)
    buf = io.StringIO()
    write_csv(traces, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "trace_id,n,x,dx" and len(lines) == 1 + 22
    tid, n, x, dx = lines[1].split(",")
    assert (tid, n, float(x), float(dx)) == ("0", "0", 1.0, 0.0)
    buf = io.StringIO()
    write_svg(traces, buf, x_range=(-4, 4))
    root = ET.fromstring(buf.getvalue())
    polys = [e for e in root if e.tag.endswith("polyline")]
    assert len(polys) == 2 and polys[0].get("class") == "libration"
    with pytest.raises(ValueError):
        write_svg([], io.StringIO())


def test_points_property():
    t = iterate_orbit(Params(1.0), PhaseState(0.5, 0.0), 3)
    assert t.points[0] == PhaseState(0.5, 0.0) and len(t.points) == 4
    assert np.max(np.abs(t.position_residual())) < 1e-15
