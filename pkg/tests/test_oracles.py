import pytest

import frozen
import oracles


@pytest.mark.slow
@pytest.mark.parametrize("key", sorted(frozen.C_2PI))
def test_c_2pi_oracle_is_frozen(key):
    amp, n = key
    val, _ = oracles.lbfgs_heteroclinic(amp, oracles.TWO_PI, n)
    assert val == pytest.approx(frozen.C_2PI[key], rel=1e-10)


@pytest.mark.slow
@pytest.mark.parametrize("key", sorted(frozen.C_4PI_EPS03))
def test_c_4pi_oracle_is_frozen(key):
    amp, n = key
    assert oracles.constrained_4pi(amp, 0.3, n) == pytest.approx(frozen.C_4PI_EPS03[key], rel=1e-10)


def test_delta_oracle_is_frozen():
    assert oracles.delta_oracle(1.0, 1.0) == pytest.approx(frozen.DELTA_EPS1_A1, abs=1e-15)


def test_continuum_action_close_to_discrete_for_small_amplitude():
    assert frozen.C_2PI[(0.01, 200)] == pytest.approx(oracles.continuum_action(0.01), rel=1e-3)
