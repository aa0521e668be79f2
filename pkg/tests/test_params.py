import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from coupledosc.params import (CRITICAL_BAND, Regime, classify_regime, damped_oscillators, g_tilde,
                               make_params, rate, scaled_params)


def test_make_params_dimensionless():
    p = make_params(1, 1, 1, 1, math.pi / 2)
    assert p.Gamma == 1 and p.Omega == 1


def test_make_params_overdamped_cavity():
    omega, q, g = 1e10, 1e4, 1e4
    gamma = omega / q
    p = make_params(omega, gamma, g, gamma, math.pi / 2)
    assert p.Gamma == pytest.approx(100.0, rel=1e-15)
    assert p.regime is Regime.OVERDAMPED


@pytest.mark.parametrize("kwargs", [
    dict(g=0.0), dict(g=-1.0), dict(omega=0.0), dict(gamma=-0.1), dict(epsilon=-1.0),
    dict(theta=-0.1), dict(theta=2.0), dict(gamma=math.nan), dict(epsilon=math.inf),
])
def test_make_params_rejects(kwargs):
    base = dict(omega=1.0, gamma=1.0, g=1.0, epsilon=1.0, theta=0.5)
    base.update(kwargs)
    with pytest.raises(ValueError):
        make_params(**base)


def test_scaled_params():
    p = scaled_params(3.0, Omega=5.0, theta=0.3, amplitude=2.0)
    assert (p.g, p.gamma, p.epsilon, p.omega, p.theta) == (1.0, 3.0, 6.0, 5.0, 0.3)


@pytest.mark.parametrize("Gamma, regime", [
    (1.0, Regime.UNDERDAMPED), (2.0, Regime.CRITICALLY_DAMPED), (3.0, Regime.OVERDAMPED),
    (2.0 - CRITICAL_BAND / 2, Regime.CRITICALLY_DAMPED), (2.0 + 10 * CRITICAL_BAND, Regime.OVERDAMPED),
    (0.0, Regime.UNDERDAMPED),
])
def test_classify_regime(Gamma, regime):
    assert classify_regime(Gamma) is regime


def test_classify_regime_negative():
    with pytest.raises(ValueError):
        classify_regime(-1.0)


def test_g_tilde_examples():
    assert g_tilde(0.0) == 1
    assert g_tilde(2.0) == 0
    assert g_tilde(3.0) == pytest.approx(1j * math.sqrt(5) / 2, abs=1e-15)


@given(st.floats(0.0, 1e3))
def test_g_tilde_identity(Gamma):
    assert abs(g_tilde(Gamma) ** 2 + Gamma**2 / 4 - 1) <= 1e-14 * max(1.0, Gamma**2)


@given(st.floats(0.0, 50.0).filter(lambda G: abs(G - 2) > CRITICAL_BAND))
def test_regime_consistent_with_g_tilde(Gamma):
    gt = g_tilde(Gamma)
    if classify_regime(Gamma) is Regime.UNDERDAMPED:
        assert gt.real > 0 and gt.imag == 0
    else:
        assert gt.imag > 0 and gt.real == 0
    assert rate(Gamma) == pytest.approx(abs(gt))


@given(st.floats(0.0, 30.0), st.floats(0.0, 20.0))
def test_damped_oscillators_solve_oscillator_equation(Gamma, t):
    # (C, S) = e^{-Gamma t/2}(cos wt, sin wt / w) satisfy y'' + Gamma y' + y = 0
    h = 1e-4
    for k in (0, 1):
        f = lambda s: damped_oscillators(Gamma, s)[k]
        if t < 2 * h:
            continue
        d1 = (f(t + h) - f(t - h)) / (2 * h)
        d2 = (f(t + h) - 2 * f(t) + f(t - h)) / h**2
        scale = max(1.0, Gamma**2)
        assert abs(d2 + Gamma * d1 + f(t)) <= 1e-5 * scale


def test_damped_oscillators_initial_values_and_band():
    for Gamma in (0.5, 2.0, 7.0):
        c, s = damped_oscillators(Gamma, 0.0)
        assert (c, s) == (1.0, 0.0)
    t = np.linspace(0, 5, 11)
    at = np.array(damped_oscillators(2.0, t))
    for G in (2 - 1e-7, 2 + 1e-7):
        assert np.abs(np.array(damped_oscillators(G, t)) - at).max() < 1e-6


def test_damped_oscillators_no_overflow():
    c, s = damped_oscillators(1e4, 50.0)
    assert np.isfinite(c) and np.isfinite(s)
