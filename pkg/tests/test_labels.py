import math

import numpy as np
import pytest

from coupledosc import ode
from coupledosc.labels import (alpha_of_t, beta_of_t, effective_drive, label_ode_rhs, labels,
                               propagate_labels, rotating_labels, scaled_labels, steady_alpha)
from coupledosc.params import CRITICAL_BAND, make_params, scaled_params

# label ODE integrated by the adaptive RK solver (rtol 1e-12), Gamma = Omega = 1, eps/g = 1, t' = 1
ALPHA_REF = 0.35643751405927754 - 0.555118537752435j
BETA_REF = -0.7352832719305684 - 0.4721199595266611j


def test_steady_alpha_examples():
    assert steady_alpha(1.0, 1.0, 3.0, 0.0) == 1
    assert steady_alpha(0.0, 1.0, 3.0, 2.0) == 0
    assert steady_alpha(2.0, 1.0, math.pi, 1.0) == pytest.approx(-2, abs=1e-15)
    with pytest.raises(ValueError):
        steady_alpha(1.0, 0.0, 1.0, 0.0)


@pytest.mark.parametrize("Gamma", [0.5, 1.0, 2.0, 3.0, 20.0])
def test_initial_labels(Gamma):
    p = make_params(1.3, Gamma * 0.7, 0.7, 0.4, 1.0)
    assert alpha_of_t(p, 0.0) == pytest.approx(p.epsilon / p.gamma, abs=1e-15)
    assert beta_of_t(p, 0.0) == 0


@pytest.mark.parametrize("Gamma", [0.5, 2.0, 3.0])
def test_long_time_labels(Gamma):
    p = make_params(2.0, Gamma * 1.5, 1.5, 0.9, 1.0)
    t = 200.0 / p.g
    assert abs(alpha_of_t(p, t)) < 1e-12
    b = beta_of_t(p, t)
    assert b == pytest.approx(-1j * p.epsilon / p.g * np.exp(-1j * p.omega * t), abs=1e-12)
    assert abs(b) ** 2 == pytest.approx(p.epsilon**2 / p.g**2)


def test_labels_match_integrated_reference():
    p = scaled_params(1.0, 1.0)
    x = labels(p, 1.0)
    assert x.alpha == pytest.approx(ALPHA_REF, abs=1e-10)
    assert x.beta == pytest.approx(BETA_REF, abs=1e-10)


def test_label_ode_rhs_examples():
    p = make_params(1.0, 1.0, 1.0, 0.0, 0.5)
    assert label_ode_rhs(0, 0, p, 0.3) == (0, 0)
    q = make_params(2.0, 0.5, 1e-300, 0.8, 0.5)
    t = 0.7
    a = q.epsilon / q.gamma * np.exp(-1j * q.omega * t)
    da, db = label_ode_rhs(a, 0, q, t)
    assert da == pytest.approx(-1j * q.omega * a, abs=1e-15)


@pytest.mark.parametrize("Gamma", [0.5, 2.0, 3.0])
@pytest.mark.parametrize("Omega", [1.0, 10.0])
def test_closed_form_solves_label_ode(Gamma, Omega):
    p = scaled_params(Gamma, Omega)
    h = 1e-6
    for t in np.linspace(0.01, 20, 60):
        fd = [(f(p, t + h) - f(p, t - h)) / (2 * h) for f in (alpha_of_t, beta_of_t)]
        rhs = label_ode_rhs(alpha_of_t(p, t), beta_of_t(p, t), p, t)
        assert np.linalg.norm(np.subtract(fd, rhs)) <= 1e-7 * np.linalg.norm(rhs)


def test_continuity_across_critical_band():
    ref = scaled_params(2.0, 1.0)
    for G in (2 - 10 * CRITICAL_BAND, 2 + 10 * CRITICAL_BAND):
        p = scaled_params(G, 1.0)
        assert abs(alpha_of_t(p, 1.0) - alpha_of_t(ref, 1.0)) <= 1e-6
        assert abs(beta_of_t(p, 1.0) - beta_of_t(ref, 1.0)) <= 1e-6


@pytest.mark.parametrize("Gamma", [0.3, 1.0, 2.0, 2.5, 40.0])
def test_effective_drive_identity(Gamma):
    p = make_params(3.0, Gamma * 2.0, 2.0, 1.1, 1.0)
    for t in np.linspace(0, 6, 13):
        f = effective_drive(p, t, hbar=1.0)
        x = labels(p, t)
        ref = p.g * (x.beta - 1j * x.alpha)
        assert abs(f - ref) <= 1e-12 * max(abs(ref), 1e-300)


def test_effective_drive_limits():
    p = make_params(1.0, 1.0, 1.0, 0.5, 1.0)
    assert effective_drive(p, 0.0, hbar=2.0) == pytest.approx(-1j * 2.0 * p.epsilon * p.g / p.gamma)
    t = 300.0
    assert effective_drive(p, t) == pytest.approx(-1j * p.epsilon * np.exp(-1j * p.omega * t), abs=1e-12)


def test_propagator_without_damping():
    p = make_params(1.5, 0.0, 1.0, 0.0, 1.0)
    for t in (0.0, 0.4, 2.0):
        x = propagate_labels(p, t, 1.0, 0.0)
        phase = np.exp(-1j * p.omega * t)
        assert x.alpha == pytest.approx(math.cos(t) * phase, abs=1e-13)
        assert x.beta == pytest.approx(-1j * math.sin(t) * phase, abs=1e-13)


def test_propagator_matches_closed_form_and_restarts():
    p = scaled_params(1.7, 2.0)
    a0 = p.epsilon / p.gamma
    for t in (0.5, 3.0):
        x = propagate_labels(p, t, a0, 0.0)
        assert x.alpha == pytest.approx(alpha_of_t(p, t), abs=1e-12)
        assert x.beta == pytest.approx(beta_of_t(p, t), abs=1e-12)
    mid = propagate_labels(p, 1.0, a0, 0.0)
    end = propagate_labels(p, 2.5, mid.alpha, mid.beta, t0=1.0)
    assert end.beta == pytest.approx(beta_of_t(p, 2.5), abs=1e-12)


def test_propagator_agrees_with_rk_integration():
    p = make_params(1.0, 0.0, 1.0, 0.3, 1.0)
    f = lambda t, y: np.array(label_ode_rhs(y[0], y[1], p, t))
    y = ode.integrate(f, np.array([0.2 + 0.1j, -0.4j]), [2.0], rtol=1e-11, atol=1e-13)[0]
    x = propagate_labels(p, 2.0, 0.2 + 0.1j, -0.4j)
    assert np.allclose([x.alpha, x.beta], y, atol=1e-9)


def test_scaled_labels():
    t = np.linspace(0, 8, 17)
    for G in (0.5, 2.0, 4.0):
        p = scaled_params(G, 3.0)
        a, b = scaled_labels(t, G, 3.0)
        assert np.allclose(a, alpha_of_t(p, t), atol=1e-13)
        assert np.allclose(b, beta_of_t(p, t), atol=1e-13)
    a, b = scaled_labels(t, 0.0, 0.0)
    assert np.allclose(a, np.cos(t)) and np.allclose(b, -1j * np.sin(t))


def test_rotating_labels_refuse_zero_damping():
    with pytest.raises(ValueError):
        rotating_labels(make_params(1.0, 0.0, 1.0, 1.0, 1.0), 1.0)
