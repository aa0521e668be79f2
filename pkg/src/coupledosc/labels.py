"""Displacement labels (alpha, beta) of the two-mode coherent displacement.

alpha displaces the damped, driven oscillator; beta displaces the undamped
one. Closed forms are evaluated in the frame rotating at omega and the
``exp(-i omega t)`` phase is applied on output, so that Omega >> 1 costs no
precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .params import SystemParams, damped_oscillators


@dataclass(frozen=True)
class DisplacementLabels:
    alpha: complex
    beta: complex
    t: float = 0.0


def _require_damping(params: SystemParams) -> None:
    if params.gamma <= 0:
        raise ValueError(
            "gamma must be > 0: the initial displacement epsilon/gamma is undefined; "
            "use propagate_labels with explicit initial labels instead"
        )


def steady_alpha(epsilon: float, gamma: float, omega: float, t):
    """Stationary coherent amplitude ``(epsilon/gamma) exp(-i omega t)`` of the
    driven oscillator in the absence of coupling."""
    if gamma <= 0:
        raise ValueError("no stationary state without damping (gamma must be > 0)")
    return (epsilon / gamma) * np.exp(-1j * omega * np.asarray(t, dtype=float))


def rotating_labels(params: SystemParams, t):
    """Labels ``(A, B) = exp(i omega t) * (alpha, beta)`` in the rotating frame."""
    _require_damping(params)
    eps, gam, g = params.epsilon, params.gamma, params.g
    dc, ds = damped_oscillators(params.Gamma, g * np.asarray(t, dtype=float))
    a = eps * (dc / gam + ds / (2.0 * g))
    b = -1j * eps / g + 1j * (eps / g) * (dc + (gam**2 - 2.0 * g**2) * ds / (2.0 * gam * g))
    return a, b


def alpha_of_t(params: SystemParams, t):
    a, _ = rotating_labels(params, t)
    return a * np.exp(-1j * params.omega * np.asarray(t, dtype=float))


def beta_of_t(params: SystemParams, t):
    _, b = rotating_labels(params, t)
    return b * np.exp(-1j * params.omega * np.asarray(t, dtype=float))


def labels(params: SystemParams, t: float) -> DisplacementLabels:
    return DisplacementLabels(
        alpha=complex(alpha_of_t(params, t)), beta=complex(beta_of_t(params, t)), t=float(t)
    )


def scaled_labels(t_prime, Gamma: float, Omega: float = 1.0, amplitude: float = 1.0):
    """Labels in units g = 1 with drive epsilon = amplitude * Gamma.

    Unlike :func:`alpha_of_t` this has a finite Gamma -> 0 limit
    (``alpha = amplitude * cos t'``, ``beta = -i amplitude * sin t'`` up to the
    omega phase), since the initial displacement is fixed to ``amplitude``.
    """
    t_prime = np.asarray(t_prime, dtype=float)
    dc, ds = damped_oscillators(Gamma, t_prime)
    a = amplitude * (dc + 0.5 * Gamma * ds)
    b = 1j * amplitude * (Gamma * (dc - 1.0) + 0.5 * (Gamma**2 - 2.0) * ds)
    phase = np.exp(-1j * Omega * t_prime)
    return a * phase, b * phase


def label_ode_rhs(alpha, beta, params: SystemParams, t):
    """Right-hand side of the linear equations of motion of the labels."""
    gam, om, g, eps = params.gamma, params.omega, params.g, params.epsilon
    dalpha = -(gam + 1j * om) * alpha - 1j * g * beta + eps * np.exp(-1j * om * t)
    dbeta = -1j * g * alpha - 1j * om * beta
    return dalpha, dbeta


def propagate_labels(params: SystemParams, t: float, alpha0: complex, beta0: complex,
                     t0: float = 0.0) -> DisplacementLabels:
    """Exact solution of the label equations from arbitrary ``(alpha0, beta0)`` at ``t0``.

    Works for gamma = 0. Solved in the rotating frame, where the system is
    autonomous, through the exponential of the augmented generator.
    """
    gam, om, g, eps = params.gamma, params.omega, params.g, params.epsilon
    aug = np.zeros((3, 3), dtype=complex)
    aug[0, 0] = -gam
    aug[0, 1] = aug[1, 0] = -1j * g
    aug[0, 2] = eps
    x0 = np.array([alpha0 * np.exp(1j * om * t0), beta0 * np.exp(1j * om * t0), 1.0])
    x = expm(aug * (t - t0)) @ x0
    phase = np.exp(-1j * om * t)
    return DisplacementLabels(alpha=complex(x[0] * phase), beta=complex(x[1] * phase), t=float(t))


def effective_drive(params: SystemParams, t, hbar: float = 1.0):
    """Drive felt by the first oscillator, ``hbar * g * (beta - i alpha)``.

    Evaluated from its own closed form (not from the labels). The result is in
    units of ``hbar`` rad/s unless ``hbar`` is given.
    """
    _require_damping(params)
    eps, gam, g, om = params.epsilon, params.gamma, params.g, params.omega
    t = np.asarray(t, dtype=float)
    dc, ds = damped_oscillators(params.Gamma, g * t)
    transient = (g / gam - 1.0) * dc + (2.0 * g**2 + g * gam - gam**2) / (2.0 * gam * g) * ds
    return -1j * hbar * eps * np.exp(-1j * om * t) * (1.0 + transient)
