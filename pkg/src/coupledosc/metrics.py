"""Concurrence and linear entropy: closed forms and generic definitions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import TwoQubitDensity
from .params import Regime, classify_regime, convention_sign, rate

_SIGMA_YY = np.fliplr(np.diag([-1.0, 1.0, 1.0, -1.0])).astype(complex)


@dataclass(frozen=True)
class MetricSample:
    t_prime: float
    concurrence: float
    linear_entropy: float


def _damped_hyperbolic(x, decay):
    """``exp(-decay) * (cosh x, sinh x)`` without overflow, for x <= decay."""
    ax = np.abs(x)
    big = np.exp(ax - decay)
    small = np.exp(-2.0 * ax)
    return 0.5 * big * (1.0 + small), -0.5 * np.sign(x) * big * np.expm1(-2.0 * ax)


def concurrence_closed(t_prime, Gamma: float, theta: float = math.pi / 2,
                       convention: str = "printed"):
    """Regime-dispatched closed form of the concurrence.

    Underdamped (s = sqrt(4 - Gamma^2))::

        4 sin^2(theta) e^{-Gamma t} |sin(s t/2)/s| |cos(s t/2) + sign Gamma sin(s t/2)/s|

    critically damped ``2 sin^2(theta) e^{-2t} t |1 + sign t|``, and the
    hyperbolic continuation when overdamped. ``sign`` is -1 for the printed
    convention and +1 for the physical one.
    """
    sign = convention_sign(convention)
    t = np.asarray(t_prime, dtype=float)
    pop = math.sin(theta) ** 2
    regime = classify_regime(Gamma)
    if regime is Regime.CRITICALLY_DAMPED:
        return 2.0 * pop * np.exp(-2.0 * t) * np.abs(t * (1.0 + sign * t))
    if regime is Regime.UNDERDAMPED:
        s = math.sqrt((2.0 - Gamma) * (2.0 + Gamma))
        half = 0.5 * s * t
        return (4.0 * pop * np.exp(-Gamma * t) * np.abs(np.sin(half) / s)
                * np.abs(np.cos(half) + sign * Gamma * np.sin(half) / s))
    # product form rewritten as e^{-Gamma t}|cosh(2Wt + sign eta) - Gamma/2| / W^2,
    # which avoids the cancellation between cosh and sinh at late times
    w2 = 0.25 * (Gamma - 2.0) * (Gamma + 2.0)
    W = math.sqrt(w2)
    eta = math.acosh(0.5 * Gamma)
    slow = np.exp(-4.0 / (Gamma + 2.0 * W) * t + sign * eta)
    fast = np.exp(-(Gamma + 2.0 * W) * t - sign * eta)
    return pop * np.abs(0.5 * (slow + fast) - 0.5 * Gamma * np.exp(-Gamma * t)) / w2


def concurrence_wootters(rho, psd_tol: float = 1e-10) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    ``max(0, l1 - l2 - l3 - l4)`` with ``l_i`` the decreasing square roots of
    the eigenvalues of ``rho (sy x sy) rho^* (sy x sy)``.
    """
    m = rho.m if isinstance(rho, TwoQubitDensity) else np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got {m.shape}")
    lowest = np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0]
    if lowest < -psd_tol:
        raise ValueError(f"density matrix is not positive semidefinite (eigenvalue {lowest:.3e})")
    # l_i are the singular values of sqrt(rho) (sy x sy) sqrt(rho)^*; avoids
    # square roots of rounding-level eigenvalues of the non-Hermitian product
    p, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    root = (v * np.sqrt(np.clip(p, 0.0, None))) @ v.conj().T
    lam = np.linalg.svd(root @ _SIGMA_YY @ root.conj(), compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def x_function(t_prime, Gamma: float, convention: str = "printed"):
    """Population of |1> of oscillator 1 in the displaced frame, for theta = pi/2.

    Underdamped: ``e^{-Gamma t} sin^2(w t + sign*arccos(Gamma/2)) / w^2`` with
    ``w = sqrt(1 - Gamma^2/4)``; the overdamped form replaces sin/arccos by
    sinh/arccosh. Starts at 1 and decays to 0.
    """
    sign = convention_sign(convention)
    t = np.asarray(t_prime, dtype=float)
    regime = classify_regime(Gamma)
    if regime is Regime.CRITICALLY_DAMPED:
        return np.exp(-2.0 * t) * (1.0 + sign * t) ** 2
    w = rate(Gamma)
    if regime is Regime.UNDERDAMPED:
        phi = math.atan2(w, 0.5 * Gamma)
        return np.exp(-Gamma * t) * np.sin(w * t + sign * phi) ** 2 / w**2
    eta = math.acosh(0.5 * Gamma)
    _, sh = _damped_hyperbolic(w * t + sign * eta, 0.5 * Gamma * t)
    return sh**2 / w**2


def linear_entropy_osc1(t_prime, Gamma: float, theta: float = math.pi / 2,
                        convention: str = "printed"):
    """Linear entropy ``2 sin^4(theta) x (1 - x)`` of the first oscillator."""
    # x(0) = 1 up to rounding; keep the entropy inside [0, 1/2]
    x = np.clip(x_function(t_prime, Gamma, convention), 0.0, 1.0)
    return 2.0 * math.sin(theta) ** 4 * x * (1.0 - x)


def linear_entropy_of(rho: TwoQubitDensity) -> float:
    """``1 - tr(rho_1^2)`` of the first oscillator's reduced state."""
    r1 = rho.reduced_first()
    return float(1.0 - np.trace(r1 @ r1).real)


def sample(t_prime: float, Gamma: float, theta: float = math.pi / 2,
           convention: str = "printed") -> MetricSample:
    return MetricSample(
        t_prime=float(t_prime),
        concurrence=float(concurrence_closed(t_prime, Gamma, theta, convention)),
        linear_entropy=float(linear_entropy_osc1(t_prime, Gamma, theta, convention)),
    )
