"""Model parameters, damping regimes and the effective frequency g~."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

#: Half-width of the band around Gamma = 2 treated as critically damped.
CRITICAL_BAND = 1e-9

Convention = Literal["printed", "physical"]

#: Sign multiplying the Gamma/2 term of the oscillator-1 amplitude.
#: "printed" keeps the original sign of the element formulas; "physical" is the
#: solution of the undriven master equation.
CONVENTION_SIGN = {"printed": -1.0, "physical": 1.0}


def convention_sign(convention: str) -> float:
    try:
        return CONVENTION_SIGN[convention]
    except KeyError:
        raise ValueError(
            f"unknown convention {convention!r}; expected one of {sorted(CONVENTION_SIGN)}"
        ) from None


class Regime(enum.Enum):
    UNDERDAMPED = "underdamped"
    CRITICALLY_DAMPED = "critically_damped"
    OVERDAMPED = "overdamped"


@dataclass(frozen=True)
class DimensionlessParams:
    Gamma: float
    Omega: float


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the driven, damped oscillator pair.

    Attributes
    ----------
    omega : float
        Common angular frequency of both oscillators and of the drive (rad/s).
    gamma : float
        Dissipation rate of the second oscillator (1/s).
    g : float
        Coupling constant (rad/s).
    epsilon : float
        Drive amplitude (rad/s).
    theta : float
        Angle of the initial superposition cos(theta)|0> + sin(theta)|1>
        of the first oscillator, in [0, pi/2].
    """

    omega: float
    gamma: float
    g: float
    epsilon: float
    theta: float

    def __post_init__(self) -> None:
        for name in ("omega", "gamma", "g", "epsilon", "theta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.g <= 0:
            raise ValueError(f"g must be > 0, got {self.g}")
        if self.omega <= 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta}")

    @property
    def Gamma(self) -> float:
        return self.gamma / self.g

    @property
    def Omega(self) -> float:
        return self.omega / self.g

    @property
    def dimensionless(self) -> DimensionlessParams:
        return DimensionlessParams(Gamma=self.Gamma, Omega=self.Omega)

    @property
    def regime(self) -> Regime:
        return classify_regime(self.Gamma)


def make_params(omega, gamma, g, epsilon, theta) -> SystemParams:
    """Validate and bundle the physical parameters."""
    return SystemParams(
        omega=float(omega),
        gamma=float(gamma),
        g=float(g),
        epsilon=float(epsilon),
        theta=float(theta),
    )


def scaled_params(Gamma: float, Omega: float = 1.0, theta: float = math.pi / 2,
                  amplitude: float = 1.0) -> SystemParams:
    """Parameters in units where g = 1, with drive epsilon = amplitude * gamma."""
    return make_params(Omega, Gamma, 1.0, amplitude * Gamma, theta)


def classify_regime(Gamma: float, band: float = CRITICAL_BAND) -> Regime:
    if Gamma < 0:
        raise ValueError(f"Gamma must be >= 0, got {Gamma}")
    if abs(Gamma - 2.0) <= band:
        return Regime.CRITICALLY_DAMPED
    return Regime.UNDERDAMPED if Gamma < 2.0 else Regime.OVERDAMPED


def g_tilde(Gamma: float) -> complex:
    """Rescaled effective frequency g~/g = sqrt(1 - Gamma^2/4).

    Real for Gamma < 2, ``1j * sqrt(Gamma^2/4 - 1)`` for Gamma > 2.
    """
    if Gamma < 0:
        raise ValueError(f"Gamma must be >= 0, got {Gamma}")
    # factored form keeps relative precision near Gamma = 2
    w2 = (2.0 - Gamma) * (2.0 + Gamma) / 4.0
    if w2 >= 0:
        return complex(math.sqrt(w2), 0.0)
    return complex(0.0, math.sqrt(-w2))


def rate(Gamma: float) -> float:
    """|g~/g|: oscillation (UD) or splitting (OD) rate in units of g."""
    return abs(g_tilde(Gamma))


def damped_oscillators(Gamma: float, t):
    """Regime-continued pair ``exp(-Gamma t/2) * (cos(w t), sin(w t)/w)``.

    ``w = g~/g``. For Gamma > 2 the trigonometric functions become
    ``cosh``/``sinh`` with w = |g~/g|; inside the critical band the pair is
    ``exp(-t) * (1, t)``. The damping factor is folded in so that the
    overdamped branch does not overflow at large Gamma * t.
    """
    t = np.asarray(t, dtype=float)
    regime = classify_regime(Gamma)
    w = rate(Gamma)
    if regime is Regime.CRITICALLY_DAMPED:
        decay = np.exp(-t)
        return decay, decay * t
    if regime is Regime.UNDERDAMPED:
        decay = np.exp(-0.5 * Gamma * t)
        return decay * np.cos(w * t), decay * np.sin(w * t) / w
    slow = np.exp((w - 0.5 * Gamma) * t)
    fast = np.exp(-2.0 * w * t)
    return 0.5 * slow * (1.0 + fast), -0.5 * slow * np.expm1(-2.0 * w * t) / w
