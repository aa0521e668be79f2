"""Displaced density operator as a two-qubit matrix.

Only the vacuum and the one-excitation states of each oscillator are ever
populated in the displaced frame. Starting from
``cos(theta)|00> + sin(theta)|10>``, the one-excitation amplitude evolves as
``c1|10> + c2|01>`` under the undriven damped dynamics, and the probability
lost from it is deposited incoherently in ``|00>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import DEFAULT_LEAKAGE_TOL, FockDensity, qubit_embedding
from .errors import TruncationError
from .labels import DisplacementLabels
from .params import convention_sign, damped_oscillators

#: Position of each two-qubit basis state; the first digit is oscillator 1.
BASIS = {"00": 0, "01": 1, "10": 2, "11": 3}


@dataclass(frozen=True)
class TwoQubitDensity:
    """4x4 density matrix in the basis |00>, |01>, |10>, |11>."""

    m: np.ndarray

    def __post_init__(self) -> None:
        if self.m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got {self.m.shape}")

    def __getitem__(self, key: tuple[str, str]) -> complex:
        """``rho["00", "10"]`` is ``<00|rho|10>``."""
        row, col = key
        return complex(self.m[BASIS[row], BASIS[col]])

    def reduced_first(self) -> np.ndarray:
        """Reduced 2x2 state of oscillator 1 (trace over oscillator 2)."""
        return np.einsum("ijkj->ik", self.m.reshape(2, 2, 2, 2))

    def check(self, psd_tol: float = 1e-10) -> None:
        """Raise ``ValueError`` unless Hermitian, unit trace and PSD."""
        if not np.allclose(self.m, self.m.conj().T, rtol=0.0, atol=1e-12):
            raise ValueError("matrix is not Hermitian")
        if abs(np.trace(self.m) - 1.0) > 1e-10:
            raise ValueError(f"trace {np.trace(self.m).real} differs from 1")
        lowest = np.linalg.eigvalsh(0.5 * (self.m + self.m.conj().T))[0]
        if lowest < -psd_tol:
            raise ValueError(f"matrix is not positive semidefinite (eigenvalue {lowest:.3e})")


def excitation_amplitudes(t_prime, Gamma: float, convention: str = "printed"):
    """Amplitudes ``(c1, c2)`` of |10> and |01> for unit initial |10> amplitude.

    ``c1`` is real and ``c2`` purely imaginary (rotating frame). For the
    "physical" convention they solve ``c1' = -i c2``, ``c2' = -i c1 - Gamma c2``;
    "printed" flips the sign of the Gamma/2 term of ``c1``.
    """
    sign = convention_sign(convention)
    dc, ds = damped_oscillators(Gamma, t_prime)
    return dc + sign * 0.5 * Gamma * ds, -1j * ds


def rho_tilde(t_prime: float, Gamma: float, Omega: float = 1.0, theta: float = math.pi / 2,
              convention: str = "printed") -> TwoQubitDensity:
    """Displaced density matrix at rescaled time ``t_prime = g t``."""
    if t_prime < 0:
        raise ValueError("t_prime must be >= 0")
    c1, c2 = excitation_amplitudes(float(t_prime), Gamma, convention)
    c1, c2 = complex(c1), complex(c2)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    phase = np.exp(-1j * Omega * t_prime)
    psi = np.array([cos_t, sin_t * phase * c2, sin_t * phase * c1, 0.0], dtype=complex)
    m = np.outer(psi, psi.conj())
    m[0, 0] += sin_t**2 * (1.0 - abs(c1) ** 2 - abs(c2) ** 2)
    return TwoQubitDensity(m)


def lab_frame_density(rho: TwoQubitDensity, labels: DisplacementLabels, n_max1: int,
                      n_max2: int, leakage_tol: float = DEFAULT_LEAKAGE_TOL) -> FockDensity:
    """Laboratory-frame state ``D(beta, alpha) rho D(beta, alpha)^dagger`` on a
    truncated Fock space.

    Raises ``TruncationError`` when the displaced state does not fit.
    """
    v = qubit_embedding(labels.beta, labels.alpha, n_max1, n_max2)
    out = FockDensity(n_max1, n_max2, v @ rho.m @ v.conj().T)
    lost = 1.0 - out.trace()
    if lost > leakage_tol:
        raise TruncationError(
            f"{lost:.3e} of the population lies beyond n_max=({n_max1}, {n_max2})"
        )
    out.check_leakage(leakage_tol)
    return out
