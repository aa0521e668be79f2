"""Truncated two-mode Fock space: states, displacements and partial traces."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TruncationError

DEFAULT_LEAKAGE_TOL = 1e-8


@dataclass(frozen=True)
class FockDensity:
    """Density matrix on span{|n1 n2>: n1 <= n_max1, n2 <= n_max2}.

    ``m`` is row-major over ``|n1 n2>``, i.e. index ``n1 * (n_max2 + 1) + n2``.
    Mode 1 is the undamped oscillator, mode 2 the damped one.
    """

    n_max1: int
    n_max2: int
    m: np.ndarray

    def __post_init__(self) -> None:
        d = (self.n_max1 + 1) * (self.n_max2 + 1)
        if self.m.shape != (d, d):
            raise ValueError(f"matrix shape {self.m.shape} does not match dimension {d}")

    @property
    def dims(self) -> tuple[int, int]:
        return self.n_max1 + 1, self.n_max2 + 1

    def tensor(self) -> np.ndarray:
        """View with indices ``(n1, n2, n1', n2')``."""
        d1, d2 = self.dims
        return self.m.reshape(d1, d2, d1, d2)

    def trace(self) -> float:
        return float(np.trace(self.m).real)

    def reduced(self, mode: int) -> np.ndarray:
        """Reduced density matrix of mode 1 or 2."""
        t = self.tensor()
        if mode == 1:
            return np.einsum("ijkj->ik", t)
        if mode == 2:
            return np.einsum("ijil->jl", t)
        raise ValueError("mode must be 1 or 2")

    def top_populations(self) -> tuple[float, float]:
        """Population of the highest retained level of each mode."""
        p = np.real(np.diagonal(self.m)).reshape(self.dims)
        return float(p[-1, :].sum()), float(p[:, -1].sum())

    def check_leakage(self, tol: float = DEFAULT_LEAKAGE_TOL) -> None:
        p1, p2 = self.top_populations()
        if p1 > tol or p2 > tol:
            raise TruncationError(
                f"top Fock-level populations ({p1:.3e}, {p2:.3e}) exceed {tol:.1e}; "
                f"increase n_max1={self.n_max1} / n_max2={self.n_max2}"
            )


def coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    """Fock amplitudes ``exp(-|alpha|^2/2) alpha^n / sqrt(n!)``, n = 0..n_max."""
    c = np.empty(n_max + 1, dtype=complex)
    c[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, n_max + 1):
        c[n] = c[n - 1] * alpha / np.sqrt(n)
    return c


def displaced_columns(alpha: complex, n_max: int, n_cols: int = 2) -> np.ndarray:
    """Columns ``D(alpha)|k>``, k < n_cols, restricted to levels 0..n_max.

    Uses ``D|k+1> = (a^dagger - alpha^*) D|k> / sqrt(k+1)``; raising only reads
    lower levels, so every retained entry is exact.
    """
    cols = np.empty((n_max + 1, n_cols), dtype=complex)
    cols[:, 0] = coherent_amplitudes(alpha, n_max)
    sq = np.sqrt(np.arange(n_max + 1))
    for k in range(n_cols - 1):
        v = cols[:, k]
        raised = np.zeros_like(v)
        raised[1:] = sq[1:] * v[:-1]
        cols[:, k + 1] = (raised - np.conj(alpha) * v) / np.sqrt(k + 1)
    return cols


def qubit_embedding(beta: complex, alpha: complex, n_max1: int, n_max2: int) -> np.ndarray:
    """Matrix whose columns are ``D(beta, alpha)|i1 i2>`` for i1, i2 in {0, 1}.

    Column order follows the two-qubit basis |00>, |01>, |10>, |11>.
    """
    d1 = displaced_columns(beta, n_max1)
    d2 = displaced_columns(alpha, n_max2)
    return np.einsum("ai,bj->abij", d1, d2).reshape((n_max1 + 1) * (n_max2 + 1), 4)


def number_diagonal(n_max1: int, n_max2: int) -> np.ndarray:
    """Total excitation number of every basis state ``|n1 n2>``."""
    n1 = np.arange(n_max1 + 1)[:, None]
    n2 = np.arange(n_max2 + 1)[None, :]
    return (n1 + n2).ravel()


def rotate(rho: FockDensity, omega: float, t: float) -> FockDensity:
    """Apply ``exp(-i omega t N) rho exp(i omega t N)``, N the total number.

    Converts a state from the frame rotating at omega to the laboratory frame.
    """
    n = number_diagonal(rho.n_max1, rho.n_max2)
    phase = np.exp(-1j * omega * t * n)
    return FockDensity(rho.n_max1, rho.n_max2, phase[:, None] * rho.m * np.conj(phase)[None, :])
