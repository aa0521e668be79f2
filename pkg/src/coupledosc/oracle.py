"""Brute-force reference: the full master equation on a truncated Fock space.

The generator is applied with index shifts on the ``(n1, n2, n1', n2')``
tensor, so one evaluation costs O(D^2) for Fock dimension D. Integration
runs in the frame rotating at omega, where the resonant drive is static and
the step size is set by g and gamma alone.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from . import ode
from .density import TwoQubitDensity, rho_tilde
from .errors import GuardViolation, TruncationError
from .fock import (DEFAULT_LEAKAGE_TOL, FockDensity, coherent_amplitudes, displaced_columns,
                   qubit_embedding, rotate)
from .labels import DisplacementLabels, labels, propagate_labels
from .metrics import concurrence_closed, concurrence_wootters, linear_entropy_osc1
from .params import SystemParams, scaled_params

DEFAULT_N_MAX = (4, 12)
# largest Fock dimension D the oracle accepts; one step costs O(D^2)
MAX_FOCK_DIM = 1024


@dataclass(frozen=True)
class IntegratorConfig:
    sample_times: tuple[float, ...]
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    leakage_tol: float = DEFAULT_LEAKAGE_TOL
    max_steps: int = 2_000_000

    def __post_init__(self) -> None:
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be > 0")
        if any(b < a for a, b in zip(self.sample_times, self.sample_times[1:])):
            raise ValueError("sample_times must be nondecreasing")

    @property
    def t_end(self) -> float:
        return self.sample_times[-1] if self.sample_times else 0.0


@njit(cache=True)
def _lindblad_kernel(r, out, g, gamma, drive, detuning):
    d1, d2 = r.shape[0], r.shape[1]
    # zero border of width 1 replaces all bounds checks
    p = np.zeros((d1 + 2, d2 + 2, d1 + 2, d2 + 2), dtype=np.complex128)
    p[1:-1, 1:-1, 1:-1, 1:-1] = r
    sq1 = np.zeros(d1 + 1)
    sq2 = np.zeros(d2 + 1)
    for n in range(d1):
        sq1[n] = np.sqrt(n)
    for n in range(d2):
        sq2[n] = np.sqrt(n)
    cdrive = np.conj(drive)
    for i in range(d1):
        for j in range(d2):
            for k in range(d1):
                for l in range(d2):
                    x = p[i + 1, j + 1, k + 1, l + 1]
                    # coupling g (a^+ b + a b^+), commutator with rho
                    c = (sq2[j] * sq1[i + 1] * p[i + 2, j, k + 1, l + 1]
                         + sq2[j + 1] * sq1[i] * p[i, j + 2, k + 1, l + 1]
                         - sq1[k] * sq2[l + 1] * p[i + 1, j + 1, k, l + 2]
                         - sq1[k + 1] * sq2[l] * p[i + 1, j + 1, k + 2, l])
                    # drive i (d a^+ - d^* a), commutator with rho
                    up = sq2[j] * p[i + 1, j, k + 1, l + 1] - sq2[l + 1] * p[i + 1, j + 1, k + 1, l + 2]
                    down = sq2[j + 1] * p[i + 1, j + 2, k + 1, l + 1] - sq2[l] * p[i + 1, j + 1, k + 1, l]
                    comm = g * c + 1j * (drive * up - cdrive * down) + detuning * (i + j - k - l) * x
                    out[i, j, k, l] = (-1j * comm - gamma * (j + l) * x
                                       + 2.0 * gamma * sq2[j + 1] * sq2[l + 1] * p[i + 1, j + 2, k + 1, l + 2])


class Generator:
    """``rho -> d rho/dt`` for the driven, damped, coupled pair.

    Implements ``-i/hbar [H, rho] + gamma (2 a rho a^+ - a^+ a rho - rho a^+ a)``
    with ``H/hbar = omega (b^+ b + a^+ a) + g (a^+ b + a b^+)
    + i epsilon (e^{-i omega t} a^+ - e^{i omega t} a)``. In the rotating
    frame the omega terms and the drive phases drop out. Evaluated by a
    compiled loop over the ``(n1, n2, n1', n2')`` tensor that reads only the
    neighbours connected by a ladder operator, O(D^2) per call.
    """

    def __init__(self, params: SystemParams, n_max1: int, n_max2: int, frame: str = "rotating"):
        if n_max1 < 1 or n_max2 < 1:
            raise ValueError("truncation levels must be >= 1")
        if frame not in ("rotating", "lab"):
            raise ValueError("frame must be 'rotating' or 'lab'")
        self.params = params
        self.n_max1, self.n_max2 = n_max1, n_max2
        self.frame = frame
        self.dims = (n_max1 + 1, n_max2 + 1)

    @property
    def dim(self) -> int:
        return self.dims[0] * self.dims[1]

    def __call__(self, t: float, rho: np.ndarray) -> np.ndarray:
        p = self.params
        drive = complex(p.epsilon)
        detuning = 0.0
        if self.frame == "lab":
            drive = p.epsilon * np.exp(-1j * p.omega * t)
            detuning = p.omega
        r = np.ascontiguousarray(rho, dtype=complex).reshape(*self.dims, *self.dims)
        out = np.empty_like(r)
        _lindblad_kernel(r, out, float(p.g), float(p.gamma), complex(drive), float(detuning))
        return out.reshape(rho.shape)


def build_generator(params: SystemParams, n_max1: int, n_max2: int,
                    frame: str = "rotating") -> Generator:
    return Generator(params, n_max1, n_max2, frame)


def initial_state(params: SystemParams, n_max1: int, n_max2: int,
                  alpha0: complex | None = None,
                  leakage_tol: float = DEFAULT_LEAKAGE_TOL) -> FockDensity:
    """``(cos th |0> + sin th |1>) (h.c.)  x  |alpha0><alpha0|`` with
    ``alpha0 = epsilon/gamma`` unless given."""
    if alpha0 is None:
        if params.gamma <= 0:
            raise ValueError("gamma must be > 0 for the default initial displacement")
        alpha0 = params.epsilon / params.gamma
    coh = coherent_amplitudes(alpha0, n_max2)
    lost = 1.0 - float(np.sum(np.abs(coh) ** 2))
    if lost > leakage_tol or abs(coh[-1]) ** 2 > leakage_tol:
        raise TruncationError(
            f"coherent state |{alpha0:.4g}> leaks {max(lost, abs(coh[-1]) ** 2):.3e} "
            f"past n_max2={n_max2}; use a larger n_max2"
        )
    coh /= np.linalg.norm(coh)
    first = np.zeros(n_max1 + 1, dtype=complex)
    first[0], first[1] = math.cos(params.theta), math.sin(params.theta)
    psi = np.kron(first, coh)
    return FockDensity(n_max1, n_max2, np.outer(psi, psi.conj()))


def required_truncation(amplitude: float, tol: float = DEFAULT_LEAKAGE_TOL,
                        ceiling: int = 400) -> int:
    """Smallest n_max for which ``D(amplitude)|0>`` and ``D(amplitude)|1>`` keep
    at most ``tol`` above n_max and in level n_max itself."""
    cols = displaced_columns(amplitude, ceiling)
    p = np.sum(np.abs(cols) ** 2, axis=1)
    tail = np.cumsum(p[::-1])[::-1]
    for n in range(1, ceiling):
        if tail[n] <= tol:
            return n
    raise TruncationError(f"amplitude {amplitude} needs more than {ceiling} levels")


def label_extent(params: SystemParams, t_end: float, alpha0: complex | None = None,
                 samples: int = 400) -> tuple[float, float]:
    """Largest ``|beta|`` and ``|alpha|`` over ``[0, t_end]``."""
    if alpha0 is None:
        alpha0 = params.epsilon / params.gamma
    ts = np.linspace(0.0, t_end, samples)
    lab = [propagate_labels(params, t, alpha0, 0.0) for t in ts]
    return max(abs(x.beta) for x in lab), max(abs(x.alpha) for x in lab)


def auto_truncation(params: SystemParams, t_end: float, alpha0: complex | None = None,
                    tol: float = DEFAULT_LEAKAGE_TOL) -> tuple[int, int]:
    """Truncation that keeps the displaced qubit block inside the Fock space
    over ``[0, t_end]``, with one spare level per mode."""
    b_max, a_max = label_extent(params, t_end, alpha0)
    return (max(DEFAULT_N_MAX[0], required_truncation(b_max, tol / 10) + 1),
            max(DEFAULT_N_MAX[1], required_truncation(a_max, tol / 10) + 1))


@dataclass
class OracleRun:
    """States sampled along one trajectory, stored in the rotating frame."""

    params: SystemParams
    times: np.ndarray
    states: list[FockDensity]
    frame: str = "rotating"
    steps: dict = field(default_factory=dict)

    def lab_state(self, i: int) -> FockDensity:
        if self.frame == "lab":
            return self.states[i]
        return rotate(self.states[i], self.params.omega, float(self.times[i]))


def evolve(rho0: FockDensity, generator: Generator, config: IntegratorConfig) -> OracleRun:
    """Integrate the master equation and sample the state at ``config.sample_times``.

    The state is re-symmetrized after every accepted step; the top-level
    population of each mode is checked against ``config.leakage_tol`` after
    every step and the trace at every sample.
    """
    if (rho0.n_max1, rho0.n_max2) != (generator.n_max1, generator.n_max2):
        raise ValueError("initial state and generator use different truncations")
    rho0.check_leakage(config.leakage_tol)
    dims = generator.dims
    d = generator.dim
    count = {"accepted": 0}

    def on_step(t, y):
        count["accepted"] += 1
        sym = 0.5 * (y + y.conj().T)
        pop = np.real(np.diagonal(sym)).reshape(dims)
        top1, top2 = pop[-1, :].sum(), pop[:, -1].sum()
        if top1 > config.leakage_tol or top2 > config.leakage_tol:
            raise TruncationError(
                f"top-level populations ({top1:.3e}, {top2:.3e}) exceed "
                f"{config.leakage_tol:.1e} at t={t:.6g}; increase the truncation"
            )
        return sym

    ys = ode.integrate(generator, rho0.m.reshape(d, d), config.sample_times,
                       rtol=config.rel_tol, atol=config.abs_tol,
                       max_steps=config.max_steps, on_step=on_step)
    states = []
    for t, y in zip(config.sample_times, ys):
        drift = abs(np.trace(y) - 1.0)
        if drift > 1e-8:
            raise GuardViolation(f"trace drifted by {drift:.3e} at t={t:.6g}")
        states.append(FockDensity(generator.n_max1, generator.n_max2, y))
    return OracleRun(generator.params, np.asarray(config.sample_times, dtype=float), states,
                     generator.frame, count)


def displaced_block(rho: FockDensity, labels: DisplacementLabels,
                    min_trace: float = 1 - 1e-6) -> tuple[TwoQubitDensity, float]:
    """Qubit block of ``D(beta, alpha)^+ rho D(beta, alpha)`` and its trace.

    Warns when the block trace falls below ``min_trace``.
    """
    v = qubit_embedding(labels.beta, labels.alpha, rho.n_max1, rho.n_max2)
    block = v.conj().T @ rho.m @ v
    tr = float(np.trace(block).real)
    if tr < min_trace:
        warnings.warn(f"displaced qubit block holds only {tr:.8f} of the population",
                      RuntimeWarning, stacklevel=2)
    return TwoQubitDensity(block), tr


@dataclass(frozen=True)
class Observables:
    purity_osc1: float
    linear_entropy_osc1: float
    mean_photons_1: float
    mean_photons_2: float


def observables(rho: FockDensity) -> Observables:
    r1, r2 = rho.reduced(1), rho.reduced(2)
    purity = float(np.trace(r1 @ r1).real)
    n1 = float(np.real(np.diagonal(r1)) @ np.arange(rho.n_max1 + 1))
    n2 = float(np.real(np.diagonal(r2)) @ np.arange(rho.n_max2 + 1))
    return Observables(purity, 1.0 - purity, n1, n2)


@dataclass(frozen=True)
class OracleSamples:
    """Displaced-back qubit blocks and first-mode entropies along one trajectory."""

    Gamma: float
    Omega: float
    theta: float
    times: np.ndarray
    blocks: list[TwoQubitDensity]
    entropies: np.ndarray
    block_traces: np.ndarray
    truncation: tuple[int, int]
    seconds: float


@dataclass(frozen=True)
class Comparison:
    """Deviations of oracle samples from the closed forms of one convention."""

    convention: str
    element_dev: np.ndarray
    concurrence_dev: np.ndarray
    entropy_dev: np.ndarray
    concurrence_oracle: np.ndarray

    @property
    def max_element_dev(self) -> float:
        return float(self.element_dev.max())

    @property
    def max_concurrence_dev(self) -> float:
        return float(self.concurrence_dev.max())

    @property
    def max_entropy_dev(self) -> float:
        return float(self.entropy_dev.max())


def oracle_samples(Gamma: float, theta: float, times, Omega: float = 1.0,
                   amplitude: float = 1.0, truncation: tuple[int, int] | None = None,
                   rel_tol: float = 1e-8, abs_tol: float = 1e-10,
                   max_dim: int = MAX_FOCK_DIM) -> OracleSamples:
    """Run the oracle at ``g = 1``, ``epsilon = amplitude * gamma`` and displace back.

    Each lab-frame sample is displaced back with the closed-form labels and
    its qubit block kept; the linear entropy is taken from the full first-mode
    state. ``truncation=None`` picks the smallest truncation that satisfies
    the leakage guard; a Fock dimension above ``max_dim`` raises
    :class:`TruncationError`.
    """
    params = scaled_params(Gamma, Omega, theta, amplitude)
    times = np.asarray(times, dtype=float)
    if truncation is None:
        truncation = auto_truncation(params, float(times[-1]))
    n1, n2 = truncation
    if (n1 + 1) * (n2 + 1) > max_dim:
        raise TruncationError(f"truncation ({n1}, {n2}) exceeds the Fock dimension limit {max_dim}")
    start = time.perf_counter()
    config = IntegratorConfig(tuple(times), rel_tol=rel_tol, abs_tol=abs_tol)
    run = evolve(initial_state(params, n1, n2), build_generator(params, n1, n2), config)
    blocks, entropies, traces = [], [], []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for i, t in enumerate(times):
            state = run.lab_state(i)
            block, tr = displaced_block(state, labels(params, t))
            blocks.append(block)
            traces.append(tr)
            entropies.append(observables(state).linear_entropy_osc1)
    return OracleSamples(Gamma, Omega, theta, times, blocks, np.array(entropies),
                         np.array(traces), (n1, n2), time.perf_counter() - start)


def compare(samples: OracleSamples, convention: str = "printed") -> Comparison:
    """Element-wise, concurrence and entropy deviations from the closed forms."""
    G, th = samples.Gamma, samples.theta
    el, cd, ed, co = [], [], [], []
    for t, block, ent in zip(samples.times, samples.blocks, samples.entropies):
        closed = rho_tilde(t, G, samples.Omega, th, convention)
        c_or = concurrence_wootters(block, psd_tol=1e-6)
        el.append(np.abs(block.m - closed.m).max())
        co.append(c_or)
        cd.append(abs(c_or - float(concurrence_closed(t, G, th, convention))))
        ed.append(abs(ent - float(linear_entropy_osc1(t, G, th, convention))))
    return Comparison(convention, np.array(el), np.array(cd), np.array(ed), np.array(co))
