"""Closed-form critical times of concurrence and linear entropy, checked numerically.

All times are rescaled (``t' = g t``). The general expressions below carry
the convention sign ``sign`` (see :mod:`coupledosc.params`). With
``w = sqrt(1 - Gamma^2/4)`` and ``phi = arccos(Gamma/2)`` in ``[0, pi/2]``,
the concurrence in the underdamped regime reduces to::

    C = sin^2(theta) e^{-Gamma t} |Gamma/2 - cos(2 w t + sign phi)| / w^2

from which zeros and maxima follow in closed form. The overdamped regime is
the hyperbolic continuation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from .params import Regime, classify_regime, convention_sign, rate
from . import metrics

XTOL = 1e-12
# central-difference step used to locate maxima numerically
_FD_STEP = 1e-6


class Kind(str, enum.Enum):
    CONC_ZERO_1 = "ConcZero1"
    CONC_ZERO_2 = "ConcZero2"
    CONC_MAX_PLUS = "ConcMaxPlus"
    CONC_MAX_MINUS = "ConcMaxMinus"
    CONC_MAX_OD_EARLY = "ConcMaxODEarly"
    CONC_MAX_OD_LATE = "ConcMaxODLate"
    ENTROPY_MIN_4N = "EntropyMin4n"
    ENTROPY_MAX_4N = "EntropyMax4n"
    ENTROPY_HALF_CROSS = "EntropyHalfCross"
    ENTROPY_FIRST_MAX = "EntropyFirstMax"


@dataclass(frozen=True)
class CriticalTime:
    kind: Kind
    n: int
    t_prime: float
    value: float


@dataclass
class CriticalTimeTable:
    """Critical times sorted by ``t_prime`` (ties keep insertion order)."""

    entries: list[CriticalTime] = field(default_factory=list)

    def __post_init__(self):
        self.entries = sorted(self.entries, key=lambda e: e.t_prime)

    def of_kind(self, kind: Kind) -> list[CriticalTime]:
        return sorted((e for e in self.entries if e.kind == kind), key=lambda e: e.n)

    def times(self, kind: Kind) -> np.ndarray:
        return np.array([e.t_prime for e in self.of_kind(kind)])

    def values(self, kind: Kind) -> np.ndarray:
        return np.array([e.value for e in self.of_kind(kind)])

    def merged(self, other: "CriticalTimeTable") -> "CriticalTimeTable":
        return CriticalTimeTable(self.entries + other.entries)

    def __len__(self):
        return len(self.entries)


def _require_underdamped(Gamma: float) -> float:
    if not (Gamma >= 0 and classify_regime(Gamma) is Regime.UNDERDAMPED):
        raise ValueError(f"requires 0 <= Gamma < 2 (underdamped), got {Gamma}")
    return rate(Gamma)


def _require_overdamped(Gamma: float) -> float:
    if classify_regime(Gamma) is not Regime.OVERDAMPED:
        raise ValueError(f"requires Gamma > 2 (overdamped), got {Gamma}")
    return rate(Gamma)


def refine_maximum(f, lo: float, hi: float, xtol: float = XTOL) -> float:
    """Locate the maximum of ``f`` in ``[lo, hi]`` by bisection on a central difference.

    The bracket must contain a single maximum, with ``f`` rising at ``lo``
    and falling at ``hi``.
    """
    def slope(t):
        return (f(t + _FD_STEP) - f(t - _FD_STEP)) / (2 * _FD_STEP)

    if not (slope(lo) > 0 > slope(hi)):
        raise ValueError(f"no maximum bracketed in [{lo}, {hi}]")
    return bisect(slope, lo, hi, xtol=xtol, maxiter=500)


def _conc(Gamma, theta, convention):
    return lambda t: float(metrics.concurrence_closed(t, Gamma, theta, convention))


def conc_zeros_ud(Gamma: float, n_max: int, convention: str = "printed",
                  theta: float = math.pi / 2) -> CriticalTimeTable:
    """Zeros ``tau_1n = n pi / w`` and ``tau_2n`` of the underdamped concurrence.

    Printed convention: ``tau_2n = (2 pi n + 2 arccos(Gamma/2)) / sqrt(4 - Gamma^2)``.
    Physical convention: ``tau_2n = (2 pi (n+1) - 2 arccos(Gamma/2)) / sqrt(4 - Gamma^2)``.
    """
    w = _require_underdamped(Gamma)
    chi = math.acos(convention_sign(convention) * Gamma / 2)
    conc = _conc(Gamma, theta, convention)
    entries = []
    for n in range(n_max + 1):
        t1 = n * math.pi / w
        t2 = ((n + 1) * math.pi - chi) / w
        entries.append(CriticalTime(Kind.CONC_ZERO_1, n, t1, conc(t1)))
        entries.append(CriticalTime(Kind.CONC_ZERO_2, n, t2, conc(t2)))
    return CriticalTimeTable(entries)


def envelope_constants(Gamma: float) -> tuple[float, float]:
    """``K_pm = sqrt(1 + Gamma^2/4) pm Gamma/2``."""
    root = math.sqrt(1 + Gamma**2 / 4)
    return root + Gamma / 2, root - Gamma / 2


def conc_maxima_ud(Gamma: float, theta: float, n_max: int, convention: str = "printed",
                   validate: bool = True) -> CriticalTimeTable:
    """Local maxima ``tau_pm n`` of the underdamped concurrence and their values.

    Maxima satisfy ``2 w t = (1 - sign) phi +- arccos(Gamma^2/4) + 2 n pi``, with
    values ``C_pm n = sin^2(theta) K_pm e^{-Gamma tau_pm n}``. For the printed
    convention this is
    ``tau_pm n = ((2n+1) pi +- arccos(Gamma^2/4) - 2 arcsin(Gamma/2)) / sqrt(4 - Gamma^2)``.
    Branches whose time would be negative are skipped. With ``validate`` each
    time is confirmed as a maximum between its neighbouring zeros.
    """
    w = _require_underdamped(Gamma)
    shift = (1 - convention_sign(convention)) * math.acos(Gamma / 2)
    a = math.acos(Gamma**2 / 4)
    k_plus, k_minus = envelope_constants(Gamma)
    pop = math.sin(theta) ** 2
    entries = []
    for n in range(n_max + 1):
        for kind, sgn, k in ((Kind.CONC_MAX_PLUS, 1, k_plus), (Kind.CONC_MAX_MINUS, -1, k_minus)):
            t = (shift + sgn * a + 2 * n * math.pi) / (2 * w)
            if t < 0:
                continue
            entries.append(CriticalTime(kind, n, t, pop * k * math.exp(-Gamma * t)))
    table = CriticalTimeTable(entries)
    if validate and pop > 0:
        numeric = bracketed_maxima_ud(Gamma, theta, table, convention)
        for entry, t_num in zip(table.entries, numeric):
            if abs(t_num - entry.t_prime) > 1e-6:
                raise ArithmeticError(
                    f"closed-form maximum {entry.kind.value}{entry.n} at {entry.t_prime:.12g} "
                    f"disagrees with the numerical maximum {t_num:.12g}")
    return table


def bracketed_maxima_ud(Gamma: float, theta: float, maxima: CriticalTimeTable,
                        convention: str = "printed") -> list[float]:
    """Numerical maximum of the concurrence between the zeros around each entry."""
    n_max = max((e.n for e in maxima.entries), default=0) + 2
    zeros = np.sort(np.concatenate([
        conc_zeros_ud(Gamma, n_max, convention, theta).times(k)
        for k in (Kind.CONC_ZERO_1, Kind.CONC_ZERO_2)]))
    conc = _conc(Gamma, theta, convention)
    found = []
    for e in maxima.entries:
        i = int(np.searchsorted(zeros, e.t_prime))
        lo, hi = zeros[i - 1], zeros[i]
        pad = 10 * _FD_STEP
        found.append(refine_maximum(conc, lo + pad, hi - pad))
    return found


def conc_maxima_od(Gamma: float, theta: float = math.pi / 2, convention: str = "printed",
                   validate: bool = True) -> CriticalTimeTable:
    """Maxima of the overdamped concurrence.

    With ``W = sqrt(Gamma^2/4 - 1)``, ``eta = arccosh(Gamma/2)`` and
    ``b = arccosh(Gamma^2/4)`` the printed convention gives two maxima
    ``tau_pm = (2 eta +- b) / (2 W)``, separated by the single zero at
    ``eta / W``. The physical convention has one maximum at ``b / (2 W)``.
    """
    W = _require_overdamped(Gamma)
    eta = math.acosh(Gamma / 2)
    b = math.acosh(Gamma**2 / 4)
    conc = _conc(Gamma, theta, convention)
    if convention_sign(convention) < 0:
        early, late = (2 * eta - b) / (2 * W), (2 * eta + b) / (2 * W)
        entries = [CriticalTime(Kind.CONC_MAX_OD_EARLY, 0, early, conc(early)),
                   CriticalTime(Kind.CONC_MAX_OD_LATE, 0, late, conc(late))]
        brackets = [(0.0, eta / W), (eta / W, None)]
    else:
        late = b / (2 * W)
        entries = [CriticalTime(Kind.CONC_MAX_OD_LATE, 0, late, conc(late))]
        brackets = [(0.0, None)]
    if validate and math.sin(theta) != 0:
        for entry, (lo, hi) in zip(entries, brackets):
            if hi is None:
                hi = 2 * entry.t_prime + 1.0
            pad = 10 * _FD_STEP
            t_num = refine_maximum(conc, lo + pad, hi - pad if hi > lo + 2 * pad else hi)
            if abs(t_num - entry.t_prime) > 1e-6 * max(1.0, entry.t_prime):
                raise ArithmeticError(
                    f"closed-form maximum at {entry.t_prime:.12g} disagrees with {t_num:.12g}")
    return CriticalTimeTable(entries)


def x_zeros(Gamma: float, n_max: int, convention: str = "printed") -> list[float]:
    """Zeros of ``x(t')`` (coinciding with ``tau_2n`` when underdamped), at most n_max+1."""
    regime = classify_regime(Gamma)
    sign = convention_sign(convention)
    if regime is Regime.UNDERDAMPED:
        return list(conc_zeros_ud(Gamma, n_max, convention).times(Kind.CONC_ZERO_2))
    if sign > 0:
        return []
    if regime is Regime.CRITICALLY_DAMPED:
        return [1.0]
    return [math.acosh(Gamma / 2) / rate(Gamma)]


def _half_root(Gamma, convention, lo, hi):
    def h(t):
        return float(metrics.x_function(t, Gamma, convention)) - 0.5
    return bisect(h, lo, hi, xtol=XTOL, maxiter=500)


def entropy_half_crossing(Gamma: float, convention: str = "printed") -> float:
    """First root of ``x(t') = 1/2``, where the linear entropy first peaks.

    Bracketed by ``(0, first zero of x)``; when ``x`` has no zero the upper
    end is doubled until ``x`` falls below one half.
    """
    if Gamma < 0:
        raise ValueError("Gamma must be nonnegative")
    zeros = x_zeros(Gamma, 0, convention)
    if zeros:
        hi = zeros[0]
    else:
        hi = 1.0
        while metrics.x_function(hi, Gamma, convention) >= 0.5:
            hi *= 2
    return _half_root(Gamma, convention, 0.0, hi)


def entropy_extrema(Gamma: float, n_max: int, convention: str = "printed",
                    theta: float = math.pi / 2) -> CriticalTimeTable:
    """Entropy extrema at ``tau_4n`` plus the ``x = 1/2`` crossings.

    At ``tau_4n`` (printed: ``(2 arccos(Gamma/2) + n pi) / w``) ``x`` has a
    local maximum equal to ``e^{-Gamma t}``, so the entropy sits on
    ``2 sin^4(theta) e^{-Gamma t}(1 - e^{-Gamma t})``. Where ``x > 1/2`` the
    point is an entropy minimum flanked by two crossings (absolute maxima),
    found by bisection; otherwise it is an entropy maximum. The first
    crossing, before the first zero of ``x``, is always the first maximum.
    """
    w = _require_underdamped(Gamma)
    phi = math.acos(Gamma / 2)
    chi = math.acos(convention_sign(convention) * Gamma / 2)
    zeros = x_zeros(Gamma, n_max + 1, convention)

    def delta(t):
        return float(metrics.linear_entropy_osc1(t, Gamma, theta, convention))

    first = entropy_half_crossing(Gamma, convention)
    entries = [CriticalTime(Kind.ENTROPY_FIRST_MAX, 0, first, delta(first)),
               CriticalTime(Kind.ENTROPY_HALF_CROSS, 0, first, delta(first))]
    crossing = 1
    for n in range(n_max + 1):
        t4 = (phi - chi + (n + 1) * math.pi) / w
        x4 = float(metrics.x_function(t4, Gamma, convention))
        if x4 > 0.5:
            entries.append(CriticalTime(Kind.ENTROPY_MIN_4N, n, t4, delta(t4)))
            for lo, hi in ((zeros[n], t4), (t4, zeros[n + 1])):
                root = _half_root(Gamma, convention, lo, hi)
                entries.append(CriticalTime(Kind.ENTROPY_HALF_CROSS, crossing, root, delta(root)))
                crossing += 1
        else:
            entries.append(CriticalTime(Kind.ENTROPY_MAX_4N, n, t4, delta(t4)))
    return CriticalTimeTable(entries)


def entropy_minima_threshold(convention: str = "printed", xtol: float = 1e-10) -> float:
    """Largest Gamma for which ``tau_40`` is still an entropy minimum."""
    def margin(Gamma):
        w = rate(Gamma)
        t4 = (math.acos(Gamma / 2) - math.acos(convention_sign(convention) * Gamma / 2)
              + math.pi) / w
        return Gamma * t4 - math.log(2)
    return bisect(margin, 1e-6, 1.9, xtol=xtol)


def tau30_approx(Gamma: float) -> float:
    """``pi / (4 + 4 Gamma + 2 Gamma^2)``, an estimate of the first crossing."""
    return math.pi / (4 + 4 * Gamma + 2 * Gamma**2)


def interpolating_crossing(Gamma: float) -> float:
    """Interpolating estimate of the overdamped crossing time, exact at Gamma = 2 to 1/6."""
    if Gamma < 2:
        raise ValueError("the interpolating formula is for Gamma >= 2")
    eta = math.acosh(Gamma / 2)
    return 1.0 / (6 + 4 / math.log(2) * math.sinh(eta * math.tanh(eta / 1.6)))


def interpolation_error(Gamma: float, convention: str = "printed") -> float:
    """``Delta`` defined by ``x(t*) = 0.5 (1 + Delta)`` at the interpolated time."""
    t_star = interpolating_crossing(Gamma)
    return float(metrics.x_function(t_star, Gamma, convention)) / 0.5 - 1.0


def half_time_vs_max_relation(Gamma: float, convention: str = "printed") -> tuple[float, float]:
    """``(tau_0.5 / tau_-, delta_1(tau_-) / 0.5)`` for strong damping.

    ``tau_-`` is the first concurrence maximum; both ratios approach
    ``(0.5, 0.75)`` as Gamma grows.
    """
    table = conc_maxima_od(Gamma, convention=convention, validate=False)
    first = table.entries[0].t_prime
    half = entropy_half_crossing(Gamma, convention)
    ent = float(metrics.linear_entropy_osc1(first, Gamma, math.pi / 2, convention))
    return half / first, ent / 0.5
