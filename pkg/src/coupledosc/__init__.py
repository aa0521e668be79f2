"""Entanglement of two coupled oscillators, one of them damped and driven.

Closed forms for the displaced two-qubit state, its concurrence and linear
entropy, their critical times, and a brute-force master-equation oracle.
"""

from .critical import CriticalTimeTable, Kind
from .density import TwoQubitDensity, rho_tilde
from .metrics import concurrence_closed, concurrence_wootters, linear_entropy_osc1, x_function
from .params import Regime, SystemParams, classify_regime, make_params, scaled_params

__all__ = [
    "CriticalTimeTable", "Kind", "Regime", "SystemParams", "TwoQubitDensity",
    "classify_regime", "concurrence_closed", "concurrence_wootters", "linear_entropy_osc1",
    "make_params", "rho_tilde", "scaled_params", "x_function",
]
