"""Adaptive Dormand-Prince 5(4) integrator for array-valued ODEs."""

from __future__ import annotations

from typing import Callable

import numpy as np
from numba import njit

from .errors import StepSizeUnderflow

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.zeros((7, 7))
_A[1, :1] = [1 / 5]
_A[2, :2] = [3 / 40, 9 / 40]
_A[3, :3] = [44 / 45, -56 / 15, 32 / 9]
_A[4, :4] = [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]
_A[5, :5] = [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]
_A[6, :6] = [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]
# difference between the 5th and embedded 4th order weights
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


@njit(cache=True)
def _combine(y, stages, coeffs, n, out):
    out[:] = y
    for i in range(n):
        c = coeffs[i]
        if c != 0.0:
            row = stages[i]
            for j in range(y.size):
                out[j] += c * row[j]


@njit(cache=True)
def _error_norm(y, y_new, stages, coeffs, rtol, atol):
    err = np.zeros(y.size, dtype=np.complex128)
    for i in range(7):
        c = coeffs[i]
        if c != 0.0:
            row = stages[i]
            for j in range(y.size):
                err[j] += c * row[j]
    total = 0.0
    for j in range(y.size):
        scale = atol + rtol * max(abs(y[j]), abs(y_new[j]))
        total += (err[j].real ** 2 + err[j].imag ** 2) / scale ** 2
    return np.sqrt(total / y.size)


def integrate(f: Callable, y0: np.ndarray, t_eval, rtol: float = 1e-9, atol: float = 1e-12,
              t0: float = 0.0, h0: float | None = None, max_steps: int = 1_000_000,
              on_step: Callable | None = None) -> list[np.ndarray]:
    """Integrate ``y' = f(t, y)`` from ``t0`` and return ``y`` at each of ``t_eval``.

    ``t_eval`` must be nondecreasing and >= ``t0``; steps are shortened to land
    on every output time exactly. ``on_step(t, y)`` may return a replacement
    for ``y`` after every accepted step (e.g. a symmetrized matrix) or raise to
    abort the run.
    """
    t_eval = np.asarray(t_eval, dtype=float)
    if t_eval.size and (t_eval[0] < t0 or np.any(np.diff(t_eval) < 0)):
        raise ValueError("t_eval must be nondecreasing and start at or after t0")
    shape = np.shape(y0)
    y = np.array(y0, dtype=complex).ravel()

    def rhs(t, v):
        return np.asarray(f(t, v.reshape(shape))).ravel()

    stages = np.empty((7, y.size), dtype=complex)
    t = float(t0)
    stages[0] = rhs(t, y)
    if h0 is None:
        scale = atol + rtol * np.abs(y)
        d0 = np.sqrt(np.mean(np.abs(y / scale) ** 2))
        d1 = np.sqrt(np.mean(np.abs(stages[0] / scale) ** 2))
        h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h = float(h0)
    out = []
    steps = 0
    for target in t_eval:
        while t < target:
            if steps >= max_steps:
                raise StepSizeUnderflow(f"exceeded {max_steps} steps at t={t:.6g}")
            step = min(h, target - t)
            last = step == target - t
            if step < 1e-14 * max(1.0, abs(t)) and not last:
                raise StepSizeUnderflow(f"step size {step:.3e} underflow at t={t:.6g}")
            for i in range(1, 7):
                yi = np.empty_like(y)
                _combine(y, stages, step * _A[i], i, yi)
                stages[i] = rhs(t + _C[i] * step, yi)
            # the last stage is evaluated at the 5th-order solution
            y_new = yi
            err_norm = float(_error_norm(y, y_new, stages, step * _E, rtol, atol))
            steps += 1
            if err_norm <= 1.0:
                t = target if last else t + step
                y = y_new
                stages[0] = stages[6]
                if on_step is not None:
                    replaced = on_step(t, y.reshape(shape))
                    if replaced is not None:
                        # keep the FSAL stage: replacements are rounding-level
                        y = np.asarray(replaced, dtype=complex).ravel()
                factor = _MAX_FACTOR if err_norm == 0 else min(
                    _MAX_FACTOR, _SAFETY * err_norm ** -0.2)
                # a step truncated to hit an output time says little about h
                if not last or factor < 1.0:
                    h = step * factor
            else:
                h = step * max(_MIN_FACTOR, _SAFETY * err_norm ** -0.2)
        out.append(y.reshape(shape).copy())
    return out
