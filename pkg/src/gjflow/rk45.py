"""Embedded Dormand-Prince 5(4) integrator with PI step control.

Small and explicit on purpose: the deformation systems are low-dimensional
and non-stiff, and the caller needs rejection counts, a hard step-size
floor (pole-candidate diagnostic), and a per-step validity callback.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import StepCollapse

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_ORDER = 5.0


@dataclass
class IntegrationStats:
    accepted: int = 0
    rejected: int = 0
    fevals: int = 0


def integrate_rk45(rhs: Callable[[float, np.ndarray], np.ndarray],
                   t0: float, t1: float, y0: np.ndarray,
                   rtol: float = 1e-9, atol: float = 1e-12,
                   sample_times: Optional[np.ndarray] = None,
                   min_step_frac: float = 1e-12,
                   on_accept: Optional[Callable[[float, np.ndarray], None]] = None):
    """Integrate y' = rhs(t, y) from t0 to t1, landing exactly on sample_times.

    Returns (samples, stats) where samples[i] is the state at sample_times[i].
    Raises StepCollapse when the accepted step would fall below
    min_step_frac * |t1 - t0|.
    """
    y = np.asarray(y0, dtype=float).copy()
    if sample_times is None:
        sample_times = np.array([t1])
    sample_times = np.asarray(sample_times, dtype=float)
    span = t1 - t0
    if span == 0.0:
        raise ValueError("t1 must differ from t0")
    direction = 1.0 if span > 0 else -1.0
    if np.any(direction * np.diff(sample_times) < 0):
        raise ValueError("sample times must be ordered toward t1")
    h_floor = min_step_frac * abs(span)

    stats = IntegrationStats()
    out = np.empty((len(sample_times), len(y)))
    t = t0
    k1 = rhs(t, y)
    stats.fevals += 1
    # conservative initial step; the controller adapts within a few steps
    h = direction * min(abs(span) * 1e-3, 1e-2)
    err_prev = 1.0
    isample = 0
    while isample < len(sample_times) and sample_times[isample] == t0:
        out[isample] = y
        isample += 1

    ks = np.empty((7, len(y)))
    while isample < len(sample_times):
        target = sample_times[isample]
        # clip the trial step to land on the next sample; the controller's
        # natural step h is only updated from unclipped attempts
        hit = direction * (t + h) >= direction * target
        h_try = target - t if hit else h
        ks[0] = k1
        for i in range(1, 7):
            yi = y + h_try * (_A[i] @ ks[:i])
            ks[i] = rhs(t + _C[i] * h_try, yi)
        stats.fevals += 6
        y_new = y + h_try * (_B5 @ ks)  # FSAL: stage 7 was evaluated at y_new
        err_vec = h_try * (_E @ ks)
        tol = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.sqrt(np.mean((err_vec / tol) ** 2)))
        if err <= 1.0:
            t_new = target if hit else t + h_try
            stats.accepted += 1
            if on_accept is not None:
                on_accept(t_new, y_new)
            t, y, k1 = t_new, y_new, ks[6].copy()
            if hit:
                while isample < len(sample_times) and sample_times[isample] == t:
                    out[isample] = y
                    isample += 1
            else:
                if err == 0.0:
                    factor = _MAX_FACTOR
                else:
                    factor = _SAFETY * err ** (-0.7 / _ORDER) \
                        * err_prev ** (0.4 / _ORDER)
                    factor = min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
                err_prev = max(err, 1e-4)
                h = direction * abs(h_try) * factor
        else:
            stats.rejected += 1
            factor = max(_MIN_FACTOR, _SAFETY * err ** (-1.0 / _ORDER))
            h = direction * abs(h_try) * min(1.0, factor)
            if abs(h) < h_floor:
                raise StepCollapse(
                    f"step size {abs(h):.3e} below floor {h_floor:.3e} at t = {t}",
                    t=t,
                )
    return out, stats
