"""Adaptive embedded Runge-Kutta 5(4) pair for complex vector fields.

Dormand-Prince coefficients with the first-same-as-last optimisation.
The state is a 1-D complex numpy array; the independent variable is a
real path parameter (arc length along the segments used by the callers).
Deterministic: no randomness, fixed evaluation order.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import StepUnderflowError

__all__ = ["integrate_rk54"]

_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
_B5 = np.array([35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0])
_B4 = np.array([5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0])
_E = _B5 - _B4
_C = np.array([0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0])


def integrate_rk54(
    f: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    t1: float,
    y0: np.ndarray,
    tol: float,
    *,
    max_step: float = 0.5,
    on_accept: Callable[[float, np.ndarray], None] | None = None,
) -> np.ndarray:
    """Integrate y' = f(t, y) from t0 to t1 (t1 >= t0) with local error
    per step controlled at ``tol`` (mixed absolute/relative)."""
    span = t1 - t0
    if span < 0:
        raise ValueError("integrate_rk54 expects t1 >= t0")
    y = np.array(y0, dtype=complex)
    if span == 0.0:
        return y
    t = t0
    h = min(max_step, span, 0.1)
    h_floor = 1e-13 * max(1.0, span)
    k = [np.empty_like(y) for _ in range(7)]
    k[0] = f(t, y)
    nfail = 0
    while t < t1:
        h = min(h, t1 - t, max_step)
        if h < h_floor:
            raise StepUnderflowError(f"step size underflow at t = {t} (h = {h})")
        for i in range(1, 7):
            yi = y.copy()
            a = _A[i]
            for j, aij in enumerate(a):
                if aij != 0.0:
                    yi += (h * aij) * k[j]
            k[i] = f(t + _C[i] * h, yi)
        y_new = y.copy()
        for j in range(7):
            if _B5[j] != 0.0:
                y_new += (h * _B5[j]) * k[j]
        err_vec = np.zeros_like(y)
        for j in range(7):
            if _E[j] != 0.0:
                err_vec += (h * _E[j]) * k[j]
        scale = tol + tol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.sqrt(np.mean(np.abs(err_vec / scale) ** 2)))
        if err <= 1.0:
            t += h
            y = y_new
            k[0] = k[6]  # first-same-as-last
            if on_accept is not None:
                on_accept(t, y)
            nfail = 0
        else:
            nfail += 1
            if nfail > 60:
                raise StepUnderflowError(f"persistent step rejection at t = {t}")
        factor = 0.9 * err ** -0.2 if err > 0.0 else 5.0
        h *= min(5.0, max(0.2, factor))
    return y
