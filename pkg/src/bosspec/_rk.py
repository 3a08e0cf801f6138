"""Scalar Dormand-Prince 5(4) integrator with adaptive step control."""
from __future__ import annotations

import math
from typing import Callable

from .errors import IntegrationError

_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1 = 35 / 384 - 5179 / 57600
_E3 = 500 / 1113 - 7571 / 16695
_E4 = 125 / 192 - 393 / 640
_E5 = -2187 / 6784 + 92097 / 339200
_E6 = 11 / 84 - 187 / 2100
_E7 = -1 / 40


def dopri5(f: Callable[[float, float], float], t0: float, t1: float, y0: float, *,
           rtol: float = 1e-10, atol: float = 1e-10, h0: float | None = None,
           max_steps: int = 1_000_000, record: bool = False):
    """Integrate the scalar ODE ``y' = f(t, y)`` from ``t0`` to ``t1``.

    Works in either direction.  Returns ``(y1, n_steps, path)`` where ``path``
    is a list of accepted ``(t, y)`` pairs when ``record`` is set, else None.

    Raises
    ------
    IntegrationError
        If the step size underflows or ``max_steps`` attempts are used.
    """
    span = t1 - t0
    if span == 0.0:
        return y0, 0, [(t0, y0)] if record else None
    direction = 1.0 if span > 0 else -1.0
    h = h0 if h0 is not None else 1e-3 * span
    h = math.copysign(abs(h), direction)
    t, y = t0, y0
    k1 = f(t, y)
    path = [(t, y)] if record else None
    n = 0
    while direction * (t1 - t) > 0.0:
        if n >= max_steps:
            raise IntegrationError(f"step budget of {max_steps} exhausted at t={t:.6g}")
        if direction * (t + h - t1) > 0.0:
            h = t1 - t
        k2 = f(t + _C2 * h, y + h * _A21 * k1)
        k3 = f(t + _C3 * h, y + h * (_A31 * k1 + _A32 * k2))
        k4 = f(t + _C4 * h, y + h * (_A41 * k1 + _A42 * k2 + _A43 * k3))
        k5 = f(t + _C5 * h, y + h * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
        k6 = f(t + h, y + h * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5))
        y_new = y + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
        k7 = f(t + h, y_new)
        err = abs(h * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7))
        ratio = err / (atol + rtol * max(abs(y), abs(y_new)))
        n += 1
        if ratio <= 1.0:
            t_new = t1 if h == t1 - t else t + h
            t, y, k1 = t_new, y_new, k7
            if record:
                path.append((t, y))
        fac = 5.0 if ratio == 0.0 else min(5.0, max(0.2, 0.9 * ratio ** -0.2))
        h *= fac
        if abs(h) <= 1e-14 * max(1.0, abs(t)):
            raise IntegrationError(f"step size underflow at t={t:.6g}")
    return y, n, path
