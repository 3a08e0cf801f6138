"""Compiled Pruefer mismatch for the operator windows in the Liouville gauge.

Same scheme as :func:`bosspec._rk.dopri5` with the right-hand side inlined.
Without numba the functions run as plain Python.
"""
from __future__ import annotations

import math

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

HAVE_NUMBA = njit.__module__.startswith("numba")

# status codes
OK = 0
STEP_BUDGET = 1
UNDERFLOW = 2


@njit(cache=True)
def _rhs(tau, th, mu, ga, gb):
    if tau >= 0.0:
        e = math.exp(-tau)
        x = 1.0 / (1.0 + e)
        y = e / (1.0 + e)
    else:
        e = math.exp(tau)
        x = e / (1.0 + e)
        y = 1.0 / (1.0 + e)
    xp = 1.0 + x
    l1 = -0.25 / x - ga / y - gb / xp
    l2 = 0.25 / (x * x) - ga / (y * y) + gb / (xp * xp)
    v = (l2 + l1 * l1) * x * y * xp + 0.5 * l1 * (1.0 - 3.0 * x * x)
    jac = math.sqrt(x * y / xp)
    s = math.sin(th)
    c = math.cos(th)
    return jac * c * c + (mu - v) * jac * s * s


@njit(cache=True)
def _sweep(t0, t1, mu, ga, gb, tol, max_steps):
    span = t1 - t0
    direction = 1.0 if span > 0 else -1.0
    h = 1e-3 * span
    t = t0
    y = 0.0
    k1 = _rhs(t, y, mu, ga, gb)
    n = 0
    while direction * (t1 - t) > 0.0:
        if n >= max_steps:
            return y, STEP_BUDGET
        if direction * (t + h - t1) > 0.0:
            h = t1 - t
        k2 = _rhs(t + h / 5.0, y + h * (k1 / 5.0), mu, ga, gb)
        k3 = _rhs(t + 3.0 * h / 10.0, y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2), mu, ga, gb)
        k4 = _rhs(t + 4.0 * h / 5.0,
                  y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3), mu, ga, gb)
        k5 = _rhs(t + 8.0 * h / 9.0,
                  y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2
                           + 64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4), mu, ga, gb)
        k6 = _rhs(t + h,
                  y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 + 46732.0 / 5247.0 * k3
                           + 49.0 / 176.0 * k4 - 5103.0 / 18656.0 * k5), mu, ga, gb)
        y_new = y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4
                         - 2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6)
        k7 = _rhs(t + h, y_new, mu, ga, gb)
        err = abs(h * ((35.0 / 384.0 - 5179.0 / 57600.0) * k1
                       + (500.0 / 1113.0 - 7571.0 / 16695.0) * k3
                       + (125.0 / 192.0 - 393.0 / 640.0) * k4
                       + (-2187.0 / 6784.0 + 92097.0 / 339200.0) * k5
                       + (11.0 / 84.0 - 187.0 / 2100.0) * k6
                       - 1.0 / 40.0 * k7))
        ratio = err / (tol + tol * max(abs(y), abs(y_new)))
        n += 1
        if ratio <= 1.0:
            if h == t1 - t:
                t = t1
            else:
                t = t + h
            y = y_new
            k1 = k7
        if ratio == 0.0:
            fac = 5.0
        else:
            fac = min(5.0, max(0.2, 0.9 * ratio ** -0.2))
        h *= fac
        if abs(h) <= 1e-14 * max(1.0, abs(t)):
            return y, UNDERFLOW
    return y, OK


@njit(cache=True)
def bos_mismatch(mu, inv_eps, ta, tb, tc, tol, max_steps):
    """Return ``(theta_left(tc) - theta_right(tc), status)``."""
    ga = 0.5 * inv_eps + 0.25
    gb = 0.5 * inv_eps - 0.25
    left, s1 = _sweep(ta, tc, mu, ga, gb, tol, max_steps)
    if s1 != OK:
        return left, s1
    right, s2 = _sweep(tb, tc, mu, ga, gb, tol, max_steps)
    return left - right, s2
