"""Kernel of the inverse operator and the spectral-sum identities.

The inverse has kernel ``G(x, y) = gamma(min(x, y))`` with respect to the
weight ``w``, where ``gamma(x) = int_0^x dt / p(t)``.  Two global checks tie
the kernel to the eigenvalues:

* trace:  ``int_0^1 gamma(x) w(x) dx``  versus  ``sum 1/mu_n``;
* Hilbert-Schmidt:  ``int int G**2 w w``  versus  ``sum 1/mu_n**2``.

Both integrands are rewritten with ``gamma = (1-x)**(-1/eps) gamma_s`` so
that the large and small endpoint factors cancel analytically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .asymptotics import AsymptoticBounds, lower_bound, upper_envelope
from .coeffs import _check, as_params
from .errors import DomainError
from .quad import gamma, gamma_scaled, quad

__all__ = [
    "kernel_G", "KernelEval", "trace_integral", "hs_norm_sq", "tail_weight",
    "SpectralSum", "spectral_sum",
]


def kernel_G(x, y, params):
    """``G(x, y) = gamma(min(x, y))``; infinite only at ``(1, 1)``."""
    params = as_params(params)
    xs = float(_check(x, 0.0, 1.0, False, False, "kernel_G"))
    ys = float(_check(y, 0.0, 1.0, False, False, "kernel_G"))
    return gamma(min(xs, ys), params)


class KernelEval:
    """Kernel evaluator that memoises ``gamma`` for one epsilon."""

    def __init__(self, params, maxsize: int = 4096):
        self.params = as_params(params)
        self._gamma = lru_cache(maxsize=maxsize)(lambda t: gamma(t, self.params))

    def gamma(self, x: float) -> float:
        return self._gamma(float(_check(x, 0.0, 1.0, False, False, "gamma")))

    def G(self, x: float, y: float) -> float:
        xs = float(_check(x, 0.0, 1.0, False, False, "G"))
        ys = float(_check(y, 0.0, 1.0, False, False, "G"))
        return self._gamma(min(xs, ys))


def _vectorize(fun):
    def wrapped(arr):
        return np.array([fun(float(t)) for t in np.atleast_1d(arr)])

    return wrapped


def trace_integral(params, tol: float = 1e-10) -> float:
    """``int_0^1 gamma(x) w(x) dx = int_0^1 gamma_s(x) / (x (1+x)**(1/eps)) dx``.

    The reduced integrand is bounded: it tends to 1 at ``x = 0`` and to
    ``gamma_s(1) 2**(-1/eps)`` at ``x = 1``.
    """
    params = as_params(params)
    ie = params.inv_eps
    if ie == 1.0:
        # gamma_s(x) = x here, so the integrand is 1/(1+x)
        val, _ = quad(lambda x: 1.0 / (1.0 + x), 0.0, 1.0, tol=tol)
        return val

    def f(x):
        if x == 0.0:
            return 1.0
        return gamma_scaled(x, params, tol * 1e-2) / (x * (1.0 + x) ** ie)

    val, _ = quad(_vectorize(f), 0.0, 1.0, tol=tol)
    return val


def tail_weight(y: float, params, tol: float = 1e-12) -> float:
    """``W_s(y) = (1-y)**(-1-1/eps) int_y^1 w(x) dx``.

    With ``x = y + (1-y) sigma`` this is
    ``int_0^1 (1-sigma)**(1/eps) / (x (1+x)**(1/eps)) d sigma``, which has a
    logarithmic peak at ``sigma = 0`` when ``y`` is small.
    """
    params = as_params(params)
    ie = params.inv_eps
    y = float(y)
    if not 0.0 < y < 1.0:
        raise DomainError(f"tail_weight needs 0 < y < 1, got {y}")
    q = 1.0 - y

    def f(sig):
        x = y + q * sig
        return np.exp(ie * (np.log1p(-sig) - np.log1p(x))) / x

    pts = []
    t = y
    while t < 0.5:
        pts.append(t)
        t *= 4.0
    val, _ = quad(f, 0.0, 1.0, tol=tol, points=pts, hi_exponent=ie)
    return val


def hs_norm_sq(params, tol: float = 1e-9) -> float:
    """``int int G(x,y)**2 w(x) w(y) dx dy`` by symmetry as one iterated integral.

    ``2 int_0^1 gamma(y)**2 w(y) (int_y^1 w(x) dx) dy`` becomes
    ``2 int_0^1 gamma_s(y)**2 W_s(y) (1-y) / (y (1+y)**(1/eps)) dy``,
    whose integrand vanishes at both ends.
    """
    params = as_params(params)
    ie = params.inv_eps

    def f(y):
        if y == 0.0 or y == 1.0:
            return 0.0
        gs = gamma_scaled(y, params, tol * 1e-3)
        return gs * gs * tail_weight(y, params, tol * 1e-3) * (1.0 - y) / (y * (1.0 + y) ** ie)

    pts = [1e-6, 1e-4, 1e-2]
    val, _ = quad(_vectorize(f), 0.0, 1.0, tol=tol, points=pts)
    return 2.0 * val


@dataclass(frozen=True)
class SpectralSum:
    """``sum_{n<=K} mu_n**-power`` plus a bracketed tail ``[tail_lo, tail_hi]``."""

    power: int
    K: int
    partial: float
    tail_lo: float
    tail_hi: float

    @property
    def lo(self) -> float:
        return self.partial + self.tail_lo

    @property
    def hi(self) -> float:
        return self.partial + self.tail_hi

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, value: float) -> bool:
        return self.lo <= value <= self.hi


def _tail(fun_n, start: int, n_direct: int = 1_000_000) -> float:
    """``sum_{start <= n < start + n_direct} fun_n(n)``."""
    ns = np.arange(start, start + n_direct, dtype=float)
    return math.fsum(fun_n(ns))


def _remainder_upper(end: int, power: int, bounds: AsymptoticBounds) -> float:
    """Bound on ``sum_{n>=end} (n**2 a + alpha)**-power`` with ``a = pi**2/beta**2``.

    The terms decrease, so the sum is at most the integral from ``end - 1``.
    """
    a = math.pi ** 2 / bounds.beta ** 2
    x0 = end - 1.0
    corr = 1.0 + bounds.alpha / (a * x0 * x0)
    corr = min(corr, 1.0)
    return (a * corr) ** -power * x0 ** (1 - 2 * power) / (2 * power - 1)


def spectral_sum(mus: Sequence[float], power: int, bounds: AsymptoticBounds,
                 onset: int | None = None) -> SpectralSum:
    """``sum mu_n**-power`` from the listed eigenvalues ``mu_1..mu_K`` plus tail bounds.

    The upper tail uses ``mu_n >= n**2 pi**2 / beta**2 + alpha``.  The lower
    tail uses ``mu_n <= n**2 pi**2 / beta**2 + F_n(n**(-2/3))``, valid beyond
    the envelope onset (taken as ``K + 1`` when not given); terms it does not
    cover are bounded below by zero.
    """
    if power < 1:
        raise DomainError("power must be >= 1")
    mus = np.asarray(mus, dtype=float)
    K = len(mus)
    partial = math.fsum(mus ** -float(power))
    start = K + 1 if onset is None else max(K + 1, onset)
    b = bounds.beta

    def upper_terms(n):
        return lower_bound(n, bounds) ** -float(power)

    def lower_terms(n):
        base = n * n * math.pi ** 2 / b ** 2
        return (base + upper_envelope(n, n ** (-2.0 / 3.0), bounds)) ** -float(power)

    n_direct = 1_000_000
    tail_hi = _tail(upper_terms, K + 1, n_direct) + _remainder_upper(K + 1 + n_direct, power, bounds)
    # terms below the onset and beyond the direct range only add positive amounts
    tail_lo = _tail(lower_terms, start, n_direct - (start - K - 1))
    return SpectralSum(power, K, partial, tail_lo, tail_hi)
