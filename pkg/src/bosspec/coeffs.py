"""Coefficient functions of the Sturm-Liouville form of the BOS operator.

The eigenproblem is ``-(p u')' = mu w u`` on ``(0, 1)`` with

    p(x) = (1 - x)**(1 + 1/eps) * (1 + x)**(1 - 1/eps)
    w(x) = (1 - x)**(1/eps) * (1 + x)**(-1/eps) / x

Every evaluator accepts scalars or arrays and returns the same shape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["ProblemParams", "p", "w", "p_prime", "w_over_p", "as_params"]


@dataclass(frozen=True)
class ProblemParams:
    """The viscosity-like parameter ``epsilon`` of the operator.

    Only the open interval ``0 < epsilon < 2`` is admissible.
    """

    epsilon: float

    def __post_init__(self):
        eps = float(self.epsilon)
        if not math.isfinite(eps) or not 0.0 < eps < 2.0:
            raise DomainError(f"epsilon must lie in the open interval (0, 2), got {self.epsilon!r}")
        object.__setattr__(self, "epsilon", eps)

    @property
    def inv_eps(self) -> float:
        return 1.0 / self.epsilon

    def mu_to_lambda(self, mu):
        return 0.5 * self.epsilon * mu

    def lambda_to_mu(self, lam):
        return 2.0 * lam / self.epsilon


def as_params(params) -> ProblemParams:
    """Accept a :class:`ProblemParams` or a bare epsilon."""
    if isinstance(params, ProblemParams):
        return params
    return ProblemParams(params)


def _check(x, lo, hi, lo_open, hi_open, name):
    arr = np.asarray(x, dtype=float)
    bad = ~np.isfinite(arr)
    bad |= (arr <= lo) if lo_open else (arr < lo)
    bad |= (arr >= hi) if hi_open else (arr > hi)
    if np.any(bad):
        lb = "(" if lo_open else "["
        rb = ")" if hi_open else "]"
        raise DomainError(f"{name}: argument outside {lb}{lo}, {hi}{rb}: {x!r}")
    return arr


def _out(arr, x):
    return float(arr) if np.ndim(x) == 0 else arr


def _pow(base, expo):
    # 0**expo is returned as exactly 0 (expo > 0) so that p(1) == 0 without NaN.
    base = np.asarray(base, dtype=float)
    with np.errstate(divide="ignore"):
        safe = np.where(base > 0.0, base, 1.0)
        res = np.exp(expo * np.log(safe))
    if expo > 0:
        return np.where(base > 0.0, res, 0.0)
    return np.where(base > 0.0, res, np.inf)


def p(x, params) -> float | np.ndarray:
    """Leading coefficient ``p(x)`` on ``[0, 1]``; ``p(0) = 1`` and ``p(1) = 0``."""
    params = as_params(params)
    arr = _check(x, 0.0, 1.0, False, False, "p")
    ie = params.inv_eps
    val = _pow(1.0 - arr, 1.0 + ie) * _pow(1.0 + arr, 1.0 - ie)
    return _out(val, x)


def w(x, params) -> float | np.ndarray:
    """Weight ``w(x)`` on the open interval; diverges like ``1/x`` at 0."""
    params = as_params(params)
    arr = _check(x, 0.0, 1.0, True, True, "w")
    ie = params.inv_eps
    val = _pow(1.0 - arr, ie) * _pow(1.0 + arr, -ie) / arr
    return _out(val, x)


def p_prime(x, params) -> float | np.ndarray:
    """Closed-form derivative of :func:`p` on ``[0, 1)``.

    Uses ``p'(x) = -2 (1-x)**(1/eps) (1+x)**(-1/eps) (1/eps + x)``, which is
    free of the ``(1-x)`` cancellation in the product-rule form.
    """
    params = as_params(params)
    arr = _check(x, 0.0, 1.0, False, True, "p_prime")
    ie = params.inv_eps
    val = -2.0 * _pow(1.0 - arr, ie) * _pow(1.0 + arr, -ie) * (ie + arr)
    return _out(val, x)


def w_over_p(x) -> float | np.ndarray:
    """``w(x)/p(x) = 1 / (x (1-x) (1+x))``; the epsilon exponents cancel exactly."""
    arr = _check(x, 0.0, 1.0, True, True, "w_over_p")
    return _out(1.0 / (arr * (1.0 - arr) * (1.0 + arr)), x)
