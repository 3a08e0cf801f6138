"""Two-sided growth control of the eigenvalues ``mu_n``.

Lower bound:  ``mu_n >= n**2 pi**2 / beta**2 + alpha`` with ``alpha = min V``.

Upper envelope: for large ``n`` and ``0 < delta < beta/2``,
``mu_n - n**2 pi**2 / beta**2 <= F_n(delta)`` where

    F_n(delta) = n**2 pi**2 (1/(beta - 2 delta)**2 - 1/beta**2) + (c_env + nu) / delta**2,

``c_env = max(3/4, 1/eps**2 - 1/4)`` and ``nu > 0`` is slack.  Taking
``delta = n**(-2/3)`` gives growth of order ``n**(4/3)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .coeffs import ProblemParams, as_params
from .errors import DomainError
from .liouville import BETA, alpha_min

__all__ = ["AsymptoticBounds", "lower_bound", "upper_envelope", "weyl_estimate",
           "envelope_onset", "envelope_leading"]


@dataclass(frozen=True)
class AsymptoticBounds:
    """Constants entering the eigenvalue bounds for one epsilon."""

    beta: float
    alpha: float
    c_env: float
    nu: float = 0.5

    def __post_init__(self):
        if not self.nu > 0:
            raise DomainError("slack nu must be positive")

    @classmethod
    def for_params(cls, params, nu: float = 0.5) -> "AsymptoticBounds":
        params = as_params(params)
        alpha, _ = alpha_min(params)
        return cls(BETA, alpha, envelope_constant(params), nu)


def envelope_constant(params) -> float:
    params = as_params(params)
    return max(0.75, params.inv_eps ** 2 - 0.25)


def lower_bound(n, bounds: AsymptoticBounds):
    """``n**2 pi**2 / beta**2 + alpha``."""
    n = np.asarray(n, dtype=float)
    val = n * n * math.pi ** 2 / bounds.beta ** 2 + bounds.alpha
    return float(val) if val.ndim == 0 else val


def upper_envelope(n, delta, bounds: AsymptoticBounds):
    """``F_n(delta)``, an upper bound on ``mu_n - n**2 pi**2 / beta**2`` for large ``n``."""
    d = np.asarray(delta, dtype=float)
    if np.any(d <= 0.0) or np.any(d >= 0.5 * bounds.beta):
        raise DomainError(f"delta must lie in (0, beta/2), got {delta!r}")
    n = np.asarray(n, dtype=float)
    b = bounds.beta
    val = (n * n * math.pi ** 2 * (1.0 / (b - 2.0 * d) ** 2 - 1.0 / b ** 2)
           + (bounds.c_env + bounds.nu) / d ** 2)
    return float(val) if val.ndim == 0 else val


def envelope_leading(n, bounds: AsymptoticBounds):
    """Leading-order form ``(4 pi**2 / beta**3 + c_env + nu) n**(4/3)`` of ``F_n(n**(-2/3))``."""
    n = np.asarray(n, dtype=float)
    val = (4.0 * math.pi ** 2 / bounds.beta ** 3 + bounds.c_env + bounds.nu) * n ** (4.0 / 3.0)
    return float(val) if val.ndim == 0 else val


def weyl_estimate(n, params, beta: float = BETA):
    """Leading-order ``lambda_n`` estimate ``eps n**2 pi**2 / (2 beta**2)``."""
    params = as_params(params)
    n = np.asarray(n, dtype=float)
    val = 0.5 * params.epsilon * n * n * math.pi ** 2 / beta ** 2
    return float(val) if val.ndim == 0 else val


def envelope_onset(ns: Sequence[int], mus: Sequence[float], bounds: AsymptoticBounds) -> int | None:
    """Smallest ``n0`` in ``ns`` such that the envelope holds for every listed ``n >= n0``.

    Returns None when the largest listed index already violates the envelope.
    """
    ns = list(ns)
    ok = [mu - n * n * math.pi ** 2 / bounds.beta ** 2 <= upper_envelope(n, n ** (-2.0 / 3.0), bounds)
          for n, mu in zip(ns, mus)]
    onset = None
    for n, good in sorted(zip(ns, ok), reverse=True):
        if not good:
            break
        onset = n
    return onset
