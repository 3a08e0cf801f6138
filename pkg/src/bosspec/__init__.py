"""Eigenvalues of a singular Sturm-Liouville problem from thin-film flow.

The problem is ``-(p u')' = mu w u`` on ``(0, 1)`` with

    p(x) = (1-x)**(1+1/eps) (1+x)**(1-1/eps),
    w(x) = (1-x)**(1/eps) (1+x)**(-1/eps) / x,

and ``lambda = eps mu / 2``.  Eigenvalues are computed three ways (Pruefer
shooting on truncated windows, finite differences after a Liouville
transformation, and a three-term recurrence) and checked against kernel
identities and asymptotic bounds.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .asymptotics import AsymptoticBounds, lower_bound, upper_envelope, weyl_estimate
from .coeffs import ProblemParams, p, p_prime, w
from .errors import BOSError, ConvergenceError, DomainError
from .fdspec import fd_extrapolated
from .greens import hs_norm_sq, spectral_sum, trace_integral
from .liouville import BETA, LiouvilleMap, alpha_min, phi, potential_V, psi
from .quad import beta_const, gamma
from .recurrence import recurrence_spectrum, refine_eigen_recurrence
from .shooting import EigenEstimate, Window, shooting_spectrum, solve_window

__all__ = [
    "__version__", "ProblemParams", "p", "w", "p_prime", "BETA", "psi", "phi",
    "potential_V", "alpha_min", "LiouvilleMap", "beta_const", "gamma", "Window",
    "EigenEstimate", "solve_window", "shooting_spectrum", "fd_extrapolated",
    "recurrence_spectrum", "refine_eigen_recurrence", "trace_integral", "hs_norm_sq",
    "spectral_sum", "AsymptoticBounds", "lower_bound", "upper_envelope", "weyl_estimate",
    "BOSError", "DomainError", "ConvergenceError",
]
