"""Finite-difference eigenvalues of ``-d2/ds2 + V`` on ``(delta, beta - delta)``.

Second-order central differences on a uniform grid with Dirichlet ends give
a symmetric tridiagonal matrix with diagonal ``2/h**2 + V(s_i)`` and
off-diagonal ``-1/h**2``.  Eigenvalues are isolated by bisection on the
Sturm count (the number of negative pivots of ``T - mu I``).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .coeffs import as_params
from .errors import DomainError
from .liouville import BETA, phi_pair, potential_at_x
from .shooting import EigenEstimate

__all__ = [
    "TridiagonalSpectrumProblem", "bos_fd_problem", "laplacian_problem", "sturm_count",
    "fd_eigenvalue", "richardson", "fd_extrapolated", "delta_sweep", "DEFAULT_DELTAS",
]

DEFAULT_DELTAS = (1e-2 * BETA, 3e-3 * BETA, 1e-3 * BETA)


@dataclass(frozen=True)
class TridiagonalSpectrumProblem:
    """Uniform-grid discretisation with ``N`` interior points on ``(lo, hi)``."""

    diag: np.ndarray
    off: float
    lo: float
    hi: float
    delta: float = 0.0

    @property
    def N(self) -> int:
        return len(self.diag)

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / (self.N + 1)

    @classmethod
    def from_potential(cls, potential: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                       N: int, delta: float = 0.0) -> "TridiagonalSpectrumProblem":
        if N < 1:
            raise DomainError("need at least one interior point")
        if not lo < hi:
            raise DomainError("need lo < hi")
        h = (hi - lo) / (N + 1)
        s = lo + h * np.arange(1, N + 1)
        diag = 2.0 / h ** 2 + np.asarray(potential(s), dtype=float)
        return cls(diag, -1.0 / h ** 2, lo, hi, delta)

    def gershgorin(self) -> tuple[float, float]:
        r = 2.0 * abs(self.off)
        return float(self.diag.min() - r), float(self.diag.max() + r)


def laplacian_problem(length: float, N: int) -> TridiagonalSpectrumProblem:
    """Dirichlet Laplacian on ``(0, length)``; eigenvalues ``(4/h**2) sin(k pi / (2(N+1)))**2``."""
    return TridiagonalSpectrumProblem.from_potential(np.zeros_like, 0.0, length, N)


def bos_fd_problem(params, delta: float, N: int) -> TridiagonalSpectrumProblem:
    """Discretised Schroedinger form of the operator on ``(delta, beta - delta)``."""
    params = as_params(params)
    if not 0.0 < delta < 0.5 * BETA:
        raise DomainError(f"delta must lie in (0, beta/2), got {delta}")

    def pot(s):
        x, y = phi_pair(s)
        return potential_at_x(x, params, y)

    return TridiagonalSpectrumProblem.from_potential(pot, delta, BETA - delta, N, delta)


def sturm_count(problem: TridiagonalSpectrumProblem, mu) -> np.ndarray | int:
    """Number of eigenvalues strictly below ``mu`` (vectorised over ``mu``).

    Counts negative pivots of the LDL^T factorisation of ``T - mu I``; a zero
    pivot is replaced by a tiny negative number, the usual guard.
    """
    mus = np.atleast_1d(np.asarray(mu, dtype=float))
    e2 = problem.off ** 2
    guard = np.finfo(float).eps * max(abs(problem.off), 1.0)
    count = np.zeros(mus.shape, dtype=np.int64)
    q = problem.diag[0] - mus
    q = np.where(q == 0.0, -guard, q)
    count += q < 0.0
    for d in problem.diag[1:]:
        q = (d - mus) - e2 / q
        q = np.where(q == 0.0, -guard, q)
        count += q < 0.0
    return int(count[0]) if np.ndim(mu) == 0 else count


def fd_eigenvalue(problem: TridiagonalSpectrumProblem, n: int, tol: float = 1e-10, *,
                  epsilon: float | None = None, probes: int = 16) -> EigenEstimate:
    """``n``-th smallest matrix eigenvalue by Sturm bisection to width ``tol``.

    Each pass evaluates the count at ``probes`` points at once, shrinking the
    bracket by that factor per pass.
    """
    if not 1 <= n <= problem.N:
        raise DomainError(f"index {n} out of range 1..{problem.N}")
    lo, hi = problem.gershgorin()
    while hi - lo > tol:
        pts = np.linspace(lo, hi, probes + 2)[1:-1]
        cnt = sturm_count(problem, pts)
        # count(mu) >= n means mu lies above the n-th eigenvalue
        above = np.nonzero(cnt >= n)[0]
        k = above[0] if above.size else probes
        new_lo = lo if k == 0 else pts[k - 1]
        new_hi = hi if k == probes else pts[k]
        lo, hi = new_lo, new_hi
    mu = float(0.5 * (lo + hi))
    eps = float("nan") if epsilon is None else epsilon
    return EigenEstimate(n, mu, eps, "fd", None, tol, (lo, hi),
                         info={"N": problem.N, "delta": problem.delta})


def richardson(coarse: float, fine: float, order: int = 2) -> float:
    """Extrapolate two values from grids of step ``2h`` and ``h``."""
    r = 2.0 ** order
    return (r * fine - coarse) / (r - 1.0)


def fd_extrapolated(params, n: int, delta: float = DEFAULT_DELTAS[-1], N: int = 2000,
                    tol: float = 1e-10) -> EigenEstimate:
    """Richardson-extrapolated eigenvalue from grids with ``N`` and ``2N + 1`` points.

    ``2N + 1`` interior points exactly halve the step.
    """
    params = as_params(params)
    if N < 3 * n:
        raise DomainError(f"N={N} too small for index {n}")
    c = fd_eigenvalue(bos_fd_problem(params, delta, N), n, tol, epsilon=params.epsilon)
    f = fd_eigenvalue(bos_fd_problem(params, delta, 2 * N + 1), n, tol, epsilon=params.epsilon)
    mu = float(richardson(c.mu, f.mu))
    spread = abs(f.mu - c.mu) / 3.0
    return EigenEstimate(n, mu, params.epsilon, "fd", None, max(tol, spread),
                         (mu - spread, mu + spread),
                         info={"N": N, "delta": delta, "coarse": c.mu, "fine": f.mu})


def delta_sweep(params, n: int, deltas: Sequence[float] = DEFAULT_DELTAS, N: int = 2000,
                tol: float = 1e-10) -> list[EigenEstimate]:
    """Extrapolated estimates for each cutoff; the last entry is the reported value."""
    return [fd_extrapolated(params, n, d, N, tol) for d in deltas]
