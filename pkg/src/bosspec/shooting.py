"""Pruefer-angle shooting for regular Sturm-Liouville problems.

A problem ``-(p u')' + q u = mu w u`` on ``[a, b]`` with Dirichlet ends is
described by a callable returning ``(1/p, w, q)`` at a point.  Writing
``u = rho sin(theta)``, ``p u' = rho cos(theta)`` gives

    theta' = cos(theta)**2 / p + (mu w - q) sin(theta)**2,

and the ``n``-th eigenvalue is the ``mu`` at which the angle integrated
forward from ``a`` and backward from ``b`` differ by ``n pi`` at an
interior matching point.  Matching keeps the mismatch a smooth, strictly
increasing function of ``mu``; the one-sided end angle is a near-step
function on the truncated operator windows and makes a poor root target.

Truncated windows of the operator are solved in the Liouville gauge:
with ``s = psi(x)`` the problem is ``-g'' + V g = mu g``, and the further
substitution ``x = 1 / (1 + exp(-tau))`` spreads both endpoint layers over
an interval of moderate length in ``tau``.  Then
``ds/dtau = J = (x (1-x) / (1+x))**1/2`` and the Pruefer coefficients are
``(1/p, w, q) = (J, J, V J)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from ._fastshoot import STEP_BUDGET, UNDERFLOW, bos_mismatch
from ._rk import dopri5
from .asymptotics import AsymptoticBounds, lower_bound
from .coeffs import ProblemParams, as_params
from .errors import BracketError, ConvergenceError, DomainError, IntegrationError
from .liouville import BETA, alpha_min

__all__ = [
    "Window", "EigenEstimate", "SLProblem", "GenericSLProblem", "prufer_angle",
    "prufer_mismatch", "bos_window_problem", "solve_sl", "solve_window",
    "convergence_study", "ConvergenceStudy", "shooting_spectrum",
]

Coefficients = Callable[[float], "tuple[float, float, float]"]


@dataclass(frozen=True)
class Window:
    """Truncation ``[10**-m, 1 - 10**-m]`` of the unit interval."""

    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"window index must be a positive integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        if not 0.0 < self.a < self.b < 1.0:
            raise DomainError(f"window m={self.m} is degenerate in double precision")

    @property
    def a(self) -> float:
        return 10.0 ** -self.m

    @property
    def b(self) -> float:
        return 1.0 - 10.0 ** -self.m

    @property
    def tau_a(self) -> float:
        return math.log(self.a) - math.log1p(-self.a)

    @property
    def tau_b(self) -> float:
        return -self.tau_a


@dataclass(frozen=True)
class EigenEstimate:
    """One eigenvalue with its provenance.

    ``mu`` is the stored quantity; ``lam = eps * mu / 2`` is derived from it.
    ``window`` is None for estimates of the untruncated problem.
    """

    n: int
    mu: float
    epsilon: float
    method: str
    window: Window | None
    tol: float
    bracket: tuple[float, float]
    info: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        lo, hi = self.bracket
        if not lo <= self.mu <= hi:
            raise ValueError(f"mu={self.mu} outside its bracket {self.bracket}")

    @property
    def lam(self) -> float:
        return 0.5 * self.epsilon * self.mu

    @property
    def m(self) -> int | None:
        return None if self.window is None else self.window.m


@dataclass(frozen=True)
class SLProblem:
    """Regular problem ``-(p u')' + q u = mu w u`` on ``[a, b]``, Dirichlet at both ends.

    ``coef(x)`` returns ``(1/p(x), w(x), q(x))``; ``p`` and ``w`` must be
    positive on ``[a, b]``.  ``match`` is the interior point where the two
    shooting sweeps meet.  ``kernel``, when given, is a faster equivalent
    of :func:`prufer_mismatch` with signature ``kernel(mu, tol, max_steps)``.
    """

    coef: Coefficients
    a: float
    b: float
    match: float | None = None
    kernel: Callable | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.a < self.b:
            raise DomainError(f"need a < b, got [{self.a}, {self.b}]")
        if self.match is None:
            object.__setattr__(self, "match", 0.5 * (self.a + self.b))
        elif not self.a < self.match < self.b:
            raise DomainError("matching point must be interior")

    @classmethod
    def from_functions(cls, p, w, a, b, q=None, match=None) -> "SLProblem":
        """Build from separate scalar callables for ``p``, ``w`` and optional ``q``."""
        if q is None:
            return cls(lambda x: (1.0 / p(x), w(x), 0.0), a, b, match)
        return cls(lambda x: (1.0 / p(x), w(x), q(x)), a, b, match)


GenericSLProblem = SLProblem


def _ode_tol(tol: float) -> float:
    return min(1e-9, max(1e-12, 1e-3 * tol))


def _rhs(problem: SLProblem, mu: float):
    coef = problem.coef

    def f(x, th):
        ip, wt, q = coef(x)
        s = math.sin(th)
        c = math.cos(th)
        return ip * c * c + (mu * wt - q) * s * s

    return f


def prufer_angle(problem: SLProblem, mu: float, tol: float = 1e-8, *,
                 trajectory: bool = False, max_steps: int = 1_000_000):
    """Integrate the Pruefer angle from ``theta(a) = 0`` to ``x = b``.

    Returns ``theta(b)``, or ``(theta(b), [(x, theta), ...])`` when
    ``trajectory`` is set.  ``tol`` bounds the per-step angle error.

    Raises
    ------
    IntegrationError
        On step-size underflow or an exhausted step budget.
    """
    th, _, path = dopri5(_rhs(problem, mu), problem.a, problem.b, 0.0,
                         rtol=tol, atol=tol, max_steps=max_steps, record=trajectory)
    return (th, path) if trajectory else th


def prufer_mismatch(problem: SLProblem, mu: float, tol: float = 1e-9, *,
                    max_steps: int = 1_000_000) -> float:
    """``theta_left(c) - theta_right(c)`` at the matching point ``c``.

    The left sweep starts from ``theta(a) = 0``, the right sweep from
    ``theta(b) = 0`` backwards.  The mismatch increases strictly with ``mu``
    and equals ``n pi`` exactly at the ``n``-th eigenvalue.
    """
    if problem.kernel is not None:
        return problem.kernel(mu, tol, max_steps)
    f = _rhs(problem, mu)
    left, _, _ = dopri5(f, problem.a, problem.match, 0.0, rtol=tol, atol=tol, max_steps=max_steps)
    right, _, _ = dopri5(f, problem.b, problem.match, 0.0, rtol=tol, atol=tol, max_steps=max_steps)
    return left - right


def _liouville_coefficients(params: ProblemParams):
    ie = params.inv_eps
    ga = 0.5 * ie + 0.25
    gb = 0.5 * ie - 0.25

    def coef(tau):
        # x and 1 - x from the logistic map, each without cancellation
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
        return jac, jac, v * jac

    return coef


def _direct_coefficients(params: ProblemParams):
    ie = params.inv_eps

    def coef(x):
        y = 1.0 - x
        pw = math.exp(ie * (math.log(y) - math.log1p(x)))
        return 1.0 / (y * (1.0 + x) * pw), pw / x, 0.0

    return coef


def bos_window_problem(params, window: Window, gauge: str = "liouville") -> SLProblem:
    """Truncated operator problem on ``window`` with Dirichlet ends.

    Parameters
    ----------
    gauge : {"liouville", "liouville-python", "direct"}
        ``"liouville"`` (default) shoots ``-g'' + V g = mu g`` in the
        logistic variable ``tau`` with the compiled kernel;
        ``"liouville-python"`` is the same problem through the generic
        integrator; ``"direct"`` shoots ``-(p u')' = mu w u`` in ``x``.
        All three have the same eigenvalues; the direct form needs many more
        steps for large ``m`` and is kept as a cross-check.
    """
    params = as_params(params)
    if gauge == "liouville":
        ta, tb, ie = window.tau_a, window.tau_b, params.inv_eps

        def kernel(mu, tol, max_steps):
            d, status = bos_mismatch(float(mu), ie, ta, tb, 0.0, tol, max_steps)
            if status == STEP_BUDGET:
                raise IntegrationError(f"step budget of {max_steps} exhausted")
            if status == UNDERFLOW:
                raise IntegrationError("step size underflow")
            return d

        return SLProblem(_liouville_coefficients(params), ta, tb, 0.0, kernel)
    if gauge == "liouville-python":
        return SLProblem(_liouville_coefficients(params), window.tau_a, window.tau_b, 0.0)
    if gauge == "direct":
        return SLProblem(_direct_coefficients(params), window.a, window.b, 0.5)
    raise ValueError(f"unknown gauge {gauge!r}")


def _find_root(fun, target, lo, f_lo, hi, f_hi, tol, max_iter=200):
    """Illinois regula falsi for ``fun(x) = target`` inside ``[lo, hi]``.

    A bisection step replaces the secant step whenever two consecutive
    iterations failed to halve the bracket.
    """
    g_lo = f_lo - target
    g_hi = f_hi - target
    side = 0
    widths = [hi - lo, hi - lo]
    for _ in range(max_iter):
        if hi - lo <= 2.0 * tol:
            return 0.5 * (lo + hi), (lo, hi)
        if hi - lo > 0.5 * widths[-2]:
            x = 0.5 * (lo + hi)
        else:
            x = hi - g_hi * (hi - lo) / (g_hi - g_lo)
            x = min(max(x, lo + 0.25 * tol), hi - 0.25 * tol)
        g = fun(x) - target
        if g < 0.0:
            lo, g_lo = x, g
            if side == -1:
                g_hi *= 0.5
            side = -1
        elif g > 0.0:
            hi, g_hi = x, g
            if side == 1:
                g_lo *= 0.5
            side = 1
        else:
            return x, (max(lo, x - tol), min(hi, x + tol))
        widths.append(hi - lo)
    raise ConvergenceError(f"root finder did not reach width {2 * tol:g}")


def solve_sl(problem: SLProblem, n: int, tol: float = 1e-8, *, mu_lo: float | None = None,
             mu_hi: float | None = None, max_doublings: int = 60) -> tuple[float, tuple[float, float]]:
    """``n``-th Dirichlet eigenvalue of a regular problem by mismatch matching.

    ``mu_lo`` must lie below the eigenvalue (default 0, valid for ``q >= 0``);
    it is lowered automatically if it does not.  ``mu_hi`` is doubled until
    it encloses the root.

    Returns
    -------
    mu, (mu_lo, mu_hi)
        Bracket of width at most ``2 tol``.
    """
    if n < 1:
        raise DomainError(f"eigenvalue index must be >= 1, got {n}")
    ode_tol = _ode_tol(tol)
    target = n * math.pi

    def fun(mu):
        return prufer_mismatch(problem, mu, ode_tol)

    lo = 0.0 if mu_lo is None else float(mu_lo)
    f_lo = fun(lo)
    k = 0
    while f_lo >= target:
        k += 1
        if k > max_doublings:
            raise BracketError(f"cannot find a lower bracket for n={n}")
        lo = lo - max(1.0, abs(lo))
        f_lo = fun(lo)
    hi = max(lo + 1.0, 10.0) if mu_hi is None else float(mu_hi)
    f_hi = fun(hi)
    k = 0
    while f_hi <= target:
        k += 1
        if k > max_doublings:
            raise BracketError(f"cannot find an upper bracket for n={n}")
        lo, f_lo = hi, f_hi
        hi = 2.0 * hi
        f_hi = fun(hi)
    return _find_root(fun, target, lo, f_lo, hi, f_hi, tol)


def _bounds(params: ProblemParams) -> AsymptoticBounds:
    alpha, _ = alpha_min(params)
    return AsymptoticBounds(BETA, alpha, max(0.75, params.inv_eps ** 2 - 0.25))


def solve_window(params, window: Window | int, n: int, tol: float = 1e-6, *,
                 gauge: str = "liouville", bounds: AsymptoticBounds | None = None) -> EigenEstimate:
    """``mu_n`` of the operator truncated to ``window``.

    The search starts just below ``n**2 pi**2 / beta**2 + alpha``, a lower
    bound for every window, with an upper guess of ``max(4 x that, 10)``.

    Raises
    ------
    BracketError
        When the sweep cannot enclose ``mismatch = n pi``.
    """
    params = as_params(params)
    if not isinstance(window, Window):
        window = Window(window)
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    bounds = bounds or _bounds(params)
    base = lower_bound(n, bounds)
    problem = bos_window_problem(params, window, gauge)
    lo = max(0.0, base - 10.0 * tol)
    mu, bracket = solve_sl(problem, n, tol, mu_lo=lo, mu_hi=max(4.0 * base, 10.0))
    return EigenEstimate(n, mu, params.epsilon, "shooting", window, tol, bracket,
                         info={"gauge": gauge})


def shooting_spectrum(params, window: Window | int, n_max: int, tol: float = 1e-6, *,
                      gauge: str = "liouville") -> list[EigenEstimate]:
    """Eigenvalues ``1..n_max`` on one window."""
    params = as_params(params)
    bounds = _bounds(params)
    return [solve_window(params, window, n, tol, gauge=gauge, bounds=bounds)
            for n in range(1, n_max + 1)]


@dataclass(frozen=True)
class ConvergenceStudy:
    """Window sequence ``lambda_n^(m)`` for one index ``n``."""

    estimates: tuple[EigenEstimate, ...]

    def __iter__(self) -> Iterator[EigenEstimate]:
        return iter(self.estimates)

    def __len__(self) -> int:
        return len(self.estimates)

    def __getitem__(self, i):
        return self.estimates[i]

    @property
    def lambdas(self) -> list[float]:
        return [e.lam for e in self.estimates]

    @property
    def differences(self) -> list[float]:
        """``lambda^(m+1) - lambda^(m)`` for consecutive windows."""
        lam = self.lambdas
        return [b - a for a, b in zip(lam[:-1], lam[1:])]

    def monotone(self, slack: float | None = None) -> bool:
        """Non-increasing in ``m`` up to ``slack`` (default twice the solver tolerance, in lambda)."""
        if slack is None:
            slack = 2.0 * max(e.tol * 0.5 * e.epsilon for e in self.estimates)
        return all(d <= slack for d in self.differences)


def convergence_study(params, n: int, m_range: Sequence[int], tol: float = 1e-6, *,
                      gauge: str = "liouville") -> ConvergenceStudy:
    """Solve index ``n`` on each window in ``m_range`` (which must increase)."""
    params = as_params(params)
    ms = list(m_range)
    if any(b <= a for a, b in zip(ms[:-1], ms[1:])):
        raise DomainError("m_range must be strictly increasing")
    bounds = _bounds(params)
    return ConvergenceStudy(tuple(solve_window(params, m, n, tol, gauge=gauge, bounds=bounds)
                                  for m in ms))
