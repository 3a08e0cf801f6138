"""Liouville change of variables to a Schroedinger operator on ``(0, beta)``.

``psi(t) = int_0^t (y (1-y) (1+y))**-0.5 dy`` maps ``[0, 1]`` onto
``[0, beta]`` and ``phi`` is its inverse.  With the gauge factor
``c = k o phi``,

    k(z) = z**(1/4) (1-z)**(-1/(2 eps) - 1/4) (1+z)**(1/(2 eps) - 1/4),

the weighted problem becomes ``-g'' + V g = mu g`` with Dirichlet conditions.

``phi`` is evaluated in square-root variables so that both ``phi`` and
``1 - phi`` keep full relative precision: ``r = sqrt(phi)`` on the left half
and ``q = sqrt(1 - phi)`` on the right half, each found by Newton's method
on an integral that a fixed 32-point Gauss-Legendre rule resolves to
rounding level.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .coeffs import ProblemParams, _check, _out, _pow, as_params
from .errors import ConvergenceError, DomainError

__all__ = [
    "BETA", "psi", "phi", "phi_pair", "phi_prime", "phi_dprime",
    "k", "k_prime", "k_dprime", "c", "c_prime", "c_dprime",
    "potential_V", "potential_appendix", "potential_at_x", "asymptotic_V",
    "alpha_min", "LiouvilleMap",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(32)
_GL_U = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def _left_int(r):
    """``psi(r**2) = 2 int_0^r (1 - u**4)**-1/2 du`` for ``0 <= r <= 2**-1/2``."""
    r = np.asarray(r, dtype=float)
    u = r[..., None] * _GL_U
    return r * np.sum(_GL_W * 2.0 / np.sqrt((1.0 - u * u) * (1.0 + u * u)), axis=-1)


def _right_int(q):
    """``beta - psi(1 - q**2) = int_0^q 2 ((1 - v**2)(2 - v**2))**-1/2 dv``."""
    q = np.asarray(q, dtype=float)
    v = q[..., None] * _GL_U
    return q * np.sum(_GL_W * 2.0 / np.sqrt((1.0 - v * v) * (2.0 - v * v)), axis=-1)


_R_HALF = math.sqrt(0.5)
_S_HALF = float(_left_int(_R_HALF))
BETA = _S_HALF + float(_right_int(_R_HALF))


def psi(t, params=None):
    """``psi(t)`` on ``[0, 1]``; epsilon-independent, ``params`` is accepted for symmetry."""
    arr = _check(t, 0.0, 1.0, False, False, "psi")
    left = arr <= 0.5
    with np.errstate(invalid="ignore"):
        lv = _left_int(np.sqrt(np.where(left, arr, 0.0)))
        rv = BETA - _right_int(np.sqrt(np.where(left, 0.0, 1.0 - arr)))
    return _out(np.where(left, lv, rv), t)


def _newton(fun, dfun, target, x0):
    # fun is increasing and convex with fun(x0) >= target, so iterates decrease monotonically.
    x = x0.copy()
    for _ in range(60):
        step = (fun(x) - target) / dfun(x)
        x_new = np.maximum(x - step, 0.0)
        if np.all(np.abs(x_new - x) <= 4e-16 * np.maximum(x_new, 1e-300)):
            return x_new
        x = x_new
    if np.all(np.abs(fun(x) - target) <= 1e-14 * np.maximum(target, 1e-300)):
        return x
    raise ConvergenceError("inversion of psi did not converge")


def phi_pair(s, gap=None):
    """Return ``(phi(s), 1 - phi(s))``, each to full relative precision.

    ``gap`` may supply ``beta - s`` directly when the caller knows it more
    accurately than the subtraction would give.
    """
    arr = _check(s, 0.0, BETA, False, False, "phi")
    g = BETA - arr if gap is None else np.asarray(gap, dtype=float)
    arr1 = np.atleast_1d(arr)
    g1 = np.atleast_1d(g) * np.ones_like(arr1)
    z = np.empty_like(arr1)
    y = np.empty_like(arr1)
    left = arr1 <= _S_HALF
    if np.any(left):
        sl = arr1[left]
        r = _newton(_left_int, lambda r: 2.0 / np.sqrt(1.0 - r ** 4), sl, 0.5 * sl)
        z[left] = r * r
        y[left] = 1.0 - r * r
    right = ~left
    if np.any(right):
        gr = g1[right]
        q = _newton(_right_int, lambda q: 2.0 / np.sqrt((1.0 - q * q) * (2.0 - q * q)),
                    gr, gr / math.sqrt(2.0))
        y[right] = q * q
        z[right] = 1.0 - q * q
    if np.ndim(s) == 0:
        return float(z[0]), float(y[0])
    return z.reshape(np.shape(arr)), y.reshape(np.shape(arr))


def phi(s, params=None):
    """Inverse of :func:`psi`; ``phi(0) = 0`` and ``phi(beta) = 1``."""
    return phi_pair(s)[0]


def _phi_prime_zy(z, y):
    return np.sqrt(z * y * (1.0 + z))


def phi_prime(s, params=None):
    """``phi' = (phi (1 - phi) (1 + phi))**1/2``."""
    z, y = phi_pair(s)
    return _out(_phi_prime_zy(np.asarray(z), np.asarray(y)), s)


def phi_dprime(s, params=None):
    """``phi'' = (1 - 3 phi**2) / 2``, the derivative of ``phi'`` along ``s``."""
    z, _ = phi_pair(s)
    return _out(0.5 * (1.0 - 3.0 * np.asarray(z) ** 2), s)


def _gauge_exponents(params: ProblemParams):
    ie = params.inv_eps
    return 0.5 * ie + 0.25, 0.5 * ie - 0.25


def _k_log_derivs(z, y, params):
    """``k'/k`` and ``k''/k`` at ``z`` with ``y = 1 - z``."""
    a, b = _gauge_exponents(params)
    d1 = 0.25 / z + a / y + b / (1.0 + z)
    dd = -0.25 / (z * z) + a / (y * y) - b / (1.0 + z) ** 2
    return d1, dd + d1 * d1


def _k_zy(z, y, params):
    a, b = _gauge_exponents(params)
    return _pow(z, 0.25) * _pow(y, -a) * _pow(1.0 + z, b)


def k(z, params, one_minus_z=None):
    """Gauge function ``k`` on ``(0, 1)``; ``one_minus_z`` overrides ``1 - z``."""
    params = as_params(params)
    arr = _check(z, 0.0, 1.0, True, True, "k")
    y = 1.0 - arr if one_minus_z is None else np.asarray(one_minus_z, dtype=float)
    return _out(_k_zy(arr, y, params), z)


def k_prime(z, params, one_minus_z=None):
    params = as_params(params)
    arr = _check(z, 0.0, 1.0, True, True, "k_prime")
    y = 1.0 - arr if one_minus_z is None else np.asarray(one_minus_z, dtype=float)
    d1, _ = _k_log_derivs(arr, y, params)
    return _out(_k_zy(arr, y, params) * d1, z)


def k_dprime(z, params, one_minus_z=None):
    params = as_params(params)
    arr = _check(z, 0.0, 1.0, True, True, "k_dprime")
    y = 1.0 - arr if one_minus_z is None else np.asarray(one_minus_z, dtype=float)
    _, d2 = _k_log_derivs(arr, y, params)
    return _out(_k_zy(arr, y, params) * d2, z)


def _interior(s, name):
    return _check(s, 0.0, BETA, True, True, name)


def _c_all(s, params):
    """``c, c', c''`` together with ``phi, 1 - phi, phi', phi''``."""
    z, y = phi_pair(s)
    z = np.asarray(z)
    y = np.asarray(y)
    dphi = _phi_prime_zy(z, y)
    ddphi = 0.5 * (1.0 - 3.0 * z * z)
    kz = _k_zy(z, y, params)
    d1, d2 = _k_log_derivs(z, y, params)
    c0 = kz
    c1 = kz * d1 * dphi
    c2 = kz * (d2 * dphi * dphi + d1 * ddphi)
    return c0, c1, c2, z, y, dphi, ddphi


def c(s, params):
    """Gauge factor ``c = (w p)**-1/4`` composed with ``phi``."""
    params = as_params(params)
    arr = _interior(s, "c")
    return _out(_c_all(arr, params)[0], s)


def c_prime(s, params):
    params = as_params(params)
    arr = _interior(s, "c_prime")
    return _out(_c_all(arr, params)[1], s)


def c_dprime(s, params):
    params = as_params(params)
    arr = _interior(s, "c_dprime")
    return _out(_c_all(arr, params)[2], s)


def potential_appendix(s, params):
    """``V`` assembled from ``c, c', c''``, ``p o phi`` and ``p' o phi``.

    ``V = -c c'' P - c c' (phi'**2 p'(phi) - p(phi) phi'') / phi'**2``
    with ``P = p(phi) / phi'``.  Valid on the whole open interval, but the
    factors grow like powers of ``1/s`` and ``1/(beta - s)``.
    """
    params = as_params(params)
    arr = _interior(s, "potential_V")
    c0, c1, c2, z, y, dphi, ddphi = _c_all(arr, params)
    ie = params.inv_eps
    pz = _pow(y, 1.0 + ie) * _pow(1.0 + z, 1.0 - ie)
    dpz = -2.0 * _pow(y, ie) * _pow(1.0 + z, -ie) * (ie + z)
    big_p = pz / dphi
    val = -c0 * c2 * big_p - c0 * c1 * (dphi * dphi * dpz - pz * ddphi) / (dphi * dphi)
    return _out(val, s)


def potential_at_x(x, params, one_minus_x=None):
    """``V(psi(x))`` written directly in the original variable.

    Since ``P = 1/c**2`` the potential equals ``M'' + M'**2`` for
    ``M = -log c``; in terms of ``x = phi(s)`` this is
    ``(L'' + L'**2) x (1-x) (1+x) + L' (1 - 3 x**2) / 2`` where ``L = -log k``.
    No large factors appear, so this is the preferred form inside solvers.
    """
    params = as_params(params)
    arr = _check(x, 0.0, 1.0, True, True, "potential_at_x")
    y = 1.0 - arr if one_minus_x is None else np.asarray(one_minus_x, dtype=float)
    a, b = _gauge_exponents(params)
    l1 = -0.25 / arr - a / y - b / (1.0 + arr)
    l2 = 0.25 / (arr * arr) - a / (y * y) + b / (1.0 + arr) ** 2
    val = (l2 + l1 * l1) * arr * y * (1.0 + arr) + 0.5 * l1 * (1.0 - 3.0 * arr * arr)
    return _out(val, x)


def asymptotic_V(s, params):
    """Leading endpoint behaviour: ``3/(4 s**2)`` on the left half, the right law otherwise."""
    params = as_params(params)
    arr = _interior(s, "asymptotic_V")
    right_coef = params.inv_eps ** 2 - 0.25
    val = np.where(arr <= 0.5 * BETA, 0.75 / arr ** 2, right_coef / (BETA - arr) ** 2)
    return _out(val, s)


DEFAULT_S_LO = 1e-4 * BETA
DEFAULT_S_HI = BETA * (1.0 - 1e-4)


def potential_V(s, params, branch: str = "auto", s_lo: float = DEFAULT_S_LO,
                s_hi: float = DEFAULT_S_HI):
    """Schroedinger potential ``V(s)`` on ``(0, beta)``.

    Parameters
    ----------
    branch : {"auto", "direct", "asymptotic"}
        ``"auto"`` uses the appendix assembly on ``[s_lo, s_hi]`` and the
        endpoint laws outside it.
    """
    params = as_params(params)
    arr = _interior(s, "potential_V")
    if branch == "direct":
        return potential_appendix(s, params)
    if branch == "asymptotic":
        return asymptotic_V(s, params)
    if branch != "auto":
        raise ValueError(f"unknown branch {branch!r}")
    arr1 = np.atleast_1d(arr)
    out = np.empty_like(arr1)
    mid = (arr1 >= s_lo) & (arr1 <= s_hi)
    if np.any(mid):
        out[mid] = potential_appendix(arr1[mid], params)
    if np.any(~mid):
        out[~mid] = asymptotic_V(arr1[~mid], params)
    return _out(out.reshape(np.shape(arr)), s)


def branch_tag(s, s_lo: float = DEFAULT_S_LO, s_hi: float = DEFAULT_S_HI) -> str:
    if s < s_lo:
        return "asymptotic_left"
    if s > s_hi:
        return "asymptotic_right"
    return "direct"


def alpha_min(params, tol: float = 1e-10, n_grid: int = 2000) -> tuple[float, float]:
    """Minimum of ``V`` over ``(0, beta)`` and its location.

    A coarse scan on a grid clustered toward both ends (Chebyshev points)
    brackets the minimiser, then golden-section search refines it.

    Returns
    -------
    alpha, s_star
    """
    params = as_params(params)
    theta = np.linspace(0.0, math.pi, n_grid + 2)[1:-1]
    grid = 0.5 * BETA * (1.0 - np.cos(theta))
    grid = grid[(grid >= DEFAULT_S_LO) & (grid <= DEFAULT_S_HI)]
    vals = potential_appendix(grid, params)
    i = int(np.argmin(vals))
    if i == 0 or i == len(grid) - 1:
        raise ConvergenceError("minimum of V sits on the edge of the search domain")
    res = minimize_scalar(lambda t: float(potential_appendix(t, params)),
                          bracket=(grid[i - 1], grid[i], grid[i + 1]),
                          method="golden", tol=max(tol, 1e-12))
    s_star = float(res.x)
    alpha = float(potential_appendix(s_star, params))
    return min(alpha, float(vals[i])), s_star


@dataclass(frozen=True)
class LiouvilleMap:
    """Bundle of the transformation for a fixed epsilon.

    Evaluators are thin wrappers over the module functions; ``alpha`` and
    ``s_star`` are computed on first access and cached.
    """

    params: ProblemParams
    s_lo: float = DEFAULT_S_LO
    s_hi: float = DEFAULT_S_HI
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def for_epsilon(cls, epsilon: float, **kw) -> "LiouvilleMap":
        return cls(as_params(epsilon), **kw)

    def __post_init__(self):
        if not 0.0 < self.s_lo < self.s_hi < BETA:
            raise DomainError("crossover points must satisfy 0 < s_lo < s_hi < beta")

    @property
    def beta(self) -> float:
        return BETA

    def phi(self, s):
        return phi(s)

    def phi_prime(self, s):
        return phi_prime(s)

    def phi_dprime(self, s):
        return phi_dprime(s)

    def c(self, s):
        return c(s, self.params)

    def c_prime(self, s):
        return c_prime(s, self.params)

    def c_dprime(self, s):
        return c_dprime(s, self.params)

    def V(self, s, branch: str = "auto"):
        return potential_V(s, self.params, branch, self.s_lo, self.s_hi)

    def grid(self, n: int = 257) -> tuple[np.ndarray, np.ndarray]:
        """Chebyshev-spaced samples ``(s, phi(s))`` including both ends."""
        s = 0.5 * BETA * (1.0 - np.cos(np.linspace(0.0, math.pi, n)))
        s[-1] = BETA
        return s, np.asarray(phi(s))

    @property
    def alpha(self) -> float:
        if "alpha" not in self._cache:
            self._cache["alpha"] = alpha_min(self.params)
        return self._cache["alpha"][0]

    @property
    def s_star(self) -> float:
        self.alpha
        return self._cache["alpha"][1]
