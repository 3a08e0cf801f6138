"""Adaptive quadrature for proper and endpoint-singular integrals.

The workhorse is a globally adaptive Gauss-Kronrod (7, 15) scheme.  Declared
algebraic endpoint singularities ``(x - lo)**a`` are removed before refinement
by the substitution ``x = lo + L u**(1/(1+a))``, which turns the integrand into
a bounded function of ``u``.

Also here: ``gamma(x) = int_0^x dt / p(t)`` and the transformed length
``beta = int_0^1 (y (1-y) (1+y))**-0.5 dy``.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .coeffs import as_params
from .errors import ConvergenceError, DomainError

__all__ = ["QuadRequest", "integrate", "quad", "gamma", "gamma_scaled", "beta_const"]

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# 15 nodes on [-1, 1]: negative side, centre, positive side.
_NODES = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])
_WK = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5]] = _WG[:3]
_WG15[7] = _WG[3]
_WG15[[13, 11, 9]] = _WG[:3]

_EPMACH = np.finfo(float).eps
_UFLOW = np.finfo(float).tiny


@dataclass(frozen=True)
class QuadRequest:
    """Description of a one-dimensional integral.

    ``lo_exponent``/``hi_exponent`` declare an integrable algebraic singularity
    ``|x - endpoint|**a`` (``a > -1``) at that end; ``None`` means regular.
    ``f`` must accept a 1-D array unless ``vectorized`` is False.

    Near a nonzero singular end ``b`` the integrand only sees the rounded
    ``x = b - d``, so a strong singularity there is resolved no better than
    ``ulp(b)`` allows; shift the variable so the singular end sits at 0 when
    full accuracy matters.
    """

    f: Callable
    lo: float
    hi: float
    tol: float = 1e-10
    rtol: float = 0.0
    lo_exponent: float | None = None
    hi_exponent: float | None = None
    points: Sequence[float] = field(default_factory=tuple)
    vectorized: bool = True
    max_intervals: int = 4000

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if not (self.tol > 0 or self.rtol > 0):
            raise DomainError("tolerance must be positive")
        for a in (self.lo_exponent, self.hi_exponent):
            if a is not None and not a > -1.0:
                raise DomainError(f"endpoint exponent {a} is not integrable")


def _gk15(g, a, b):
    half = 0.5 * (b - a)
    centre = 0.5 * (a + b)
    fv = g(centre + half * _NODES)
    resk = half * np.dot(_WK, fv)
    resg = half * np.dot(_WG15, fv)
    reskh = resk / (2.0 * half) if half else 0.0
    resabs = abs(half) * np.dot(_WK, np.abs(fv))
    resasc = abs(half) * np.dot(_WK, np.abs(fv - reskh))
    err = abs(resk - resg)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    if resabs > _UFLOW / (50.0 * _EPMACH):
        err = max(50.0 * _EPMACH * resabs, err)
    if not np.isfinite(resk):
        raise ConvergenceError(f"non-finite integrand on [{a}, {b}]")
    return float(resk), float(err)


def _segments(req: QuadRequest):
    """Split into pieces on [0, 1] (or plain intervals) with singular ends mapped."""
    f = req.f if req.vectorized else np.vectorize(req.f, otypes=[float])
    cuts = sorted({req.lo, req.hi, *[float(t) for t in req.points if req.lo < t < req.hi]})
    if req.lo_exponent is not None and req.hi_exponent is not None and len(cuts) == 2:
        cuts.insert(1, 0.5 * (req.lo + req.hi))
    pieces = []
    last = len(cuts) - 2
    for i, (a, b) in enumerate(zip(cuts[:-1], cuts[1:])):
        length = b - a
        if i == 0 and req.lo_exponent is not None:
            q = 1.0 / (1.0 + req.lo_exponent)

            def g(u, a=a, length=length, q=q):
                uq = u ** q
                # keep nodes off the singular end when a + length * uq rounds to a
                x = np.maximum(a + length * uq, np.nextafter(a, a + length))
                return f(x) * (length * q * uq / u)

            pieces.append((g, 0.0, 1.0))
        elif i == last and req.hi_exponent is not None:
            q = 1.0 / (1.0 + req.hi_exponent)

            def g(u, b=b, length=length, q=q):
                uq = u ** q
                x = np.minimum(b - length * uq, np.nextafter(b, b - length))
                return f(x) * (length * q * uq / u)

            pieces.append((g, 0.0, 1.0))
        else:
            pieces.append((f, a, b))
    return pieces


def integrate(req: QuadRequest) -> tuple[float, float]:
    """Integrate ``req.f`` over ``[req.lo, req.hi]``.

    Returns
    -------
    value, err_estimate
        ``err_estimate`` is the summed Kronrod error estimate; refinement stops
        once it drops below ``max(tol, rtol * |value|)``.

    Raises
    ------
    ConvergenceError
        When ``max_intervals`` subintervals do not meet the tolerance.
    """
    heap = []
    total = 0.0
    total_err = 0.0
    pieces = _segments(req)
    for k, (g, a, b) in enumerate(pieces):
        val, err = _gk15(g, a, b)
        heapq.heappush(heap, (-err, k, a, b, val))
        total += val
        total_err += err
    counter = len(heap)
    while total_err > max(req.tol, req.rtol * abs(total)):
        if counter >= req.max_intervals:
            raise ConvergenceError(
                f"quadrature budget exhausted: err={total_err:.3e}, value={total:.12g}")
        negerr, k, a, b, val = heapq.heappop(heap)
        g = pieces[k][0]
        mid = 0.5 * (a + b)
        v1, e1 = _gk15(g, a, mid)
        v2, e2 = _gk15(g, mid, b)
        total += v1 + v2 - val
        total_err += e1 + e2 + negerr
        heapq.heappush(heap, (-e1, k, a, mid, v1))
        heapq.heappush(heap, (-e2, k, mid, b, v2))
        counter += 1
        if mid == a or mid == b:
            break
    # Re-sum to shed the drift of the running totals.
    total = math.fsum(item[4] for item in heap)
    total_err = math.fsum(-item[0] for item in heap)
    return total, total_err


def quad(f, lo, hi, *, tol=1e-10, rtol=0.0, lo_exponent=None, hi_exponent=None,
         points=(), vectorized=True, max_intervals=4000) -> tuple[float, float]:
    """Keyword front end to :func:`integrate`."""
    return integrate(QuadRequest(f, lo, hi, tol=tol, rtol=rtol, lo_exponent=lo_exponent,
                                 hi_exponent=hi_exponent, points=tuple(points),
                                 vectorized=vectorized, max_intervals=max_intervals))


def gamma_scaled(x: float, params, tol: float = 1e-13) -> float:
    """``(1 - x)**(1/eps) * gamma(x)``, finite on all of ``[0, 1]``.

    With ``1 - t = (1 - x) / rho**eps`` the defining integral becomes
    ``eps * int_L^1 (2 - (1-x) rho**-eps)**(1/eps - 1) d rho`` with
    ``L = (1 - x)**(1/eps)``, whose integrand stays between 1 and
    ``2**(1/eps - 1)``.
    """
    params = as_params(params)
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"gamma: x outside [0, 1]: {x}")
    if x == 0.0:
        return 0.0
    eps = params.epsilon
    ie = params.inv_eps
    y = 1.0 - x
    lower = y ** ie
    width = -math.expm1(math.log1p(-x) * ie) if x < 1.0 else 1.0
    if ie == 1.0:
        return eps * width

    def integrand(rho):
        # rho = lower + (offset from lower); keep the base away from rounding below 1.
        base = 2.0 - y * rho ** (-eps)
        return np.power(np.maximum(base, 1.0), ie - 1.0)

    def shifted(t):
        return integrand(lower + t)

    # Geometric breakpoints resolve the boundary layer of width ~lower near rho = lower.
    pts = []
    if 0.0 < lower < 1e-3:
        t = lower
        while t < 0.5 * width:
            pts.append(t)
            t *= 8.0
    val, _ = quad(shifted, 0.0, width, tol=tol * max(width, 1e-300), rtol=tol, points=pts)
    return eps * val


def gamma(x: float, params, tol: float = 1e-13) -> float:
    """``gamma(x) = int_0^x p(t)**-1 dt``; returns ``math.inf`` at ``x = 1``."""
    params = as_params(params)
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"gamma: x outside [0, 1]: {x}")
    if x == 1.0:
        return math.inf
    return gamma_scaled(x, params, tol) * (1.0 - x) ** (-params.inv_eps)


def _beta_integrand(y):
    return 1.0 / np.sqrt(y * (1.0 - y) * (1.0 + y))


def _beta_substituted(t):
    # y = t**2 turns the integrand into 2 (1 - t**4)**-1/2
    return 2.0 / np.sqrt((1.0 - t * t) * (1.0 + t * t))


def beta_const(tol: float = 1e-13, route: str = "substituted", return_error: bool = False):
    """Length of the Liouville interval, ``beta = psi(1)``.

    ``route="substituted"`` integrates ``2 (1 - t**4)**-1/2`` on ``[0, 1]``;
    ``route="direct"`` integrates the original integrand with both endpoint
    exponents declared as ``-1/2``.  The two share no integrand evaluations.
    """
    if route == "substituted":
        val, err = quad(_beta_substituted, 0.0, 1.0, tol=tol, hi_exponent=-0.5)
    elif route == "direct":
        val, err = quad(_beta_integrand, 0.0, 1.0, tol=tol, lo_exponent=-0.5, hi_exponent=-0.5)
    else:
        raise ValueError(f"unknown route {route!r}")
    return (val, err) if return_error else val
