"""Power-series side of the eigenproblem.

With ``u(x) = sum_{n>=1} v_n x**n`` the operator equation reduces to

    n (n-1) v_{n-1} - n (n+1) v_{n+1} + 2 (n - lam) / eps * v_n = 0,

with ``v_1 = 1`` and ``v_2 = (1 - lam) / eps``.  For real ``lam`` the
recurrence has a dominant solution growing like ``n**(1/eps - 1)`` and a
minimal one decaying like ``(-1)**n n**(-kappa)``, ``kappa = 1 + 1/eps``.
``lam`` is an eigenvalue exactly when the initial data select the minimal
solution.

The minimal solution is isolated by running the recurrence backwards from
a large index (Miller's algorithm).  Seeding with ``(v_{N+1}, v_N) = (0, 1)``
leaves a dominant-solution admixture of relative size ``(n/N)**(2/eps)``,
which is far too large for ``eps >= 1`` at practical ``N``.  The default
seed instead takes the ratio ``v_{N+1}/v_N`` from the asymptotic expansion
of the minimal solution,

    v_n ~ (-1)**n n**(-kappa) (1 + c_1/n + c_2/n**2 + ...),

which removes the admixture to the order of the truncated expansion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .coeffs import as_params
from .liouville import BETA
from .errors import BracketError, DomainError, InstabilityError, TailNotConverged
from .shooting import EigenEstimate, _find_root

__all__ = [
    "RecurrenceRun", "forward_run", "backward_run", "u_series", "miller_discrepancy",
    "minimal_series_coefficients", "refine_eigen_recurrence", "recurrence_spectrum",
    "default_n_start",
]

_RESCALE_AT = 2.0 ** 600
_SHIFT = -600


@dataclass(frozen=True)
class RecurrenceRun:
    """Coefficients ``v_1..v_N`` stored as ``mantissa * 2**exponent``.

    ``mantissa[i]`` and ``exponent[i]`` describe ``v_{i+1}``; the exponent
    ledger changes only when a run is rescaled to avoid overflow.
    """

    lam: float
    epsilon: float
    N: int
    mantissa: np.ndarray
    exponent: np.ndarray
    direction: str
    seed: str = "initial"

    @property
    def values(self) -> np.ndarray:
        """``v_1..v_N`` as plain floats (may overflow for extreme runs)."""
        return np.ldexp(self.mantissa, self.exponent)

    def normalized(self, index: int = 1) -> np.ndarray:
        """Values divided by ``v_index``, computed across the exponent ledger."""
        i = index - 1
        if self.mantissa[i] == 0.0:
            raise ZeroDivisionError(f"v_{index} vanishes")
        return np.ldexp(self.mantissa / self.mantissa[i], self.exponent - self.exponent[i])

    def residuals(self) -> np.ndarray:
        """Relative residual of the defining relation at ``n = 2..N-1``."""
        ie = 1.0 / self.epsilon
        out = np.empty(max(self.N - 2, 0))
        for n in range(2, self.N):
            e0 = int(self.exponent[n - 1])
            a = math.ldexp(self.mantissa[n - 2], int(self.exponent[n - 2]) - e0)
            b = self.mantissa[n - 1]
            c = math.ldexp(self.mantissa[n], int(self.exponent[n]) - e0)
            t1 = n * (n - 1) * a
            t2 = n * (n + 1) * c
            t3 = 2.0 * (n - self.lam) * ie * b
            scale = abs(t1) + abs(t2) + abs(t3)
            out[n - 2] = abs(t1 - t2 + t3) / scale if scale else 0.0
        return out


def forward_run(lam: float, params, N: int) -> RecurrenceRun:
    """Generate ``v_1..v_N`` from ``v_1 = 1``, ``v_2 = (1 - lam)/eps``."""
    params = as_params(params)
    if N < 3:
        raise DomainError("forward run needs N >= 3")
    ie = params.inv_eps
    mant = np.empty(N)
    expo = np.zeros(N, dtype=np.int64)
    shift = 0
    prev, cur = 1.0, (1.0 - lam) * ie
    mant[0], mant[1] = prev, cur
    for n in range(2, N):
        nxt = (n * (n - 1) * prev + 2.0 * (n - lam) * ie * cur) / (n * (n + 1))
        if abs(nxt) > _RESCALE_AT:
            prev, cur, nxt = (math.ldexp(v, _SHIFT) for v in (prev, cur, nxt))
            shift -= _SHIFT
            # entries already stored keep their own exponents
        mant[n] = nxt
        expo[n] = shift
        prev, cur = cur, nxt
    return RecurrenceRun(float(lam), params.epsilon, N, mant, expo, "forward")


def _gbinom(top: float, j: int) -> float:
    # generalised binomial coefficient; scipy's binom returns nan for negative integer tops
    r = 1.0
    for i in range(j):
        r *= (top - i) / (i + 1)
    return r


def minimal_series_coefficients(lam: float, params, K: int = 8) -> list[float]:
    """``c_0..c_K`` of ``v_n ~ (-1)**n n**(-kappa) sum_k c_k n**(-k)``.

    Substituting the ansatz into the recurrence and matching powers of
    ``1/n`` gives, for ``m >= 2``,

        2 (m-1) c_{m-1} = sum_{odd j>=3} 2 c_{m-j} C(1-kappa-(m-j), j) - (2 lam/eps) c_{m-2}.
    """
    params = as_params(params)
    ie = params.inv_eps
    kappa = 1.0 + ie
    c = [1.0]
    for m in range(2, K + 2):
        acc = 0.0
        for j in range(3, m + 1, 2):
            acc += 2.0 * c[m - j] * _gbinom(1.0 - kappa - (m - j), j)
        acc -= 2.0 * lam * ie * c[m - 2]
        c.append(acc / (2.0 * (m - 1)))
    return c


def default_n_start(lam: float, params) -> int:
    """Starting index ``max(200, 50/eps, 20 lam/eps)``, rounded up to a multiple of 50."""
    params = as_params(params)
    n = max(200.0, 50.0 * params.inv_eps, 20.0 * abs(lam) * params.inv_eps)
    return int(math.ceil(n / 50.0) * 50)


def backward_run(lam: float, params, N_start: int | None = None, seed: str = "asymptotic") -> RecurrenceRun:
    """Miller backward run from index ``N_start``.

    Parameters
    ----------
    seed : {"asymptotic", "zero"}
        ``"zero"`` uses ``(v_{N+1}, v_N) = (0, 1)``; ``"asymptotic"`` takes
        ``v_{N+1}/v_N`` from :func:`minimal_series_coefficients`.

    The returned run holds ``v_1..v_N`` in arbitrary normalisation.
    """
    params = as_params(params)
    N = default_n_start(lam, params) if N_start is None else int(N_start)
    if N < 3:
        raise DomainError("backward run needs N_start >= 3")
    ie = params.inv_eps
    if seed == "zero":
        upper = 0.0
    elif seed == "asymptotic":
        kappa = 1.0 + ie
        coeffs = minimal_series_coefficients(lam, params)

        def tail(n):
            return sum(ck * float(n) ** -k for k, ck in enumerate(coeffs))

        upper = -((N + 1.0) / N) ** -kappa * tail(N + 1) / tail(N)
    else:
        raise ValueError(f"unknown seed {seed!r}")
    mant = np.empty(N)
    expo = np.zeros(N, dtype=np.int64)
    shift = 0
    nxt, cur = upper, 1.0
    mant[N - 1] = cur
    for n in range(N, 1, -1):
        prev = (n * (n + 1) * nxt - 2.0 * (n - lam) * ie * cur) / (n * (n - 1))
        if abs(prev) > _RESCALE_AT:
            nxt, cur, prev = (math.ldexp(v, _SHIFT) for v in (nxt, cur, prev))
            shift -= _SHIFT
        mant[n - 2] = prev
        expo[n - 2] = shift
        nxt, cur = cur, prev
    return RecurrenceRun(float(lam), params.epsilon, N, mant, expo, "backward", seed)


def miller_discrepancy(lam: float, params, N_start: int | None = None, *,
                       seed: str = "asymptotic", normalize: str = "norm",
                       check: bool = False, stability_tol: float = 1e-8) -> float:
    """Eigen-condition whose zeros are the eigenvalues.

    ``normalize="first"`` returns ``v_2/v_1 - (1 - lam)/eps`` of the backward
    run, which has poles where ``v_1`` vanishes.  ``normalize="norm"``
    (default) returns ``(v_2 - (1 - lam)/eps v_1) / |(v_1..v_20)|``, which
    has the same zeros and no poles.

    With ``check`` the value is recomputed from ``2 N_start`` and
    :class:`InstabilityError` is raised if the two differ by more than
    ``stability_tol``.
    """
    params = as_params(params)
    N = default_n_start(lam, params) if N_start is None else int(N_start)
    d = _discrepancy(lam, params, N, seed, normalize)
    if check:
        d2 = _discrepancy(lam, params, 2 * N, seed, normalize)
        if not abs(d - d2) <= stability_tol:
            raise InstabilityError(
                f"discrepancy changed by {abs(d - d2):.3e} when N_start doubled from {N}")
    return d


def _discrepancy(lam, params, N, seed, normalize):
    run = backward_run(lam, params, N, seed)
    ie = params.inv_eps
    k = min(20, N)
    e0 = int(run.exponent[0])
    head = np.ldexp(run.mantissa[:k], run.exponent[:k] - e0)
    if normalize == "first":
        return head[1] / head[0] - (1.0 - lam) * ie
    if normalize == "norm":
        return (head[1] - (1.0 - lam) * ie * head[0]) / float(np.linalg.norm(head))
    raise ValueError(f"unknown normalisation {normalize!r}")


def u_series(x, run: RecurrenceRun, tol: float = 1e-10) -> tuple[float, float]:
    """Partial sum ``sum_{n<=N} v_n x**n`` with a tail estimate.

    The tail beyond ``N`` is estimated from the last coefficient assuming
    at most polynomial growth ``n**p`` with ``p = max(1/eps - 1, 0)``:
    ``|v_N| x**(N+1) / (1 - x) * (1 + p / (N (1 - x)))``.

    Raises
    ------
    TailNotConverged
        If the tail estimate exceeds ``tol * max(1, |sum|)``.
    """
    x = float(x)
    if not 0.0 <= x < 1.0:
        raise DomainError(f"u_series needs 0 <= x < 1, got {x}")
    if x == 0.0:
        return 0.0, 0.0
    vals = run.values
    n = np.arange(1, run.N + 1)
    terms = vals * np.exp(n * math.log(x))
    total = math.fsum(terms)
    p = max(1.0 / run.epsilon - 1.0, 0.0)
    q = 1.0 - x
    tail = abs(vals[-1]) * x ** (run.N + 1) / q * (1.0 + p / (run.N * q))
    if not tail <= tol * max(1.0, abs(total)):
        raise TailNotConverged(f"series tail {tail:.3e} at x={x} with N={run.N}")
    return total, tail


def refine_eigen_recurrence(bracket: tuple[float, float], params, tol: float = 1e-10, *,
                            n: int = 0, N_start: int | None = None,
                            seed: str = "asymptotic") -> EigenEstimate:
    """Locate a zero of :func:`miller_discrepancy` inside ``bracket`` (in ``lam``).

    A fixed ``N_start`` suited to the upper end of the bracket is used for
    every evaluation so that the discrepancy is one continuous function.
    When the ends do not differ in sign, ``|d|`` is minimised instead and
    accepted only if it reaches ``1e-8``; otherwise :class:`BracketError`.
    """
    params = as_params(params)
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise DomainError("bracket must satisfy lo < hi")
    N = default_n_start(hi, params) if N_start is None else int(N_start)

    def d(lam):
        return _discrepancy(lam, params, N, seed, "norm")

    d_lo, d_hi = d(lo), d(hi)
    info = {"N_start": N, "seed": seed}
    if d_lo == 0.0:
        lam, (a, b) = lo, (lo, lo)
    elif d_hi == 0.0:
        lam, (a, b) = hi, (hi, hi)
    elif d_lo * d_hi < 0.0:
        sign = 1.0 if d_lo < 0.0 else -1.0
        lam, (a, b) = _find_root(lambda t: sign * d(t), 0.0, lo, sign * d_lo, hi, sign * d_hi, tol)
    else:
        res = minimize_scalar(lambda t: abs(d(t)), bounds=(lo, hi), method="bounded",
                              options={"xatol": tol})
        if not abs(res.fun) <= 1e-8:
            raise BracketError(
                f"no sign change of the discrepancy on [{lo}, {hi}]; min |d| = {res.fun:.3e}")
        lam, (a, b) = float(res.x), (float(res.x) - tol, float(res.x) + tol)
        info["fallback"] = "minimize"
    scale = 2.0 * params.inv_eps
    return EigenEstimate(n, scale * lam, params.epsilon, "recurrence", None, scale * tol,
                         (scale * a, scale * b), info=info)


def recurrence_spectrum(params, n_max: int, tol: float = 1e-10, lam_start: float = 1.0) -> list[EigenEstimate]:
    """First ``n_max`` eigenvalues by a sign-change scan of the discrepancy.

    The scan starts at ``lam = 1`` (every real eigenvalue exceeds 1) and
    steps by a third of the leading-order eigenvalue spacing.
    """
    params = as_params(params)
    eps = params.epsilon
    out: list[EigenEstimate] = []
    lam = lam_start
    N = default_n_start(lam + 1.0, params)
    d_prev = _discrepancy(lam, params, N, "asymptotic", "norm")
    # leading-order spacing of consecutive lam_n is about eps * pi**2 / beta**2 * n
    spacing0 = eps * math.pi ** 2 / BETA ** 2
    while len(out) < n_max:
        n_est = max(1.0, len(out) + 1.0)
        step = spacing0 * n_est / 3.0
        lam_next = lam + step
        N_next = default_n_start(lam_next, params)
        if N_next > N:
            N = N_next
            d_prev = _discrepancy(lam, params, N, "asymptotic", "norm")
        d_next = _discrepancy(lam_next, params, N, "asymptotic", "norm")
        if d_prev * d_next < 0.0 or d_next == 0.0:
            est = refine_eigen_recurrence((lam, lam_next), params, tol, n=len(out) + 1, N_start=N)
            out.append(est)
        lam, d_prev = lam_next, d_next
    return out
