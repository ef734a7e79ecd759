"""Periodic and plain L2-discrepancy by several independent routes.

* ``B2_EXACT``: closed pair sum with the kernel ``1/3 + B2(|x - y|)``
  (optionally in exact rational arithmetic for :class:`PointSet` input).
* ``WARNOCK``: closed pair sum for the plain (anchored at 0) L2-discrepancy.
* ``FOURIER_TRUNCATED``: exponential-sum series cut to ``[-K, K]^d`` with a
  rigorous bound on the omitted mass.
* ``MC_ORACLE``: Monte Carlo over random periodic boxes, or over random
  shifts of the plain discrepancy.

Pair sums are blocked by rows and each block is reduced with
:func:`math.fsum`; block partials are combined in block order, so the result
does not depend on how many worker threads (``QMC_THREADS``) were used.

Random numbers come from NumPy's ``PCG64`` generator seeded with
``numpy.random.default_rng(seed)``.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .pointset import (
    AnyPointSet,
    FreePointSet,
    PointSet,
    _inside,
    as_weights,
    shift_point_set,
)

__all__ = [
    "Method",
    "DiscrepancyResult",
    "ResourceError",
    "bernoulli_b2",
    "inverse_r_squared",
    "periodic_l2_weighted",
    "periodic_l2",
    "plain_l2_weighted",
    "plain_l2",
    "periodic_l2_fourier",
    "fourier_tail_bound",
    "periodic_l2_mc",
    "rms_shifted_l2_mc",
    "find_good_shift",
]


class Method(enum.Enum):
    B2_EXACT = "B2_EXACT"
    WARNOCK = "WARNOCK"
    FOURIER_TRUNCATED = "FOURIER_TRUNCATED"
    MC_ORACLE = "MC_ORACLE"


class ResourceError(RuntimeError):
    """A requested computation would exceed the memory budget."""


@dataclass(frozen=True)
class DiscrepancyResult:
    """Outcome of one discrepancy evaluation.

    ``value_squared`` is kept unclamped (it can be a tiny negative number for
    near-perfect sets); ``value`` is its clamped square root.
    """

    value_squared: float
    method: Method
    n_points: int
    tail_bound: Optional[float] = None
    std_error: Optional[float] = None
    n_terms_or_samples: Optional[int] = None
    exact_value_squared: Optional[Fraction] = None

    @property
    def value(self) -> float:
        if self.exact_value_squared is not None:
            return _sqrt_fraction(self.exact_value_squared)
        return math.sqrt(max(self.value_squared, 0.0))

    def as_record(self) -> dict:
        rec = {
            "value": self.value,
            "value_squared": self.value_squared,
            "method": self.method.value,
            "n": self.n_points,
        }
        if self.tail_bound is not None:
            rec["tail_bound"] = self.tail_bound
        if self.std_error is not None:
            rec["std_error"] = self.std_error
        if self.n_terms_or_samples is not None:
            rec["n_terms_or_samples"] = self.n_terms_or_samples
        if self.exact_value_squared is not None:
            rec["exact_value_squared"] = str(self.exact_value_squared)
        return rec


def _sqrt_fraction(q: Fraction) -> float:
    """Square root of a non-negative rational, rounded to the nearest float."""
    if q <= 0:
        return 0.0
    # 2k fractional bits of headroom, then one rounding from an exact rational
    k = 80 + max(0, q.denominator.bit_length() - q.numerator.bit_length()) // 2
    r = math.isqrt((q.numerator << (2 * k)) // q.denominator)
    # r <= sqrt(q) 2^k < r + 1; ties cannot occur
    return float(Fraction(2 * r + 1, 1 << (k + 1)))


def bernoulli_b2(x):
    """Second Bernoulli polynomial ``x^2 - x + 1/6`` on ``[0, 1]``."""
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr)):
        raise ValueError("bernoulli_b2: argument outside [0, 1]")
    out = arr * arr - arr + 1.0 / 6.0
    return float(out) if out.ndim == 0 else out


def inverse_r_squared(k):
    """``1 / r(k)^2``: 1 at ``k = 0``, otherwise ``6 / (4 pi^2 k^2)``."""
    k = np.asarray(k, dtype=np.float64)
    with np.errstate(divide="ignore"):
        out = np.where(k == 0, 1.0, 6.0 / (4.0 * math.pi**2 * k * k))
    return float(out) if out.ndim == 0 else out


# -- pair sums ---------------------------------------------------------------

_BLOCK_BYTES = 32 * 2**20


def _n_threads(deterministic: bool) -> int:
    if deterministic:
        return 1
    try:
        n = int(os.environ.get("QMC_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def _pairwise_diffs(P: AnyPointSet, rows: slice) -> np.ndarray:
    """``|x_n - x_m|`` for n in ``rows`` and all m, shape (b, N, d)."""
    if isinstance(P, PointSet):
        A = P.numerators
        return np.abs(A[rows, None, :] - A[None, :, :]) / float(P.denom)
    X = P.float_coords
    return np.abs(X[rows, None, :] - X[None, :, :])


def _periodic_kernel(diff: np.ndarray) -> np.ndarray:
    """``prod_j (1 + 3 B2(t_j)) - 1`` without cancellation near zero.

    Uses ``(1 + P)(1 + a) - 1 = P + a + P a`` one axis at a time.
    """
    a = 3.0 * diff * (diff - 1.0) + 0.5
    acc = a[..., 0].copy()
    for j in range(1, a.shape[-1]):
        aj = a[..., j]
        acc += aj + acc * aj
    return acc


def _plain_kernel(P: AnyPointSet, rows: slice) -> np.ndarray:
    X = P.float_coords
    return np.prod(1.0 - np.maximum(X[rows, None, :], X[None, :, :]), axis=-1)


def _pair_sum(P: AnyPointSet, w: Optional[np.ndarray], kernel, deterministic: bool) -> float:
    """``sum_{n,m} w_n w_m K(x_n, x_m)``; ``w=None`` means unit weights."""
    N, d = P.n_points, P.dim
    if N == 0:
        return 0.0
    block = max(1, _BLOCK_BYTES // (8 * N * d))
    starts = list(range(0, N, block))

    def one(start):
        rows = slice(start, min(start + block, N))
        K = kernel(P, rows)
        if w is not None:
            K = K * w[rows, None] * w[None, :]
        return math.fsum(K.ravel().tolist())

    threads = min(_n_threads(deterministic), len(starts))
    if threads <= 1:
        partials = [one(s) for s in starts]
    else:
        with ThreadPoolExecutor(threads) as ex:
            partials = list(ex.map(one, starts))
    return math.fsum(partials)


def _periodic_pair_kernel(P, rows):
    return _periodic_kernel(_pairwise_diffs(P, rows))


def _exact_periodic_pair_sum(P: PointSet, w) -> Fraction:
    """Exact ``sum w_n w_m prod_j (1/3 + B2(|x_nj - x_mj|))`` for a PointSet."""
    D = P.denom
    rows = [tuple(int(v) for v in r) for r in P.numerators.tolist()]
    # 1/3 + B2(t/D) = (2 t^2 - 2 t D + D^2) / (2 D^2)
    table = {}
    scale = (2 * D * D) ** P.dim
    if w is None:
        total = 0
        for a in rows:
            for b in rows:
                prod = 1
                for u, v in zip(a, b):
                    t = abs(u - v)
                    f = table.get(t)
                    if f is None:
                        f = table[t] = 2 * t * t - 2 * t * D + D * D
                    prod *= f
                total += prod
        return Fraction(total, scale)
    ws = [Fraction(v) for v in w]
    total = Fraction(0)
    for wa, a in zip(ws, rows):
        inner = 0
        for wb, b in zip(ws, rows):
            prod = 1
            for u, v in zip(a, b):
                t = abs(u - v)
                prod *= 2 * t * t - 2 * t * D + D * D
            inner += wb * prod
        total += wa * inner
    return total / scale


def periodic_l2_weighted(
    P: AnyPointSet, w=None, *, exact: bool = False, deterministic: bool = False
) -> DiscrepancyResult:
    """Periodic L2-discrepancy of a weighted point set via the B2 pair sum.

    ``value^2 = 3^-d - 2 * 3^-d * sum(w) + sum_{n,m} w_n w_m
    prod_j (1/3 + B2(|x_nj - x_mj|))``.

    ``w=None`` gives equal weights ``1/N``; an empty set gives the initial
    discrepancy ``3^(-d/2)``.  With ``exact=True`` (PointSet only) the sum is
    evaluated in rational arithmetic and the float result is its correctly
    rounded value.
    """
    N, d = P.n_points, P.dim
    if N == 0:
        w_arr = np.zeros(0)
    elif w is None:
        w_arr = None
    else:
        w_arr = as_weights(P, w)
    third = 1.0 / 3.0**d
    if exact:
        if not isinstance(P, PointSet):
            raise TypeError("exact evaluation needs a PointSet")
        if N == 0:
            vsq = Fraction(1, 3**d)
        elif w is None:
            vsq = -Fraction(1, 3**d) + _exact_periodic_pair_sum(P, None) / (N * N)
        else:
            ws = [Fraction(float(v)) for v in w_arr]
            vsq = (
                Fraction(1, 3**d)
                - 2 * Fraction(1, 3**d) * sum(ws, Fraction(0))
                + _exact_periodic_pair_sum(P, ws)
            )
        return DiscrepancyResult(
            float(vsq), Method.B2_EXACT, N, n_terms_or_samples=N * N,
            exact_value_squared=vsq,
        )
    # 3^d value^2 = (1 - sum w)^2 + sum_{n,m} w_n w_m (prod_j (1 + 3 B2) - 1)
    if w_arr is None:
        vsq = third * (_pair_sum(P, None, _periodic_pair_kernel, deterministic) / (N * N))
    else:
        pair = _pair_sum(P, w_arr, _periodic_pair_kernel, deterministic)
        gap = 1.0 - math.fsum(w_arr.tolist())
        vsq = third * (gap * gap + pair)
    return DiscrepancyResult(
        vsq, Method.B2_EXACT, N, n_terms_or_samples=N * N,
        exact_value_squared=Fraction(1, 3**d) if N == 0 else None,
    )


def periodic_l2(P: AnyPointSet, *, exact: bool = False, deterministic: bool = False) -> DiscrepancyResult:
    """Equal-weight periodic L2-discrepancy; needs ``N >= 1``."""
    if P.n_points == 0:
        raise ValueError(
            "periodic_l2: equal weights are undefined for N=0; "
            "use periodic_l2_weighted for the empty set"
        )
    return periodic_l2_weighted(P, None, exact=exact, deterministic=deterministic)


def _plain_sq(P: AnyPointSet, w: Optional[np.ndarray], deterministic: bool = True) -> float:
    d = P.dim
    init = 1.0 / 3.0**d
    if P.n_points == 0:
        return init
    X = P.float_coords
    lin = np.prod((1.0 - X * X) * 0.5, axis=1)
    if w is None:
        N = P.n_points
        pair = _pair_sum(P, None, _plain_kernel, deterministic) / (N * N)
        lin_sum = math.fsum(lin.tolist()) / N
    else:
        pair = _pair_sum(P, w, _plain_kernel, deterministic)
        lin_sum = math.fsum((w * lin).tolist())
    return math.fsum([init, -2.0 * lin_sum, pair])


def plain_l2_weighted(P: AnyPointSet, w=None, *, deterministic: bool = False) -> DiscrepancyResult:
    """Plain L2-discrepancy (boxes ``[0, y)``) via the Warnock pair sum.

    ``value^2 = 3^-d - 2 sum_n w_n prod_j (1 - x_nj^2)/2
    + sum_{n,m} w_n w_m prod_j (1 - max(x_nj, x_mj))``.
    """
    w_arr = None if (w is None or P.n_points == 0) else as_weights(P, w)
    vsq = _plain_sq(P, w_arr, deterministic)
    return DiscrepancyResult(vsq, Method.WARNOCK, P.n_points, n_terms_or_samples=P.n_points**2)


def plain_l2(P: AnyPointSet, *, deterministic: bool = False) -> DiscrepancyResult:
    return plain_l2_weighted(P, None, deterministic=deterministic)


# -- Fourier route -----------------------------------------------------------

_MAX_FOURIER_TERMS = 2 * 10**7


def _axis_weight_sum(K: int) -> float:
    k = np.arange(1, K + 1, dtype=np.float64)
    return 1.0 + 2.0 * math.fsum((6.0 / (4.0 * math.pi**2 * k * k)).tolist())


def fourier_tail_bound(d: int, K: int, abs_weight_sum: float = 1.0) -> float:
    """Upper bound on the mass dropped by truncating the series to ``[-K, K]^d``.

    Every exponential sum is bounded by ``sum |w|``; the omitted weights sum
    to ``(3/2)^d - T_K^d`` with ``T_K`` the truncated per-axis sum.
    """
    full = 1.0
    trunc = 1.0
    t = _axis_weight_sum(K)
    for _ in range(d):
        full *= 1.5
        trunc *= t
    # (3/2)^d - T^d computed as T^d * ((1.5/T)^d - 1) would be no better;
    # the difference is far above rounding for any K of practical size.
    return max(full - trunc, 0.0) * abs_weight_sum**2 / 3.0**d


def _axis_exponentials(P: AnyPointSet, K: int) -> np.ndarray:
    """``exp(2 pi i k x_hj)`` for k in [-K, K], shape (N, d, 2K+1)."""
    k = np.arange(-K, K + 1, dtype=np.int64)
    if isinstance(P, PointSet):
        D = P.denom
        # reduce k*numerator mod D exactly before forming the angle
        ph = (P.numerators[:, :, None] % D) * (k % D)[None, None, :] % D
        return np.exp(2j * math.pi * (ph / float(D)))
    X = P.float_coords
    return np.exp(2j * math.pi * X[:, :, None] * k[None, None, :].astype(np.float64))


def periodic_l2_fourier(P: AnyPointSet, w=None, K: int = 16) -> DiscrepancyResult:
    """Periodic L2-discrepancy from the exponential-sum series, cut at ``|k_j| <= K``.

    For weights that do not sum to one the ``k = 0`` term contributes
    ``(1 - sum w)^2 / 3^d``; it vanishes for equal weights.  ``tail_bound``
    bounds the gap to the full series from above, and the gap is never
    negative since every omitted term is.
    """
    K = int(K)
    if K < 1:
        raise ValueError(f"K: must be a positive integer, got {K}")
    N, d = P.n_points, P.dim
    n_terms = (2 * K + 1) ** d
    if n_terms > _MAX_FOURIER_TERMS:
        raise ResourceError(
            f"K: a [-{K},{K}]^{d} frequency grid has {n_terms} entries, "
            f"more than the budget of {_MAX_FOURIER_TERMS}"
        )
    w_arr = np.zeros(0) if N == 0 else as_weights(P, w)
    wsum = math.fsum(w_arr.tolist())
    abs_sum = math.fsum(np.abs(w_arr).tolist())
    third = 1.0 / 3.0**d
    if N == 0:
        S2 = np.zeros((2 * K + 1,) * d)
    else:
        E = _axis_exponentials(P, K)
        # S(k) = sum_h w_h prod_j E[h, j, k_j], accumulated in chunks of h
        S = np.zeros((2 * K + 1,) * d, dtype=np.complex128)
        letters = "abcdefghijklmnopqrstuvwxyz"[:d]
        subs = ",".join("z" + c for c in letters) + "->" + letters
        chunk = max(1, 2**22 // n_terms)
        for s in range(0, N, chunk):
            ops = [E[s : s + chunk, 0, :] * w_arr[s : s + chunk, None]]
            ops += [E[s : s + chunk, j, :] for j in range(1, d)]
            S += np.einsum(subs, *ops)
        S2 = S.real**2 + S.imag**2
    G = np.ones(())
    g = inverse_r_squared(np.arange(-K, K + 1))
    for _ in range(d):
        G = np.multiply.outer(G, g)
    terms = G * S2
    terms[(K,) * d] = 0.0
    series = math.fsum(terms.ravel().tolist())
    vsq = third * series + third * (1.0 - wsum) ** 2
    return DiscrepancyResult(
        vsq,
        Method.FOURIER_TRUNCATED,
        N,
        tail_bound=fourier_tail_bound(d, K, abs_sum),
        n_terms_or_samples=n_terms - 1,
    )


# -- Monte Carlo oracles -----------------------------------------------------


def _mean_and_se(samples: np.ndarray) -> tuple[float, float]:
    M = samples.shape[0]
    mean = math.fsum(samples.tolist()) / M
    if M < 2:
        return mean, math.inf
    sd = float(np.std(samples, ddof=1))
    return mean, sd / math.sqrt(M)


def periodic_l2_mc(P: AnyPointSet, w=None, n_samples: int = 10**5, seed=0) -> DiscrepancyResult:
    """Unbiased Monte Carlo estimate of the squared periodic L2-discrepancy.

    Draws ``n_samples`` anchor pairs ``(x, y)`` uniformly from ``[0,1)^{2d}``
    and averages the squared local discrepancy of ``B(x, y)``.
    """
    M = int(n_samples)
    if M < 2:
        raise ValueError(f"n_samples: need at least 2, got {M}")
    N, d = P.n_points, P.dim
    if N == 0:
        w_arr = np.zeros(0)
    else:
        w_arr = as_weights(P, w)
    rng = np.random.default_rng(seed)
    ax = rng.random((M, d))
    ay = rng.random((M, d))
    vol = np.prod(np.where(ax <= ay, ay - ax, 1.0 - ax + ay), axis=1)
    X = P.float_coords
    delta = np.empty(M)
    chunk = max(1, 2**22 // max(1, N * d))
    for s in range(0, M, chunk):
        x = ax[s : s + chunk, None, :]
        y = ay[s : s + chunk, None, :]
        mask = _inside(X[None, :, :], x, y)
        delta[s : s + chunk] = mask @ w_arr - vol[s : s + chunk]
    mean, se = _mean_and_se(delta * delta)
    return DiscrepancyResult(mean, Method.MC_ORACLE, N, std_error=se, n_terms_or_samples=M)


def _draw_shifts(M: int, d: int, seed) -> np.ndarray:
    return np.random.default_rng(seed).random((M, d))


def _plain_sq_of_shifts(P: AnyPointSet, w, shifts: np.ndarray) -> np.ndarray:
    w_arr = None if (w is None or P.n_points == 0) else as_weights(P, w)
    return np.array([_plain_sq(shift_point_set(P, s), w_arr) for s in shifts])


def rms_shifted_l2_mc(
    P: AnyPointSet, w=None, n_shifts: int = 10**4, seed=0, *, shifts=None
) -> DiscrepancyResult:
    """Mean squared plain L2-discrepancy over random shifts ``P + delta``.

    Estimates the squared periodic L2-discrepancy.  Each shift is evaluated
    exactly with the Warnock sum.  ``shifts`` overrides the random draw
    (then ``n_shifts`` is ignored and a single shift is allowed, with an
    infinite standard error).
    """
    if shifts is None:
        M = int(n_shifts)
        if M < 2:
            raise ValueError(f"n_shifts: need at least 2, got {M}")
        shifts = _draw_shifts(M, P.dim, seed)
    else:
        shifts = np.atleast_2d(np.asarray(shifts, dtype=np.float64))
    vals = _plain_sq_of_shifts(P, w, shifts)
    mean, se = _mean_and_se(vals)
    return DiscrepancyResult(
        mean, Method.MC_ORACLE, P.n_points, std_error=se, n_terms_or_samples=len(vals)
    )


def find_good_shift(
    P: AnyPointSet, n_candidates: int = 1000, seed=0, *, w=None, include_zero: bool = False
) -> tuple[np.ndarray, float]:
    """Best of ``n_candidates`` random shifts for the plain L2-discrepancy.

    Candidates are the same shifts :func:`rms_shifted_l2_mc` draws for the
    same seed.  With ``include_zero`` the unshifted set is the first
    candidate.  Returns ``(delta, value)``.
    """
    M = int(n_candidates)
    if M < 1:
        raise ValueError(f"n_candidates: need at least 1, got {M}")
    if include_zero:
        shifts = np.vstack([np.zeros((1, P.dim)), _draw_shifts(M - 1, P.dim, seed)])
    else:
        shifts = _draw_shifts(M, P.dim, seed)
    vals = _plain_sq_of_shifts(P, w, shifts)
    i = int(np.argmin(vals))
    return shifts[i].copy(), math.sqrt(max(vals[i], 0.0))
