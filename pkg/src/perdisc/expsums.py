"""Complete exponential sums attached to the p-sets, and Weil-type bounds.

For a prime ``p`` and integer frequencies ``h = (h_1, ..., h_d)``:

* ``P``: ``|sum_{n<p} e(f_h(n) / p)|``,                ``f_h(n) = h_1 n + ... + h_d n^d``
* ``Q``: ``|sum_{n<p^2} e(f_h(n) / p^2)|``
* ``R``: ``|sum_{a<p} sum_{k<p} e(k g_h(a) / p)|``,    ``g_h(a) = h_1 + h_2 a + ... + h_d a^(d-1)``

with ``e(t) = exp(2 pi i t)``.  When ``p`` does not divide every ``h_j`` the
bounds are ``(d-1) sqrt(p)`` for ``P`` and ``(d-1) p`` for ``Q`` and ``R``.

Phases are reduced modulo ``p`` (or ``p^2``) in exact integer arithmetic and
then looked up in a table of roots of unity, so no angle is ever formed from
a large integer.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .korobov import PSetFamily, is_prime, power_table

__all__ = [
    "WeilStatus",
    "WeilReport",
    "WeilSummary",
    "exp_sum_P",
    "exp_sum_Q",
    "exp_sum_R",
    "exp_sum_R_roots",
    "r_root_counts",
    "weil_bound",
    "is_eligible",
    "exp_sum_moduli",
    "r_sums_all_residues",
    "check_weil_bounds",
    "weil_sweep",
    "BOUND_SLACK",
]

BOUND_SLACK = 1e-9


class WeilStatus(enum.Enum):
    SATISFIED = "SATISFIED"
    VIOLATED = "VIOLATED"
    SKIPPED = "SKIPPED"


@dataclass(frozen=True)
class WeilReport:
    family: PSetFamily
    p: int
    d: int
    h: tuple
    modulus_of_sum: float
    bound: float
    status: WeilStatus

    @property
    def satisfied(self) -> bool:
        return self.status is WeilStatus.SATISFIED


def _check_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"p: {p} is not prime")
    return p


def _roots(m: int) -> np.ndarray:
    r = np.arange(m) * (2.0 * math.pi / m)
    return np.cos(r) + 1j * np.sin(r)


def _poly_phases(H: np.ndarray, n: np.ndarray, m: int) -> np.ndarray:
    """``(h_1 n + ... + h_d n^d) mod m`` for each row of ``H`` and each ``n``."""
    d = H.shape[1]
    V = power_table(n, d, m)                      # (len(n), d), entries < m
    Hm = np.mod(H, m).astype(np.int64)            # (M, d)
    if d * m * m >= 2**63:
        raise OverflowError(f"modulus {m} too large for int64 phase arithmetic")
    return (Hm @ V.T) % m                         # (M, len(n))


def _as_h(h) -> np.ndarray:
    return np.asarray(h, dtype=np.int64).reshape(1, -1)


def exp_sum_P(p: int, h: Sequence[int]) -> float:
    """``|sum_{n=0}^{p-1} exp(2 pi i (h_1 n + ... + h_d n^d) / p)|``."""
    p = _check_prime(p)
    ph = _poly_phases(_as_h(h), np.arange(p), p)[0]
    return float(abs(_roots(p)[ph].sum()))


def exp_sum_Q(p: int, h: Sequence[int]) -> float:
    """``|sum_{n=0}^{p^2-1} exp(2 pi i (h_1 n + ... + h_d n^d) / p^2)|``."""
    p = _check_prime(p)
    m = p * p
    ph = _poly_phases(_as_h(h), np.arange(m), m)[0]
    return float(abs(_roots(m)[ph].sum()))


def _g_values(p: int, h: Sequence[int]) -> np.ndarray:
    """``g_h(a) mod p`` for ``a = 0, ..., p-1``."""
    h = [int(v) % p for v in h]
    a = np.arange(p, dtype=np.int64)
    g = np.full(p, h[0], dtype=np.int64)
    if len(h) > 1:
        g = (g + _poly_phases(np.array([h[1:]]), a, p)[0]) % p
    return g


def exp_sum_R(p: int, h: Sequence[int]) -> float:
    """Direct double sum ``|sum_a sum_k exp(2 pi i k g_h(a) / p)|``."""
    p = _check_prime(p)
    g = _g_values(p, h)
    k = np.arange(p, dtype=np.int64)
    ph = (k[None, :] * g[:, None]) % p
    return float(abs(_roots(p)[ph].sum()))


def exp_sum_R_roots(p: int, h: Sequence[int]) -> int:
    """``p`` times the number of roots of ``g_h`` in ``F_p``.

    The inner sum over ``k`` is ``p`` when ``p | g_h(a)`` and 0 otherwise.
    """
    p = _check_prime(p)
    return p * int(np.count_nonzero(_g_values(p, h) == 0))


def r_root_counts(p: int, H: np.ndarray, chunk: int = 1 << 22) -> np.ndarray:
    """Number of ``a`` in ``F_p`` with ``g_h(a) = 0``, for each row of ``H``."""
    p = _check_prime(p)
    H = np.asarray(H, dtype=np.int64)
    M, d = H.shape
    a = np.arange(p, dtype=np.int64)
    out = np.empty(M, dtype=np.int64)
    rows = max(1, chunk // p)
    for s in range(0, M, rows):
        Hs = H[s : s + rows]
        g = np.mod(Hs[:, :1], p)
        if d > 1:
            g = (g + _poly_phases(Hs[:, 1:], a, p)) % p
        else:
            g = np.broadcast_to(g, (Hs.shape[0], p))
        out[s : s + rows] = np.count_nonzero(g == 0, axis=1)
    return out


def weil_bound(family, p: int, d: int) -> float:
    family = PSetFamily.parse(family)
    if family is PSetFamily.KOROBOV_P:
        return (d - 1) * math.sqrt(p)
    return float((d - 1) * p)


def is_eligible(p: int, h: Sequence[int]) -> bool:
    """Hypothesis of the bounds: ``p`` does not divide some ``h_j``."""
    return any(int(v) % p for v in h)


def r_sums_all_residues(p: int, d: int) -> np.ndarray:
    """The R-family complex sums for every ``h`` in ``(Z/p)^d`` at once.

    The R sum at ``h`` is ``sum_x c(x) e(h.x / p)`` where ``c`` counts the
    points ``x_(a,k) = k (1, a, ..., a^(d-1)) mod p``; this is a
    d-dimensional DFT of ``c``, which is what numpy's ``ifftn`` computes (up
    to the factor ``p^d``).  Returns a complex array of shape ``(p,)*d``.
    """
    p = _check_prime(p)
    a = np.arange(p, dtype=np.int64)
    gen = np.ones((p, d), dtype=np.int64)
    if d > 1:
        gen[:, 1:] = power_table(a, d - 1, p)
    pts = (gen[:, None, :] * a[None, :, None]) % p
    counts = np.zeros((p,) * d)
    np.add.at(counts, tuple(pts.reshape(-1, d).T), 1.0)
    return np.fft.ifftn(counts) * float(p) ** d


def exp_sum_moduli(family, p: int, H: np.ndarray, chunk: int = 1 << 22) -> np.ndarray:
    """Brute-force moduli for many frequency vectors (rows of ``H``).

    ``P`` and ``Q`` sum the roots of unity term by term.  ``R`` is
    evaluated through :func:`r_sums_all_residues`.
    """
    family = PSetFamily.parse(family)
    p = _check_prime(p)
    H = np.asarray(H, dtype=np.int64)
    if H.ndim != 2:
        raise ValueError("H: expected a 2-d array of frequency vectors")
    M, d = H.shape
    if family is PSetFamily.KOROBOV_R:
        table = np.abs(r_sums_all_residues(p, d))
        return table[tuple(np.mod(H, p).T)]
    m = p if family is PSetFamily.KOROBOV_P else p * p
    n = np.arange(m)
    roots = _roots(m)
    out = np.empty(M)
    rows = max(1, chunk // m)
    for s in range(0, M, rows):
        ph = _poly_phases(H[s : s + rows], n, m)
        out[s : s + rows] = np.abs(roots[ph].sum(axis=1))
    return out


def _h_box(d: int, hmax: int) -> np.ndarray:
    r = np.arange(-hmax, hmax + 1, dtype=np.int64)
    grids = np.meshgrid(*([r] * d), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _residue_grid(p: int, d: int) -> np.ndarray:
    grids = np.meshgrid(*([np.arange(p, dtype=np.int64)] * d), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _status(mod: float, bound: float) -> WeilStatus:
    return WeilStatus.SATISFIED if mod <= bound + BOUND_SLACK else WeilStatus.VIOLATED


def check_weil_bounds(
    family, p: int, d: int, hmax: Optional[int] = None, hs: Optional[Iterable] = None
) -> list[WeilReport]:
    """One :class:`WeilReport` per ``h`` in ``[-hmax, hmax]^d`` (default ``hmax = p``).

    Vectors outside the hypothesis are reported as ``SKIPPED``.  Pass ``hs``
    to check an explicit list of frequency vectors instead of a box.
    """
    family = PSetFamily.parse(family)
    p = _check_prime(p)
    d = int(d)
    if d < 1:
        raise ValueError(f"d: must be a positive integer, got {d}")
    if hs is not None:
        H = np.array([tuple(h) for h in hs], dtype=np.int64).reshape(-1, d)
    else:
        H = _h_box(d, p if hmax is None else int(hmax))
    bound = weil_bound(family, p, d)
    elig = np.any(np.mod(H, p) != 0, axis=1)
    mods = np.full(H.shape[0], np.nan)
    if elig.any():
        mods[elig] = exp_sum_moduli(family, p, H[elig])
    reports = []
    for h, e, mod in zip(H.tolist(), elig.tolist(), mods.tolist()):
        if not e:
            reports.append(WeilReport(family, p, d, tuple(h), math.nan, bound, WeilStatus.SKIPPED))
        else:
            reports.append(WeilReport(family, p, d, tuple(h), mod, bound, _status(mod, bound)))
    return reports


@dataclass(frozen=True)
class WeilSummary:
    family: PSetFamily
    p: int
    d: int
    hmax: int
    n_eligible: int
    n_skipped: int
    n_violations: int
    max_modulus: float
    bound: float
    violations: tuple          # (h, modulus) pairs, at most ``keep`` of them

    @property
    def max_ratio(self) -> float:
        return self.max_modulus / self.bound if self.bound > 0 else (
            0.0 if self.max_modulus <= BOUND_SLACK else math.inf
        )


def weil_sweep(family, p: int, d: int, hmax: Optional[int] = None, keep: int = 10) -> WeilSummary:
    """Exhaustive check over ``[-hmax, hmax]^d`` without building report objects.

    For ``P`` and ``R`` the modulus depends on ``h`` only through
    ``h mod p``, so each residue class is evaluated once and counted with its
    multiplicity in the box.
    """
    family = PSetFamily.parse(family)
    p = _check_prime(p)
    hmax = p if hmax is None else int(hmax)
    bound = weil_bound(family, p, d)
    if family is PSetFamily.KOROBOV_Q or 2 * hmax + 1 < p:
        H = _h_box(d, hmax)
        mult = np.ones(H.shape[0], dtype=np.int64)
    else:
        # multiplicity of each residue among -hmax..hmax
        r = np.arange(-hmax, hmax + 1) % p
        per_axis = np.bincount(r, minlength=p)
        H = _residue_grid(p, d)
        mult = np.prod(per_axis[H], axis=1)
    elig = np.any(np.mod(H, p) != 0, axis=1)
    He, me = H[elig], mult[elig]
    mods = exp_sum_moduli(family, p, He) if He.shape[0] else np.zeros(0)
    bad = mods > bound + BOUND_SLACK
    viol = tuple(
        (tuple(h), float(v)) for h, v in zip(He[bad][:keep].tolist(), mods[bad][:keep].tolist())
    )
    return WeilSummary(
        family, p, d, hmax,
        n_eligible=int(me.sum()),
        n_skipped=int(mult[~elig].sum()),
        n_violations=int(me[bad].sum()),
        max_modulus=float(mods.max()) if mods.size else 0.0,
        bound=bound,
        violations=viol,
    )
