"""Korobov's p-sets and the modular arithmetic behind them.

Three families, all with prime modulus ``p``:

``P``  ``x_n = ({n/p}, {n^2/p}, ..., {n^d/p})``,           ``n < p``
``Q``  ``x_n = ({n/p^2}, {n^2/p^2}, ..., {n^d/p^2})``,     ``n < p^2``
``R``  ``x_(a,k) = ({k/p}, {a k/p}, ..., {a^(d-1) k/p})``, ``a, k < p``

``R`` is the multiset union of the Korobov lattices with modulus ``p``;
duplicate points are kept, and points are ordered with ``a`` as the outer
index.
"""

from __future__ import annotations

import enum

import numpy as np

from .pointset import PointSet, build_point_set

__all__ = [
    "PSetFamily",
    "is_prime",
    "next_prime",
    "mod_pow",
    "gen_korobov_P",
    "gen_korobov_Q",
    "gen_korobov_R",
    "generate",
    "power_table",
]


class PSetFamily(enum.Enum):
    KOROBOV_P = "P"
    KOROBOV_Q = "Q"
    KOROBOV_R = "R"

    @classmethod
    def parse(cls, value) -> "PSetFamily":
        if isinstance(value, cls):
            return value
        key = str(value).upper()
        for member in cls:
            if key in (member.value, member.name):
                return member
        raise ValueError(f"family: expected one of P, Q, R, got {value!r}")

    def n_points(self, p: int) -> int:
        return p if self is PSetFamily.KOROBOV_P else p * p


# Witnesses 2..37 are a deterministic Miller-Rabin certificate for every
# n < 3.3e24, in particular for all 64-bit integers.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test, exact for ``n < 3.3 * 10**24``."""
    n = int(n)
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = mod_pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime ``>= n``."""
    n = int(n)
    if n < 1:
        raise ValueError(f"n: must be positive, got {n}")
    if n <= 2:
        return 2
    q = n if n % 2 else n + 1
    while not is_prime(q):
        q += 2
    return q


def mod_pow(base: int, exp: int, modulus: int) -> int:
    """``base**exp mod modulus`` in ``[0, modulus)``."""
    if modulus < 1:
        raise ValueError(f"modulus: must be positive, got {modulus}")
    if exp < 0:
        raise ValueError(f"exp: must be non-negative, got {exp}")
    # Python ints are arbitrary precision, so the builtin square-and-multiply
    # cannot overflow.
    return pow(int(base), int(exp), int(modulus))


def _check_args(p: int, d: int) -> tuple[int, int]:
    p, d = int(p), int(d)
    if d < 1:
        raise ValueError(f"d: must be a positive integer, got {d}")
    if not is_prime(p):
        raise ValueError(f"p: {p} is not prime")
    return p, d


def power_table(base: np.ndarray, d: int, modulus: int) -> np.ndarray:
    """Columns ``base**1, ..., base**d`` reduced mod ``modulus``.

    Products are formed on reduced residues, so int64 suffices while
    ``modulus**2 < 2**63``; larger moduli fall back to Python integers.
    """
    base = np.asarray(base)
    if modulus * modulus < 2**63:
        b = np.mod(base.astype(np.int64), modulus)
        out = np.empty((b.shape[0], d), dtype=np.int64)
        cur = b.copy()
        for j in range(d):
            out[:, j] = cur
            if j + 1 < d:
                cur = cur * b % modulus
        return out
    rows = [[mod_pow(int(v), j, modulus) for j in range(1, d + 1)] for v in base]
    return np.array(rows, dtype=object)


def gen_korobov_P(p: int, d: int) -> PointSet:
    """``p`` points ``(n, n^2, ..., n^d) / p`` for ``n = 0, ..., p-1``."""
    p, d = _check_args(p, d)
    nums = power_table(np.arange(p), d, p)
    return build_point_set(d, p, nums.astype(np.int64))


def gen_korobov_Q(p: int, d: int) -> PointSet:
    """``p^2`` points ``(n, n^2, ..., n^d) / p^2`` for ``n < p^2``."""
    p, d = _check_args(p, d)
    m = p * p
    if m >= 2**53:
        raise OverflowError(f"p: p**2 = {m} exceeds the exact floating range")
    nums = power_table(np.arange(m, dtype=np.int64), d, m)
    return build_point_set(d, m, nums.astype(np.int64))


def gen_korobov_R(p: int, d: int) -> PointSet:
    """``p^2`` points ``k (1, a, ..., a^(d-1)) / p``, ``a`` outer, ``k`` inner."""
    p, d = _check_args(p, d)
    a = np.arange(p, dtype=np.int64)
    gen = np.ones((p, d), dtype=np.int64)
    if d > 1:
        gen[:, 1:] = power_table(a, d - 1, p)
    k = np.arange(p, dtype=np.int64)
    nums = (gen[:, None, :] * k[None, :, None]) % p
    return build_point_set(d, p, nums.reshape(p * p, d))


_GENERATORS = {
    PSetFamily.KOROBOV_P: gen_korobov_P,
    PSetFamily.KOROBOV_Q: gen_korobov_Q,
    PSetFamily.KOROBOV_R: gen_korobov_R,
}


def generate(family, p: int, d: int) -> PointSet:
    """Dispatch on a :class:`PSetFamily` (or its tag ``'P'``, ``'Q'``, ``'R'``)."""
    return _GENERATORS[PSetFamily.parse(family)](p, d)
