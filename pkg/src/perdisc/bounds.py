"""Closed-form bounds and averages for the periodic L2-discrepancy.

Covers the p-set upper bound ``d 2^(-d/2) N^(-1/2)``, the average over random
point sets, the initial (empty-set) discrepancy, and the lower and upper
bounds on the inverse discrepancy that exhibit the curse of dimensionality.

Powers such as ``(3/2)^d`` are built by repeated multiplication; the integer
``M = ceil((3/2)^d d^2 / eps^2)`` is computed in exact rational arithmetic.
A float ``eps`` is read through its shortest decimal representation, so
``0.1`` means ``1/10``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .korobov import PSetFamily, generate, next_prime
from .discrepancy import periodic_l2

__all__ = [
    "BoundReport",
    "WeightedLowerBound",
    "InverseUpper",
    "InverseBoundRow",
    "theorem1_bound",
    "average_periodic_l2",
    "initial_periodic_l2",
    "inverse_lower_equal",
    "inverse_lower_posweights",
    "inverse_lower_weighted",
    "inverse_upper_from_psets",
    "inverse_bound_table",
    "check_theorem1",
    "THM1_SLACK",
    "WEIGHTED_BASE",
]

THM1_SLACK = 1e-12
WEIGHTED_BASE = 1.0628
_POSWEIGHT_INTERMEDIATE_BASE = 1.125


def _pow(base: float, d: int) -> float:
    out = 1.0
    for _ in range(d):
        out *= base
    return out


def _check_d(d: int) -> int:
    d = int(d)
    if d < 1:
        raise ValueError(f"d: must be a positive integer, got {d}")
    return d


def _check_eps(eps, *, closed: bool = False) -> None:
    ok = 0 < eps <= 1 if closed else 0 < eps < 1
    if not ok:
        raise ValueError(f"eps: must lie in {'(0, 1]' if closed else '(0, 1)'}, got {eps}")


def _eps_fraction(eps) -> Fraction:
    if isinstance(eps, float):
        return Fraction(repr(eps))
    return Fraction(eps)


def theorem1_bound(d: int, N: int) -> float:
    """``d / 2^(d/2) / sqrt(N)``."""
    d = _check_d(d)
    if N < 1:
        raise ValueError(f"N: must be a positive integer, got {N}")
    return d * 2.0 ** (-d / 2.0) / math.sqrt(N)


def average_periodic_l2(N: int, d: int, kind: str = "periodic") -> float:
    """Root mean square discrepancy over i.i.d. uniform N-point sets.

    The periodic and the plain L2-discrepancy share the same value,
    ``N^(-1/2) (2^-d - 3^-d)^(1/2)``; ``kind`` only labels which one is meant.
    """
    if kind not in ("periodic", "plain"):
        raise ValueError(f"kind: expected 'periodic' or 'plain', got {kind!r}")
    d = _check_d(d)
    if N < 1:
        raise ValueError(f"N: must be a positive integer, got {N}")
    return math.sqrt(_pow(0.5, d) - _pow(1.0 / 3.0, d)) / math.sqrt(N)


def initial_periodic_l2(d: int) -> float:
    """Discrepancy of the empty point set, ``3^(-d/2)``."""
    d = _check_d(d)
    return 3.0 ** (-d / 2.0)


def inverse_lower_equal(eps: float, d: int) -> float:
    """Lower bound ``(3/2)^d / (1 + eps^2)`` for equal weights."""
    _check_eps(eps)
    return _pow(1.5, _check_d(d)) / (1.0 + eps * eps)


def inverse_lower_posweights(eps: float, d: int) -> float:
    """Lower bound ``(1 - eps^2) (3/2)^d`` for non-negative weights."""
    _check_eps(eps)
    return (1.0 - eps * eps) * _pow(1.5, _check_d(d))


@dataclass(frozen=True)
class WeightedLowerBound:
    """The arbitrary-weight lower bound ``c * base^d`` with ``c`` unknown."""

    base: float
    d: int
    intermediate: float
    note: str = field(
        default="exponent only: the constant c depends on eps0 and is not known explicitly"
    )

    @property
    def growth(self) -> float:
        """``base^d``, the bound up to the unknown constant."""
        return _pow(self.base, self.d)


def inverse_lower_weighted(eps: float, d: int) -> WeightedLowerBound:
    """``c 1.0628^d``, plus the explicit ``(1 - eps^2) 1.125^d`` bound
    that holds for non-negative weights."""
    _check_eps(eps)
    d = _check_d(d)
    inter = (1.0 - eps * eps) * _pow(_POSWEIGHT_INTERMEDIATE_BASE, d)
    return WeightedLowerBound(WEIGHTED_BASE, d, inter)


@dataclass(frozen=True)
class InverseUpper:
    M: int
    N_prime: int
    upper: int


def inverse_upper_from_psets(eps, d: int) -> InverseUpper:
    """``M = ceil((3/2)^d d^2 / eps^2)``, the next prime ``N >= M``, and ``2M``.

    ``eps = 1`` is accepted for the arithmetic even though the inverse
    discrepancy is only meaningful for ``eps < 1``.
    """
    e = _eps_fraction(eps)
    _check_eps(e, closed=True)
    d = _check_d(d)
    ratio = Fraction(3**d * d * d, 2**d) / (e * e)
    M = -((-ratio.numerator) // ratio.denominator)
    Np = next_prime(M)
    if not (M <= Np < 2 * M or M == 1):
        raise AssertionError(f"Bertrand interval violated: M={M}, prime={Np}")
    return InverseUpper(M, Np, 2 * M)


@dataclass(frozen=True)
class InverseBoundRow:
    d: int
    eps: float
    lower_equal: float
    lower_posweights: float
    lower_weighted_base: float
    lower_weighted_intermediate: float
    M: int
    N_prime: int
    upper_from_psets: int


def inverse_bound_table(ds, epss) -> list[InverseBoundRow]:
    rows = []
    for d in ds:
        for eps in epss:
            up = inverse_upper_from_psets(eps, d)
            w = inverse_lower_weighted(eps, d)
            rows.append(
                InverseBoundRow(
                    d=d,
                    eps=eps,
                    lower_equal=inverse_lower_equal(eps, d),
                    lower_posweights=inverse_lower_posweights(eps, d),
                    lower_weighted_base=w.base,
                    lower_weighted_intermediate=w.intermediate,
                    M=up.M,
                    N_prime=up.N_prime,
                    upper_from_psets=up.upper,
                )
            )
    return rows


@dataclass(frozen=True)
class BoundReport:
    """A checked inequality ``lhs <= rhs``."""

    name: str
    params: dict
    lhs: float
    rhs: float
    passed: bool

    def as_record(self) -> dict:
        return {"name": self.name, **self.params, "lhs": self.lhs, "rhs": self.rhs, "pass": self.passed}


def check_theorem1(family, p: int, d: int, *, slack: float = THM1_SLACK) -> BoundReport:
    """Compute the periodic L2-discrepancy of a p-set and compare with the bound."""
    fam = PSetFamily.parse(family)
    P = generate(fam, p, d)
    value = periodic_l2(P).value
    bound = theorem1_bound(d, P.n_points)
    return BoundReport(
        "theorem1",
        {"family": fam.value, "p": int(p), "d": int(d), "N": P.n_points},
        value,
        bound,
        value <= bound + slack,
    )
