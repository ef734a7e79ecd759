"""Point sets on the torus, periodic boxes and the local discrepancy.

Two representations are used throughout the package:

* :class:`PointSet` stores every coordinate exactly as an integer numerator
  over one common denominator.  All Korobov constructions produce these, and
  the exact pair-difference arithmetic in :mod:`perdisc.discrepancy` relies
  on it.
* :class:`FreePointSet` stores plain floating coordinates in ``[0, 1)``; it
  is what shifting or random sampling produces.

Both are immutable.  Weights are ordinary 1-d float arrays; see
:func:`equal_weights`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, TextIO, Union

import numpy as np

__all__ = [
    "PointSet",
    "FreePointSet",
    "PeriodicBox",
    "build_point_set",
    "free_point_set",
    "shift_point_set",
    "periodic_box_volume",
    "point_in_periodic_box",
    "local_discrepancy",
    "equal_weights",
    "as_weights",
    "coords",
    "read_point_set",
    "write_point_set",
    "load_point_set",
    "dump_point_set",
    "read_weights",
]

# float_coords must be correctly rounded quotients, so both operands of the
# division have to be exactly representable as doubles.
_MAX_EXACT_INT = 2**53


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PointSet:
    """N points with rational coordinates ``numerators / denom``.

    Use :func:`build_point_set` to construct one; it validates and reduces
    the numerators.
    """

    numerators: np.ndarray
    denom: int
    float_coords: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "float_coords", _frozen(self.numerators / float(self.denom))
        )

    @property
    def dim(self) -> int:
        return self.numerators.shape[1]

    @property
    def n_points(self) -> int:
        return self.numerators.shape[0]

    def __len__(self):
        return self.n_points

    def __repr__(self):
        return f"PointSet(dim={self.dim}, n_points={self.n_points}, denom={self.denom})"


@dataclass(frozen=True, eq=False)
class FreePointSet:
    """N points with floating coordinates in ``[0, 1)``."""

    coords: np.ndarray

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    @property
    def n_points(self) -> int:
        return self.coords.shape[0]

    @property
    def float_coords(self) -> np.ndarray:
        return self.coords

    def __len__(self):
        return self.n_points

    def __repr__(self):
        return f"FreePointSet(dim={self.dim}, n_points={self.n_points})"


AnyPointSet = Union[PointSet, FreePointSet]


def build_point_set(dim: int, denom: int, numerators) -> PointSet:
    """Build a :class:`PointSet` from integer numerators over ``denom``.

    Numerators outside ``[0, denom)`` are reduced modulo ``denom``.

    Examples
    --------
    >>> build_point_set(1, 3, [[7]]).float_coords.tolist()
    [[0.3333333333333333]]
    """
    dim = int(dim)
    denom = int(denom)
    if dim < 1:
        raise ValueError(f"dim: must be a positive integer, got {dim}")
    if denom < 1:
        raise ValueError(f"denom: must be a positive integer, got {denom}")
    if denom >= _MAX_EXACT_INT:
        raise OverflowError(f"denom: {denom} exceeds 2**53")
    if isinstance(numerators, np.ndarray) and numerators.dtype.kind in "iu":
        arr = numerators.astype(np.int64, copy=True)
    else:
        rows = [[int(v) for v in row] for row in numerators]
        arr = np.array(rows, dtype=np.int64) if rows else np.zeros((0, dim), np.int64)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, dim)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise ValueError(
            f"numerators: expected shape (N, {dim}), got {tuple(arr.shape)}"
        )
    np.mod(arr, denom, out=arr)
    return PointSet(_frozen(arr), denom)


def free_point_set(coords) -> FreePointSet:
    """Wrap an ``(N, d)`` array of coordinates in ``[0, 1)``."""
    arr = np.array(coords, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise ValueError(f"coords: expected shape (N, d) with d >= 1, got {arr.shape}")
    if arr.size and (arr.min() < 0.0 or arr.max() >= 1.0):
        raise ValueError("coords: all coordinates must lie in [0, 1)")
    return FreePointSet(_frozen(arr))


def coords(P: AnyPointSet) -> np.ndarray:
    """Floating coordinates of either representation."""
    return P.float_coords


def _frac(a: np.ndarray) -> np.ndarray:
    out = a - np.floor(a)
    # x + delta can round up to exactly 1.0 for x just below 1
    out[out >= 1.0] = 0.0
    return out


def shift_point_set(P: AnyPointSet, delta) -> FreePointSet:
    """Shift every point by ``delta`` modulo 1, component-wise.

    Examples
    --------
    >>> shift_point_set(free_point_set([[0.25, 0.75]]), [0.75, 0.75]).coords.tolist()
    [[0.0, 0.5]]
    """
    delta = np.asarray(delta, dtype=np.float64).reshape(-1)
    if delta.shape[0] != P.dim:
        raise ValueError(f"delta: expected length {P.dim}, got {delta.shape[0]}")
    if np.any(delta < 0.0) or np.any(delta >= 1.0):
        raise ValueError("delta: components must lie in [0, 1)")
    return FreePointSet(_frozen(_frac(P.float_coords + delta)))


@dataclass(frozen=True, eq=False)
class PeriodicBox:
    """Product of wrap-around intervals ``I(x_j, y_j)``.

    ``I(x, y)`` is ``[x, y)`` when ``x <= y`` and ``[0, y) U [x, 1)`` otherwise;
    in particular ``I(x, x)`` is empty.
    """

    anchor_x: np.ndarray
    anchor_y: np.ndarray

    def __init__(self, anchor_x, anchor_y):
        x = np.asarray(anchor_x, dtype=np.float64).reshape(-1)
        y = np.asarray(anchor_y, dtype=np.float64).reshape(-1)
        if x.shape != y.shape:
            raise ValueError("anchor_x and anchor_y must have the same length")
        object.__setattr__(self, "anchor_x", _frozen(x))
        object.__setattr__(self, "anchor_y", _frozen(y))
        # exact copies of the anchors, used by the rational membership path
        object.__setattr__(self, "_exact", (list(anchor_x), list(anchor_y)))

    @property
    def dim(self) -> int:
        return self.anchor_x.shape[0]

    def volume(self) -> float:
        return periodic_box_volume(self)

    def __contains__(self, pt):
        return point_in_periodic_box(pt, self)


def periodic_box_volume(B: PeriodicBox) -> float:
    x, y = B.anchor_x, B.anchor_y
    lengths = np.where(x <= y, y - x, 1.0 - x + y)
    return float(np.prod(lengths))


def _inside(X: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Membership mask of rows of ``X`` in the box; broadcasts over leading axes."""
    plain = (x <= X) & (X < y)
    wrap = (X < y) | (X >= x)
    return np.all(np.where(x <= y, plain, wrap), axis=-1)


def point_in_periodic_box(pt, B: PeriodicBox) -> bool:
    pt = np.asarray(pt, dtype=np.float64).reshape(-1)
    if pt.shape[0] != B.dim:
        raise ValueError(f"pt: expected length {B.dim}, got {pt.shape[0]}")
    return bool(_inside(pt, B.anchor_x, B.anchor_y))


def equal_weights(n: int) -> np.ndarray:
    """Weights ``1/n`` (correctly rounded) for an ``n``-point set."""
    if n < 1:
        raise ValueError("equal weights need at least one point")
    return np.full(n, 1.0 / n)


def as_weights(P: AnyPointSet, w) -> np.ndarray:
    """Validate a weight vector against ``P``; ``None`` means equal weights."""
    if w is None:
        return equal_weights(P.n_points)
    w = np.asarray(w, dtype=np.float64).reshape(-1)
    if w.shape[0] != P.n_points:
        raise ValueError(
            f"weights: length {w.shape[0]} does not match n_points={P.n_points}"
        )
    return w


def _exact_inside(P: PointSet, B: PeriodicBox) -> np.ndarray:
    xs = [Fraction(v) for v in B._exact[0]]
    ys = [Fraction(v) for v in B._exact[1]]
    D = P.denom
    mask = np.ones(P.n_points, dtype=bool)
    for j, (x, y) in enumerate(zip(xs, ys)):
        # t = n/D compared with a/b as n*b against a*D
        n = [int(v) for v in P.numerators[:, j]]
        ge_x = np.array([v * x.denominator >= x.numerator * D for v in n], dtype=bool)
        lt_y = np.array([v * y.denominator < y.numerator * D for v in n], dtype=bool)
        mask &= (ge_x & lt_y) if x <= y else (ge_x | lt_y)
    return mask


def local_discrepancy(P: AnyPointSet, w, B: PeriodicBox, exact: bool = False):
    """Weight inside ``B`` minus the volume of ``B``.

    Parameters
    ----------
    P : PointSet or FreePointSet
    w : array_like or None
        Weights; ``None`` selects equal weights ``1/N`` (and requires N >= 1).
    B : PeriodicBox
    exact : bool
        For a :class:`PointSet` and rational anchors (ints, Fractions or
        floats, which are binary rationals), do membership and volume in
        exact rational arithmetic and return a :class:`~fractions.Fraction`.
        Weights are converted with ``Fraction(w_j)``; equal weights become
        exactly ``1/N``.
    """
    if B.dim != P.dim:
        raise ValueError(f"box dimension {B.dim} does not match point set dim {P.dim}")
    if exact:
        if not isinstance(P, PointSet):
            raise TypeError("exact local discrepancy needs a PointSet")
        mask = _exact_inside(P, B)
        if w is None:
            if P.n_points == 0:
                raise ValueError("equal weights need at least one point")
            ws = [Fraction(1, P.n_points)] * P.n_points
        else:
            if len(w) != P.n_points:
                raise ValueError(
                    f"weights: length {len(w)} does not match n_points={P.n_points}"
                )
            ws = [Fraction(v) for v in w]
        vol = Fraction(1)
        for x, y in zip(*B._exact):
            x, y = Fraction(x), Fraction(y)
            vol *= (y - x) if x <= y else (1 - x + y)
        return sum((wj for wj, m in zip(ws, mask) if m), Fraction(0)) - vol
    if P.n_points == 0:
        return -periodic_box_volume(B)
    w = as_weights(P, w)
    mask = _inside(P.float_coords, B.anchor_x, B.anchor_y)
    return float(np.sum(w[mask])) - periodic_box_volume(B)


# -- text format -------------------------------------------------------------
#
#   d N D        header; D is '*' for a FreePointSet
#   n_1 ... n_d  one line per point (integers, or decimal floats for '*')


def write_point_set(P: AnyPointSet, fh: TextIO) -> None:
    if isinstance(P, PointSet):
        fh.write(f"{P.dim} {P.n_points} {P.denom}\n")
        for row in P.numerators.tolist():
            fh.write(" ".join(str(v) for v in row) + "\n")
    else:
        fh.write(f"{P.dim} {P.n_points} *\n")
        for row in P.coords.tolist():
            fh.write(" ".join(repr(v) for v in row) + "\n")


def dump_point_set(P: AnyPointSet) -> str:
    import io

    buf = io.StringIO()
    write_point_set(P, buf)
    return buf.getvalue()


def _data_lines(lines: Iterable[str]):
    for raw in lines:
        line = raw.strip()
        if line and not line.startswith("#"):
            yield line


def read_point_set(fh: Iterable[str]) -> AnyPointSet:
    """Parse the text format written by :func:`write_point_set`."""
    lines = _data_lines(fh)
    try:
        header = next(lines).split()
    except StopIteration:
        raise ValueError("header: empty point-set file") from None
    if len(header) != 3:
        raise ValueError(f"header: expected 'd N D', got {' '.join(header)!r}")
    try:
        d, n = int(header[0]), int(header[1])
    except ValueError:
        raise ValueError(f"header: d and N must be integers, got {header[:2]}") from None
    if d < 1:
        raise ValueError(f"header: dim must be positive, got {d}")
    if n < 0:
        raise ValueError(f"header: N must be non-negative, got {n}")
    free = header[2] == "*"
    if not free:
        try:
            D = int(header[2])
        except ValueError:
            raise ValueError(f"header: denominator must be an integer or '*', got {header[2]!r}") from None
    rows: list[Sequence] = []
    conv = float if free else int
    for i, line in enumerate(lines):
        parts = line.split()
        if len(parts) != d:
            raise ValueError(f"point {i}: expected {d} values, got {len(parts)}")
        try:
            rows.append([conv(v) for v in parts])
        except ValueError:
            raise ValueError(f"point {i}: malformed value in {line!r}") from None
    if len(rows) != n:
        raise ValueError(f"header: declares N={n} points but file has {len(rows)}")
    if free:
        return free_point_set(np.array(rows, dtype=np.float64).reshape(n, d))
    for i, row in enumerate(rows):
        if any(v < 0 or v >= D for v in row):
            raise ValueError(f"point {i}: numerator outside [0, {D})")
    return build_point_set(d, D, rows)


def load_point_set(path) -> AnyPointSet:
    with open(path) as fh:
        return read_point_set(fh)


def read_weights(fh: Iterable[str]) -> np.ndarray:
    """One weight per line (blank lines and ``#`` comments ignored)."""
    vals = []
    for i, line in enumerate(_data_lines(fh)):
        try:
            vals.append(float(line))
        except ValueError:
            raise ValueError(f"weights: line {i} is not a number: {line!r}") from None
    return np.array(vals, dtype=np.float64)
