import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from perdisc.pointset import (
    FreePointSet,
    PeriodicBox,
    PointSet,
    build_point_set,
    dump_point_set,
    equal_weights,
    free_point_set,
    local_discrepancy,
    periodic_box_volume,
    point_in_periodic_box,
    read_point_set,
    read_weights,
    shift_point_set,
)

unit = st.floats(0.0, 1.0, exclude_max=True, allow_nan=False)


def test_build_point_set_examples():
    P = build_point_set(1, 5, [[0], [1], [2], [3], [4]])
    assert P.float_coords.ravel().tolist() == [0.0, 0.2, 0.4, 0.6, 0.8]
    assert (P.dim, P.n_points, P.denom) == (1, 5, 5)

    E = build_point_set(2, 1, [])
    assert E.n_points == 0 and E.dim == 2

    S = build_point_set(1, 3, [[7]])
    assert S.numerators.tolist() == [[1]]
    assert S.float_coords[0, 0] == 1 / 3


def test_build_point_set_reduces_negative_numerators():
    assert build_point_set(2, 4, [[-1, 9]]).numerators.tolist() == [[3, 1]]


@pytest.mark.parametrize("dim, denom", [(0, 5), (1, 0), (-1, 2)])
def test_build_point_set_rejects(dim, denom):
    with pytest.raises(ValueError):
        build_point_set(dim, denom, [])


def test_build_point_set_shape_mismatch():
    with pytest.raises(ValueError, match="numerators"):
        build_point_set(2, 5, [[1]])


def test_point_set_is_immutable():
    P = build_point_set(1, 5, [[1]])
    with pytest.raises(ValueError):
        P.numerators[0, 0] = 2
    with pytest.raises(ValueError):
        P.float_coords[0, 0] = 0.5


@given(st.integers(1, 2**40), st.data())
def test_float_coords_correctly_rounded(denom, data):
    n = data.draw(st.integers(0, denom - 1))
    P = build_point_set(1, denom, [[n]])
    # float(Fraction) rounds correctly
    assert P.float_coords[0, 0] == float(Fraction(n, denom))


def test_shift_examples():
    assert shift_point_set(free_point_set([[0.8]]), [0.3]).coords[0, 0] == pytest.approx(0.1)
    P = build_point_set(2, 4, [[1, 3]])
    assert shift_point_set(P, [0.75, 0.75]).coords.tolist() == [[0.0, 0.5]]
    assert np.array_equal(shift_point_set(P, [0.0, 0.0]).coords, P.float_coords)


def test_shift_errors():
    P = free_point_set([[0.1, 0.2]])
    with pytest.raises(ValueError):
        shift_point_set(P, [0.1])
    with pytest.raises(ValueError):
        shift_point_set(P, [0.1, 1.0])


def test_shift_lands_in_unit_interval():
    # 1 - 2**-53 + 2**-53 rounds to exactly 1.0
    x = 1.0 - 2.0**-53
    out = shift_point_set(free_point_set([[x]]), [2.0**-53]).coords
    assert 0.0 <= out[0, 0] < 1.0


@given(st.lists(unit, min_size=1, max_size=5), unit, unit)
def test_shift_composition(xs, a, b):
    P = free_point_set([[x] for x in xs])
    two = shift_point_set(shift_point_set(P, [a]), [b]).coords.ravel()
    c = (a + b) % 1.0
    if c >= 1.0:
        c = 0.0
    one = shift_point_set(P, [c]).coords.ravel()
    # compare on the circle
    gap = np.abs(two - one)
    gap = np.minimum(gap, 1.0 - gap)
    assert np.all(gap <= 4 * np.spacing(1.0))


def test_box_volume_examples():
    assert periodic_box_volume(PeriodicBox([0.2], [0.7])) == pytest.approx(0.5)
    assert periodic_box_volume(PeriodicBox([0.7], [0.2])) == pytest.approx(0.5)
    assert periodic_box_volume(PeriodicBox([0.7, 0.0], [0.2, 0.5])) == pytest.approx(0.25)
    assert periodic_box_volume(PeriodicBox([0.3], [0.3])) == 0.0


def test_membership_examples():
    assert point_in_periodic_box([0.0], PeriodicBox([0.7], [0.2]))
    assert not point_in_periodic_box([0.2], PeriodicBox([0.2], [0.2]))
    assert point_in_periodic_box([0.7], PeriodicBox([0.7], [0.2]))
    assert not point_in_periodic_box([0.2], PeriodicBox([0.7], [0.2]))
    assert [0.5, 0.1] in PeriodicBox([0.4, 0.9], [0.6, 0.2])


@given(st.lists(st.tuples(unit, unit, unit), min_size=1, max_size=4))
def test_membership_matches_set_decomposition(rows):
    x = [r[0] for r in rows]
    y = [r[1] for r in rows]
    t = [r[2] for r in rows]
    B = PeriodicBox(x, y)
    expect = all(
        (xi <= ti < yi) if xi <= yi else (0 <= ti < yi or xi <= ti < 1)
        for xi, yi, ti in zip(x, y, t)
    )
    assert point_in_periodic_box(t, B) == expect
    vol = periodic_box_volume(B)
    assert 0.0 <= vol <= 1.0
    if len(rows) == 1 and x[0] > y[0]:
        assert vol == pytest.approx(1.0 - (x[0] - y[0]))


def test_local_discrepancy_examples():
    E = build_point_set(1, 1, [])
    B = PeriodicBox([0.7], [0.2])
    assert local_discrepancy(E, [], B) == pytest.approx(-0.5)
    P0 = build_point_set(1, 1, [[0]])
    assert local_discrepancy(P0, [1.0], B) == pytest.approx(0.5)
    P4 = build_point_set(1, 4, [[0], [1], [2], [3]])
    assert local_discrepancy(P4, None, PeriodicBox([0.0], [0.5])) == 0.0


def test_local_discrepancy_exact_path():
    P4 = build_point_set(1, 4, [[0], [1], [2], [3]])
    B = PeriodicBox([Fraction(1, 4)], [Fraction(3, 4)])
    assert local_discrepancy(P4, None, B, exact=True) == 0
    B = PeriodicBox([Fraction(3, 4)], [Fraction(1, 4)])
    # {0, 3/4} inside, volume 1/2
    assert local_discrepancy(P4, None, B, exact=True) == 0
    B = PeriodicBox([Fraction(1, 3)], [Fraction(2, 3)])
    # only 1/2 lies in [1/3, 2/3)
    assert local_discrepancy(P4, [1, 1, 1, 1], B, exact=True) == Fraction(2, 3)


@given(st.lists(st.integers(0, 6), min_size=1, max_size=7), unit, unit)
def test_equal_weights_match_counting_definition(nums, x, y):
    P = build_point_set(1, 7, [[n] for n in nums])
    B = PeriodicBox([x], [y])
    inside = sum(point_in_periodic_box(pt, B) for pt in P.float_coords)
    expect = inside / len(nums) - periodic_box_volume(B)
    assert local_discrepancy(P, None, B) == pytest.approx(expect, abs=1e-15)


def test_local_discrepancy_length_mismatch():
    P = build_point_set(1, 4, [[0], [1]])
    with pytest.raises(ValueError, match="weights"):
        local_discrepancy(P, [1.0], PeriodicBox([0.0], [0.5]))


def test_equal_weights():
    assert equal_weights(3).tolist() == [1 / 3] * 3
    with pytest.raises(ValueError):
        equal_weights(0)


def test_negative_weights_allowed():
    P = build_point_set(1, 2, [[0], [1]])
    assert local_discrepancy(P, [-1.0, 2.0], PeriodicBox([0.4], [0.9])) == pytest.approx(1.5)


def test_text_round_trip_exact():
    P = build_point_set(2, 7, [[1, 2], [3, 4], [5, 6]])
    Q = read_point_set(io.StringIO(dump_point_set(P)))
    assert isinstance(Q, PointSet)
    assert Q.denom == 7 and np.array_equal(Q.numerators, P.numerators)


def test_text_round_trip_free():
    P = free_point_set([[0.1, 0.7], [1 / 3, 0.0]])
    text = dump_point_set(P)
    assert text.splitlines()[0] == "2 2 *"
    Q = read_point_set(io.StringIO(text))
    assert isinstance(Q, FreePointSet) and np.array_equal(Q.coords, P.coords)


def test_text_empty_set():
    E = read_point_set(io.StringIO("3 0 1\n"))
    assert (E.dim, E.n_points) == (3, 0)


@pytest.mark.parametrize(
    "text, field",
    [
        ("", "header"),
        ("2 1\n0 0\n", "header"),
        ("2 2 5\n0 0\n", "header"),
        ("2 1 5\n0\n", "point 0"),
        ("2 1 5\n0 x\n", "point 0"),
        ("1 1 5\n9\n", "point 0"),
        ("0 0 5\n", "header"),
    ],
)
def test_text_malformed(text, field):
    with pytest.raises(ValueError, match=field):
        read_point_set(io.StringIO(text))


def test_read_weights():
    assert read_weights(io.StringIO("# w\n0.5\n\n0.25\n")).tolist() == [0.5, 0.25]
    with pytest.raises(ValueError, match="weights"):
        read_weights(io.StringIO("abc\n"))
