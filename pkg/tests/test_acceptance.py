"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest -v tests/test_acceptance.py`` or directly as a script,
``python3 tests/test_acceptance.py``.  Tolerances are fixed; nothing here is
tuned to make a criterion pass.
"""

import math
import sys
from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np
import pytest

from perdisc.bounds import (
    average_periodic_l2,
    initial_periodic_l2,
    inverse_bound_table,
    theorem1_bound,
)
from perdisc.discrepancy import (
    periodic_l2,
    periodic_l2_fourier,
    periodic_l2_mc,
    periodic_l2_weighted,
    rms_shifted_l2_mc,
)
from perdisc.expsums import (
    exp_sum_P,
    r_root_counts,
    r_sums_all_residues,
    weil_sweep,
    _residue_grid,
)
from perdisc.korobov import generate, is_prime
from perdisc.pointset import build_point_set, equal_weights, free_point_set, shift_point_set

SEED = 20240607
FAMILIES = ("P", "Q", "R")
C1_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23)


def _sets_for_cross_checks():
    """The 50 seeded random sets plus every p-set with p <= 7, d <= 3."""
    rng = np.random.default_rng(SEED)
    out = []
    for i in range(50):
        N = int(rng.integers(1, 31))
        d = int(rng.integers(1, 4))
        out.append((f"random#{i}(N={N},d={d})", free_point_set(rng.random((N, d)))))
    for fam in FAMILIES:
        for p in (2, 3, 5, 7):
            for d in (1, 2, 3):
                out.append((f"{fam}(p={p},d={d})", generate(fam, p, d)))
    return out


# -- criteria ----------------------------------------------------------------


def criterion_1():
    worst, bad = 0.0, []
    for fam in FAMILIES:
        for p in C1_PRIMES:
            for d in range(1, 6):
                S = generate(fam, p, d)
                v = periodic_l2(S).value
                b = theorem1_bound(d, S.n_points)
                worst = max(worst, v / b)
                if not v <= b + 1e-12:
                    bad.append((fam, p, d, v, b))
    return not bad, f"135 cells, max value/bound = {worst:.4f}, failures = {bad}"


def criterion_2():
    getcontext().prec = 60
    errs = []
    worst = 0.0
    for N in range(1, 65):
        P = build_point_set(1, N, [[i] for i in range(N)])
        e = abs(periodic_l2(P).value - 1 / (math.sqrt(6) * N))
        worst = max(worst, e)
        if e > 1e-12:
            errs.append(("equispaced", N, e))
    for d in range(1, 11):
        r = periodic_l2_weighted(build_point_set(d, 1, []))
        true = float(Decimal(3) ** (Decimal(-d) / 2))
        if r.value != true or r.exact_value_squared != Fraction(1, 3**d) or initial_periodic_l2(d) != true:
            errs.append(("empty", d, r.value, true))
    rng = np.random.default_rng(SEED + 2)
    for t in [0.0, 0.5, 1 - 2**-53] + rng.random(20).tolist():
        e = abs(periodic_l2(free_point_set([[t]])).value - 1 / math.sqrt(6))
        worst = max(worst, e)
        if e > 1e-12:
            errs.append(("single", t, e))
    return not errs, f"max abs error {worst:.2e}; empty set equals correctly rounded 3^(-d/2) for d=1..10; failures = {errs}"


def criterion_3():
    fails, worst_f, worst_z = [], 0.0, 0.0
    for i, (name, S) in enumerate(_sets_for_cross_checks()):
        b2 = periodic_l2(S).value_squared
        f = periodic_l2_fourier(S, K=64)
        gap = abs(b2 - f.value_squared)
        worst_f = max(worst_f, gap / f.tail_bound)
        if not gap <= f.tail_bound:
            fails.append((name, "fourier", gap, f.tail_bound))
        mc = periodic_l2_mc(S, n_samples=10**5, seed=SEED + 1000 + i)
        z = abs(b2 - mc.value_squared) / mc.std_error
        worst_z = max(worst_z, z)
        if not z <= 4.0:
            fails.append((name, "mc", z))
    return not fails, (
        f"86 sets; max |B2-Fourier|/tail = {worst_f:.3f}, max MC z = {worst_z:.2f}; failures = {fails}"
    )


def criterion_4():
    rng = np.random.default_rng(SEED + 4)
    sets = [
        ("P(5,2)", generate("P", 5, 2)),
        ("P(7,3)", generate("P", 7, 3)),
        ("Q(3,2)", generate("Q", 3, 2)),
        ("Q(5,1)", generate("Q", 5, 1)),
        ("R(3,3)", generate("R", 3, 3)),
        ("R(5,2)", generate("R", 5, 2)),
        ("R(7,2)", generate("R", 7, 2)),
    ]
    for N, d in [(10, 1), (20, 2), (30, 3)]:
        sets.append((f"random(N={N},d={d})", free_point_set(rng.random((N, d)))))
    zs, fails = [], []
    for i, (name, S) in enumerate(sets):
        exact = periodic_l2(S).value_squared
        est = rms_shifted_l2_mc(S, n_shifts=10**4, seed=SEED + 400 + i)
        z = abs(est.value_squared - exact) / est.std_error
        zs.append(z)
        if not z <= 4.0:
            fails.append((name, z))
    return not fails, f"10 instances, z-scores {[round(z, 2) for z in zs]}; failures = {fails}"


def criterion_5():
    worst, fails = 0.0, []
    for i, (name, S) in enumerate(_sets_for_cross_checks()):
        base = periodic_l2(S).value
        rng = np.random.default_rng(SEED + 5000 + i)
        for _ in range(10):
            e = abs(periodic_l2(shift_point_set(S, rng.random(S.dim))).value - base)
            worst = max(worst, e)
            if e > 1e-12:
                fails.append((name, e))
    return not fails, f"86 sets x 10 shifts, max change {worst:.2e}; failures = {fails}"


def criterion_6():
    """Exhaustive complete-sum check, exactly as stated: every eligible h."""
    grid = {"P": [q for q in range(2, 32) if is_prime(q)],
            "Q": [q for q in range(2, 14) if is_prime(q)],
            "R": [q for q in range(2, 32) if is_prime(q)]}
    violations, below_prime, cells = [], 0, 0
    for fam, ps in grid.items():
        for p in ps:
            for d in range(1, 5):
                s = weil_sweep(fam, p, d)
                cells += 1
                if s.n_violations:
                    violations.append((fam, p, d, s.n_violations, round(s.max_modulus, 4), s.bound))
                    if d < p:
                        below_prime += s.n_violations
    # R: complex sum against p * (number of roots), on every residue class
    r_err = 0.0
    for p in grid["R"]:
        for d in range(1, 5):
            table = r_sums_all_residues(p, d)
            H = _residue_grid(p, d)
            roots = r_root_counts(p, H)
            diff = np.abs(table[tuple(H.T)] - p * roots).max() / p**2
            r_err = max(r_err, float(diff))
    witness = exp_sum_P(7, (1, 1))
    ok_r = r_err <= 1e-9
    ok_w = abs(witness - math.sqrt(7)) <= 1e-9
    ok = not violations and ok_r and ok_w
    return ok, (
        f"{cells} cells; violating cells (family, p, d, count, max |S|, bound) = {violations}; "
        f"violations with d < p: {below_prime}; R sum vs p*roots max err/p^2 = {r_err:.1e}; "
        f"witness |S_P(7,(1,1))| = {witness:.12f}"
    )


def criterion_7():
    rng = np.random.default_rng(SEED + 7)
    fails, zs = [], []
    for N, d in [(8, 1), (8, 2), (16, 3)]:
        sq = np.array([periodic_l2(free_point_set(rng.random((N, d)))).value_squared for _ in range(400)])
        target = average_periodic_l2(N, d) ** 2
        assert target == pytest.approx((2.0**-d - 3.0**-d) / N, rel=1e-14)
        z = abs(sq.mean() - target) / (sq.std(ddof=1) / math.sqrt(len(sq)))
        zs.append(round(float(z), 2))
        if not z <= 4.0:
            fails.append((N, d, z))
    return not fails, f"z-scores {zs}; failures = {fails}"


def criterion_8():
    epss = (0.5, 0.25, 0.1)
    rows = inverse_bound_table(range(1, 13), epss)
    fails, direct = [], 0
    for r in rows:
        M = math.ceil(Fraction(3**r.d * r.d * r.d, 2**r.d) / Fraction(repr(r.eps)) ** 2)
        if r.lower_equal != pytest.approx(1.5**r.d / (1 + r.eps**2), rel=1e-14):
            fails.append(("lower_equal", r.d, r.eps))
        if r.M != M or r.upper_from_psets != 2 * M:
            fails.append(("upper", r.d, r.eps, r.M, M))
        if not (r.M <= r.N_prime < 2 * r.M and is_prime(r.N_prime)):
            fails.append(("bertrand", r.d, r.eps))
        if r.N_prime <= 200:
            direct += 1
            v = periodic_l2(generate("P", r.N_prime, r.d)).value
            if not v <= r.eps * 3.0 ** (-r.d / 2):
                fails.append(("direct", r.d, r.eps, v))
    hand = next(r for r in rows if r.d == 2 and r.eps == 0.5)
    if hand.lower_equal != pytest.approx(1.8) or hand.upper_from_psets != 72:
        fails.append(("hand row", hand))
    return not fails, f"{len(rows)} rows, {direct} checked directly; failures = {fails}"


def criterion_9():
    worst, fails = 0.0, []
    for fam in FAMILIES:
        for p in C1_PRIMES:
            for d in range(1, 6):
                S = generate(fam, p, d)
                if S.n_points > 169:
                    continue
                a = periodic_l2(S).value
                b = periodic_l2_weighted(S, equal_weights(S.n_points)).value
                rel = abs(a - b) / a
                worst = max(worst, rel)
                if rel > 1e-13:
                    fails.append((fam, p, d, rel))
    return not fails, f"max relative difference {worst:.2e}; failures = {fails}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def _line(n, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"


@pytest.mark.parametrize("n", range(1, len(CRITERIA) + 1))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    with capsys.disabled():
        print("\n" + _line(n, ok, detail), flush=True)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n, crit in enumerate(CRITERIA, 1):
        ok, detail = crit()
        failed += not ok
        print(_line(n, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
