"""Command-line interface: ``perdisc <subcommand> ...`` (or ``python -m perdisc``).

Subcommands: ``gen``, ``disc``, ``weil``, ``bounds``, ``verify``, ``sweep``.

Exit status is 0 on success, 1 on invalid input, and 2 when a checked
inequality fails (a failed check points at a bug, not at bad input).
``QMC_THREADS`` caps the worker threads used by the pair sums.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict, dataclass
from typing import Iterable, Optional, Union

import numpy as np

from . import bounds as bd
from . import discrepancy as dc
from . import expsums as es
from .korobov import PSetFamily, generate, is_prime
from .pointset import load_point_set, read_weights, write_point_set

DEFAULT_SEED = 20240607
EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    subcommand: str
    input: Optional[str] = None
    output: Optional[str] = None
    family: Optional[str] = None
    p: Optional[Union[int, str]] = None      # grids are kept as given
    d: Optional[Union[int, str]] = None
    method: Optional[str] = None
    K: Optional[int] = None
    samples: Optional[int] = None
    seed: int = DEFAULT_SEED
    exact: bool = False
    deterministic: bool = False
    format: str = "json"


def _int_list(text: str) -> list[int]:
    """Parse ``"1..5"``, ``"2,3,5"`` or mixtures such as ``"1..3,7"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return "" if v is None else str(v)


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def _write_table(rows: Iterable[dict], columns: list[str], fmt: str, out, cfg=None) -> None:
    if fmt == "json":
        extra = {"config": asdict(cfg)} if cfg is not None else {}
        for r in rows:
            out.write(json.dumps({**{c: r.get(c) for c in columns}, **extra}) + "\n")
        return
    w = csv.writer(out, delimiter="\t" if fmt == "tsv" else ",", lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])


def _echo_config(cfg: RunConfig) -> None:
    sys.stderr.write("# config " + json.dumps(asdict(cfg), sort_keys=True) + "\n")


def _family(text: str) -> PSetFamily:
    return PSetFamily.parse(text)


def _prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"p: {p} is not prime")
    return p


# -- subcommands -------------------------------------------------------------


def cmd_gen(a) -> int:
    P = generate(_family(a.family), _prime(a.p), a.d)
    out = _open_out(a.out)
    try:
        write_point_set(P, out)
    finally:
        if a.out:
            out.close()
    return EXIT_OK


def cmd_disc(a) -> int:
    cfg = RunConfig(
        "disc", input=a.input, method=a.method, K=a.K, samples=a.samples,
        seed=a.seed, exact=a.exact, deterministic=a.deterministic,
    )
    P = load_point_set(a.input)
    w = None
    if a.weights:
        with open(a.weights) as fh:
            w = read_weights(fh)
        if len(w) != P.n_points:
            raise ValueError(f"weights: {len(w)} values for {P.n_points} points")
    m = a.method
    if m == "b2":
        if w is None and P.n_points > 0:
            res = dc.periodic_l2(P, exact=a.exact, deterministic=a.deterministic)
        else:
            res = dc.periodic_l2_weighted(P, w, exact=a.exact, deterministic=a.deterministic)
    elif m == "warnock":
        res = dc.plain_l2_weighted(P, w, deterministic=a.deterministic)
    elif m == "fourier":
        res = dc.periodic_l2_fourier(P, w, K=a.K)
    elif m == "mc":
        res = dc.periodic_l2_mc(P, w, n_samples=a.samples or 10**5, seed=a.seed)
    else:
        res = dc.rms_shifted_l2_mc(P, w, n_shifts=a.samples or 10**4, seed=a.seed)
    rec = res.as_record()
    rec["config"] = asdict(cfg)
    sys.stdout.write(json.dumps(rec) + "\n")
    return EXIT_OK


def cmd_weil(a) -> int:
    fam = _family(a.family)
    p = _prime(a.p)
    reports = es.check_weil_bounds(fam, p, a.d, hmax=a.hmax)
    cfg = RunConfig("weil", family=fam.value, p=p, d=a.d, format=a.format)
    _echo_config(cfg)
    rows = (
        {
            "family": r.family.value, "p": r.p, "d": r.d,
            "h": ";".join(str(v) for v in r.h),
            "modulus": None if r.status is es.WeilStatus.SKIPPED else r.modulus_of_sum,
            "bound": r.bound, "status": r.status.value,
        }
        for r in reports
    )
    out = _open_out(a.out)
    try:
        _write_table(rows, ["family", "p", "d", "h", "modulus", "bound", "status"], a.format, out, cfg)
    finally:
        if a.out:
            out.close()
    bad = sum(r.status is es.WeilStatus.VIOLATED for r in reports)
    if bad:
        sys.stderr.write(f"weil: {bad} frequency vectors exceed the bound\n")
        return EXIT_CHECK
    return EXIT_OK


def cmd_bounds(a) -> int:
    out = _open_out(a.out)
    status = EXIT_OK
    try:
        if a.check_thm1:
            fam = _family(a.family)
            primes = [q for q in range(2, a.pmax + 1) if is_prime(q)]
            rows = []
            for p in primes:
                for d in range(1, a.dmax + 1):
                    r = bd.check_theorem1(fam, p, d)
                    rows.append(r.as_record())
                    if not r.passed:
                        status = EXIT_CHECK
            cfg = RunConfig("bounds", family=fam.value, format=a.format)
            _echo_config(cfg)
            _write_table(rows, ["name", "family", "p", "d", "N", "lhs", "rhs", "pass"], a.format, out, cfg)
        else:
            if a.table != "inverse":
                raise ValueError(f"table: unknown table {a.table!r}")
            rows = [asdict(r) for r in bd.inverse_bound_table(_int_list(a.d), _float_list(a.eps))]
            cfg = RunConfig("bounds", format=a.format)
            _echo_config(cfg)
            cols = [
                "d", "eps", "lower_equal", "lower_posweights", "lower_weighted_base",
                "lower_weighted_intermediate", "M", "N_prime", "upper_from_psets",
            ]
            _write_table(rows, cols, a.format, out, cfg)
    finally:
        if a.out:
            out.close()
    return status


def cmd_verify(a) -> int:
    cfg = RunConfig("verify", family=a.family, p=a.p, d=a.d, samples=a.samples, seed=a.seed)
    if a.thm1:
        r = bd.check_theorem1(_family(a.family), _prime(a.p), a.d)
        rec = {"check": "theorem1", "family": r.params["family"], "p": a.p, "d": a.d,
               "N": r.params["N"], "value": r.lhs, "bound": r.rhs, "pass": r.passed}
    elif a.prop1:
        P = generate(_family(a.family), _prime(a.p), a.d)
        exact = dc.periodic_l2(P).value_squared
        est = dc.rms_shifted_l2_mc(P, n_shifts=a.samples or 10**4, seed=a.seed)
        z = abs(est.value_squared - exact) / est.std_error
        rec = {"check": "shift_rms", "family": _family(a.family).value, "p": a.p, "d": a.d,
               "periodic_value_squared": exact, "rms_value_squared": est.value_squared,
               "std_error": est.std_error, "z": z, "pass": z <= 4.0}
    elif a.inverse:
        up = bd.inverse_upper_from_psets(a.eps, a.d)
        P = generate(PSetFamily.KOROBOV_P, up.N_prime, a.d)
        value = dc.periodic_l2(P).value
        target = a.eps * bd.initial_periodic_l2(a.d)
        rec = {"check": "inverse_upper", "d": a.d, "eps": a.eps, "M": up.M, "N_prime": up.N_prime,
               "upper": up.upper, "value": value, "target": target, "pass": value <= target}
    else:
        raise ValueError("verify: choose one of --thm1, --prop1, --inverse")
    rec["config"] = asdict(cfg)
    sys.stdout.write(json.dumps(rec) + "\n")
    return EXIT_OK if rec["pass"] else EXIT_CHECK


SWEEP_COLUMNS = ["family", "p", "d", "N", "value", "bound", "ratio", "pass"]


def sweep(families, ps, ds, budget: float = 5e9) -> Iterable[dict]:
    """Yield one Theorem-1 row per (family, p, d) cell, in grid order.

    Cells whose pair-sum work ``N^2 d`` exceeds ``budget`` are reported with
    ``pass = "BUDGET"`` and no value.
    """
    for f in families:
        fam = _family(f)
        for p in ps:
            _prime(p)
            for d in ds:
                N = fam.n_points(p)
                row = {"family": fam.value, "p": p, "d": d, "N": N}
                if N * N * d > budget:
                    row.update(value=None, bound=None, ratio=None)
                    row["pass"] = "BUDGET"
                else:
                    r = bd.check_theorem1(fam, p, d)
                    row.update(value=r.lhs, bound=r.rhs, ratio=r.lhs / r.rhs)
                    row["pass"] = r.passed
                yield row


def cmd_sweep(a) -> int:
    fams = [f for f in a.families.split(",") if f.strip()]
    rows = list(sweep(fams, _int_list(a.p), _int_list(a.d), budget=a.budget))
    cfg = RunConfig("sweep", family=",".join(fams), p=a.p, d=a.d, format=a.format)
    _echo_config(cfg)
    out = _open_out(a.out)
    try:
        _write_table(rows, SWEEP_COLUMNS, a.format, out, cfg)
    finally:
        if a.out:
            out.close()
    return EXIT_CHECK if any(r["pass"] is False for r in rows) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="perdisc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a Korobov p-set")
    g.add_argument("--family", required=True)
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("disc", help="discrepancy of a point-set file")
    s.add_argument("--method", required=True, choices=["b2", "warnock", "fourier", "mc", "rms-shift"])
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--weights")
    s.add_argument("--K", type=int, default=16)
    s.add_argument("--samples", type=int)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--exact", action="store_true")
    s.add_argument("--deterministic", action="store_true")
    s.set_defaults(func=cmd_disc)

    w = sub.add_parser("weil", help="check exponential-sum bounds over a box of frequencies")
    w.add_argument("--family", required=True)
    w.add_argument("--p", type=int, required=True)
    w.add_argument("--d", type=int, required=True)
    w.add_argument("--hmax", type=int)
    w.add_argument("--format", choices=["csv", "tsv", "json"], default="csv")
    w.add_argument("--out")
    w.set_defaults(func=cmd_weil)

    b = sub.add_parser("bounds", help="inverse-discrepancy table or Theorem-1 checks")
    b.add_argument("--table", default="inverse")
    b.add_argument("--d", default="1..12")
    b.add_argument("--eps", default="0.5,0.25,0.1")
    b.add_argument("--check-thm1", action="store_true")
    b.add_argument("--family", default="P")
    b.add_argument("--pmax", type=int, default=23)
    b.add_argument("--dmax", type=int, default=5)
    b.add_argument("--format", choices=["csv", "tsv", "json"], default="csv")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("verify", help="check one statement on one instance")
    mode = v.add_mutually_exclusive_group(required=True)
    mode.add_argument("--thm1", action="store_true")
    mode.add_argument("--prop1", action="store_true")
    mode.add_argument("--inverse", action="store_true")
    v.add_argument("--family", default="P")
    v.add_argument("--p", type=int)
    v.add_argument("--d", type=int, required=True)
    v.add_argument("--eps", type=float, default=0.5)
    v.add_argument("--samples", type=int)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("sweep", help="Theorem-1 sweep over a (family, p, d) grid")
    w.add_argument("--families", default="P,Q,R")
    w.add_argument("--p", default="2,3,5,7,11,13")
    w.add_argument("--d", default="1..5")
    w.add_argument("--budget", type=float, default=5e9)
    w.add_argument("--format", choices=["csv", "tsv", "json"], default="csv")
    w.add_argument("--out")
    w.set_defaults(func=cmd_sweep)
    return ap


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "thm1", False) or getattr(args, "prop1", False):
            if args.p is None:
                raise ValueError("p: required for this check")
        return args.func(args)
    except UsageError as e:
        sys.stderr.write(f"perdisc: {e}\n")
        return EXIT_INPUT
    except (ValueError, OverflowError, OSError, dc.ResourceError) as e:
        sys.stderr.write(f"perdisc: {e}\n")
        return EXIT_INPUT
    except AssertionError as e:
        sys.stderr.write(f"perdisc: internal check failed: {e}\n")
        return EXIT_CHECK


def main() -> None:
    sys.exit(run())
