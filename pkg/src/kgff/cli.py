"""Command-line front end.

Every subcommand writes its report into the ``--out`` directory and prints
only progress/log lines (to stderr). Exit status: 0 when every check holds,
1 when a check fails, 2 on usage or budget errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import _kernels
from .algebra import FieldSpec
from .approx import parse_psi
from .counting import EXACT, PAPER, counts_table, format_pow_k, phi, t_series
from .errors import KGFFError
from .experiment import RunConfig, run, runs_csv, summary
from .measure import expected_N, verify_prop1, verify_prop2

log = logging.getLogger("kgff")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _shared() -> argparse.ArgumentParser:
    sp = argparse.ArgumentParser(add_help=False)
    g = sp.add_argument_group("field and problem")
    g.add_argument("--p", type=int, default=2, help="field characteristic (prime)")
    g.add_argument("--l", type=int, default=1, help="extension degree, k = p**l")
    g.add_argument("--modulus", default=None,
                   help="irreducible modulus for l > 1, residues low to high, e.g. 1,1,1")
    g.add_argument("--m", type=int, default=2)
    g.add_argument("--n", type=int, default=1)
    g.add_argument("--psi", default="linear:1,1", help="linear:a,b or table:s0,s1,...")
    g.add_argument("--allow-zero-psi", action="store_true", help="admit s(r) = 0, i.e. psi = 1")
    g.add_argument("--Q", type=int, default=2)
    g = sp.add_argument_group("run control")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--samples", type=int, default=100)
    g.add_argument("--epsilon", type=float, default=0.1)
    g.add_argument("--budget", type=int, default=1 << 28, help="max enumeration cells")
    g.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: available CPUs); output does not depend on it")
    g.add_argument("--backend", choices=["numba", "numpy"], default=None,
                   help="enumeration kernels (default: $KGFF_BACKEND or numba)")
    g.add_argument("--orbits", action="store_true",
                   help="count one q per scalar orbit and multiply by k-1")
    g.add_argument("--out", default=".", help="directory for report files")
    g.add_argument("--format", choices=["csv", "json"], default=None)
    g.add_argument("-v", "--verbose", action="store_true")
    return sp


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgff",
        description="Counting and exact-measure checks for Diophantine approximation "
                    "over F_k((1/X)).")
    sub = parser.add_subparsers(dest="command", required=True)
    shared = _shared()
    sub.add_parser("verify-prop1", parents=[shared],
                   help="mu(B_q) == psi(|q|)^n for all q up to height k^Q")
    sub.add_parser("verify-prop2", parents=[shared],
                   help="mu(B_q & B_q') == mu(B_q) mu(B_q') for independent pairs")
    sub.add_parser("counts", parents=[shared], help="exact vs formula count of q by height")
    sub.add_parser("phi", parents=[shared], help="Phi(Q) exact and formula variants")
    sub.add_parser("expected-n", parents=[shared],
                   help="average N(Q, A) over all cylinders vs Phi_exact(Q)")
    p = sub.add_parser("t-ratio", parents=[shared], help="T(Q) / Phi_exact(Q) for Q = 0..Q")
    p.add_argument("--bound", type=float, default=4.0)
    sub.add_parser("run", parents=[shared], help="Monte Carlo runs over sampled A")
    return parser


def _field(args) -> FieldSpec:
    modulus = None
    if args.modulus:
        modulus = tuple(int(x) for x in args.modulus.split(","))
    return FieldSpec(args.p, args.l, modulus)


def _config(args, F: FieldSpec) -> dict:
    return {"command": args.command, "p": F.p, "l": F.l,
            "modulus": list(F.modulus) if F.modulus else None, "k": F.k,
            "m": args.m, "n": args.n, "psi": args.psi, "Q": args.Q,
            "allow_zero_psi": args.allow_zero_psi, "budget": args.budget}


def _frac(x: Fraction) -> str:
    return str(x)


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_frac) + "\n")


def _write_csv(path: Path, config: dict, columns: list[str], rows: list[dict]) -> None:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    w.writerows(rows)
    path.write_text(buf.getvalue())


def _emit(args, name: str, config: dict, columns: list[str], rows: list[dict],
          default: str, extra: dict | None = None) -> Path:
    fmt = args.format or default
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        path = out / f"{name}.csv"
        _write_csv(path, config, columns, rows)
    else:
        path = out / f"{name}.json"
        _write_json(path, {"config": config, "rows": rows, **(extra or {})})
    log.info("wrote %s", path)
    return path


def cmd_verify_prop1(args, F, psi) -> int:
    report = verify_prop1(F, args.m, args.n, args.Q, psi, budget=args.budget)
    report["config"].update(_config(args, F))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if (args.format or "json") == "csv":
        _write_csv(out / "prop1.csv", report["config"],
                   ["q", "r", "s", "measure", "expected", "pass"], report["cases"])
    else:
        _write_json(out / "prop1.json", report)
    log.info("prop1: %d passed, %d failed", report["passed"], report["failed"])
    return EXIT_OK if report["failed"] == 0 else EXIT_FAIL


def cmd_verify_prop2(args, F, psi) -> int:
    report = verify_prop2(F, args.m, args.n, args.Q, psi, budget=args.budget)
    report["config"].update(_config(args, F))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if (args.format or "json") == "csv":
        _write_csv(out / "prop2.csv", report["config"],
                   ["q", "q2", "joint", "product", "product_rule_holds", "pass", "note"],
                   report["cases"] + report["dependent"])
    else:
        _write_json(out / "prop2.json", report)
    log.info("prop2: %d passed, %d failed, %d dependent pairs skipped (%d violate the rule)",
             report["passed"], report["failed"], report["dependent_count"],
             report["dependent_violating"])
    return EXIT_OK if report["failed"] == 0 else EXIT_FAIL


def cmd_counts(args, F, psi) -> int:
    rows = counts_table(args.Q, args.m, F, budget=args.budget)
    _emit(args, "counts", _config(args, F),
          ["r", "exact_count", "paper_count", "ratio_num", "ratio_den"], rows, "csv")
    return EXIT_OK


def cmd_phi(args, F, psi) -> int:
    rows = []
    for Q in range(args.Q + 1):
        e = phi(Q, psi, args.m, args.n, F, EXACT)
        p = phi(Q, psi, args.m, args.n, F, PAPER)
        rows.append({"Q": Q, "phi_exact_num": e.numerator, "phi_exact_den": e.denominator,
                     "phi_paper_num": p.numerator, "phi_paper_den": p.denominator,
                     "phi_exact": format_pow_k(e, F.k), "phi_paper": format_pow_k(p, F.k)})
    _emit(args, "phi", _config(args, F),
          ["Q", "phi_exact_num", "phi_exact_den", "phi_paper_num", "phi_paper_den"], rows, "csv")
    return EXIT_OK


def cmd_expected_n(args, F, psi) -> int:
    e = expected_N(args.Q, psi, args.m, args.n, F, budget=args.budget)
    pe = phi(args.Q, psi, args.m, args.n, F, EXACT)
    pp = phi(args.Q, psi, args.m, args.n, F, PAPER)
    row = {"Q": args.Q, "expected_N": format_pow_k(e, F.k), "phi_exact": format_pow_k(pe, F.k),
           "phi_paper": format_pow_k(pp, F.k), "equals_phi_exact": e == pe,
           "equals_phi_paper": e == pp}
    _emit(args, "expected_n", _config(args, F), list(row), [row], "json")
    log.info("E[N] = %s, Phi_exact = %s, Phi_formula = %s", e, pe, pp)
    return EXIT_OK if e == pe else EXIT_FAIL


def cmd_t_ratio(args, F, psi) -> int:
    Ts = t_series(args.Q, psi, args.m, args.n, F, args.budget)
    rows, ok = [], True
    for Q, T in enumerate(Ts):
        pe = phi(Q, psi, args.m, args.n, F, EXACT)
        ratio = T / pe
        ok &= ratio <= Fraction(args.bound)
        rows.append({"Q": Q, "T_num": T.numerator, "T_den": T.denominator,
                     "phi_exact_num": pe.numerator, "phi_exact_den": pe.denominator,
                     "ratio": repr(round(float(ratio), 12))})
    config = {**_config(args, F), "bound": args.bound}
    _emit(args, "t_ratio", config,
          ["Q", "T_num", "T_den", "phi_exact_num", "phi_exact_den", "ratio"], rows, "csv")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_run(args, F, psi) -> int:
    config = RunConfig(F, args.m, args.n, psi, args.Q, args.samples, args.seed,
                       args.epsilon, args.orbits)
    threads = args.threads or _kernels.default_threads()
    records = run(config, threads=threads, budget=args.budget)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = {**_config(args, F), **config.as_dict()}
    (out / "runs.csv").write_text(runs_csv(records, cfg))
    summ = summary(config, records)
    summ["config"] = cfg
    _write_json(out / "summary.json", summ)
    log.info("wrote %s and %s", out / "runs.csv", out / "summary.json")
    return EXIT_OK


COMMANDS = {
    "verify-prop1": cmd_verify_prop1,
    "verify-prop2": cmd_verify_prop2,
    "counts": cmd_counts,
    "phi": cmd_phi,
    "expected-n": cmd_expected_n,
    "t-ratio": cmd_t_ratio,
    "run": cmd_run,
}


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(message)s")
    if args.backend:
        _kernels.set_backend(args.backend)
    try:
        if args.m < 1 or args.n < 1 or args.Q < 0:
            raise UsageError("need --m >= 1, --n >= 1, --Q >= 0")
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be >= 1")
        F = _field(args)
        psi = parse_psi(args.psi, allow_zero=args.allow_zero_psi)
        return COMMANDS[args.command](args, F, psi)
    except (UsageError, KGFFError, ValueError) as e:
        print(f"kgff {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
