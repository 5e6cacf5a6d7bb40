"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 precision failure, 3 acceptance failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import experiments
from .experiments import BudgetExceeded, ExperimentConfig
from .quadfield import PrecisionError

log = logging.getLogger("partlab")

EXIT_OK, EXIT_USAGE, EXIT_PRECISION, EXIT_ACCEPTANCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--digits", type=int, default=50, help="working precision in decimal digits")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="json")

    parser = _Parser(prog="partlab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("invariants", parents=[common], help="fundamental unit, class number, L(1,chi), Gauss sum")
    s.add_argument("--p", type=int, required=True)

    s = sub.add_parser("series", parents=[common], help="exact p^(k)(n) table")
    s.add_argument("--p", type=int)
    s.add_argument("--set", choices=experiments.SETS, default="plus")
    s.add_argument("--nmax", type=int, default=100)
    s.add_argument("--k", type=int, default=0)

    s = sub.add_parser("scan-conjecture", parents=[common], help="eventual decrease of rho^(k) over S_+- sets")
    s.add_argument("--pmax", type=int, default=97)
    s.add_argument("--kmin", type=int, default=-3)
    s.add_argument("--kmax", type=int, default=3)
    s.add_argument("--nmax", type=int, default=10_000)
    s.add_argument("--classical", action="store_true", help="also scan the classical p(n)")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--budget", type=float, default=experiments.DEFAULT_SCAN_BUDGET,
                   help="refuse scans needing more coefficient updates than this")
    s.add_argument("--checkpoint", help="directory for per-prime results; reruns resume from it")

    for name, helptext in (("petersson", "p_+(n)/p_-(n) against eps^h"),
                           ("cesaro", "partial-sum ratio against eps^h")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--p", type=int, required=True)
        s.add_argument("--nmax", type=int, default=10_000)

    s = sub.add_parser("schur", parents=[common], help="u_breve(it) and the Schur ratio as t -> 0")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--t", nargs="+", default=["0.2", "0.1", "0.05"])
    s.add_argument("--nmax", type=int, default=2000, help="order of the partition tables")

    s = sub.add_parser("meinardus", parents=[common], help="main-term predictions against exact counts")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--n", type=int, nargs="+", default=[1000, 5000, 10000])
    s.add_argument("--convention", choices=("corrected", "printed"), default="corrected")

    s = sub.add_parser("appendix-excl1", parents=[common], help="residue parts other than 1 against non-residue parts")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--nmax", type=int, default=10_000)

    s = sub.add_parser("acceptance", help="run every acceptance criterion; exit 3 on failure")
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv", "json"), default="json")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig(args.command)
    mapping = {"p": "p", "pmax": "pmax", "set": "set", "nmax": "N", "k": "k", "kmin": "kmin",
               "kmax": "kmax", "t": "t", "n": "n", "digits": "digits", "convention": "convention",
               "classical": "classical", "workers": "workers"}
    for arg, attr in mapping.items():
        if hasattr(args, arg) and getattr(args, arg) is not None:
            setattr(cfg, attr, getattr(args, arg))
    if hasattr(args, "budget"):
        cfg.budget = int(args.budget)
    return cfg


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    if args.command == "acceptance":
        from .acceptance import run_acceptance

        timings: dict = {}
        report, text = run_acceptance(args.format, timings)
        emit(text, args.out)
        for row in report.rows:
            t = timings.get(row["id"])
            took = f" ({t:.1f}s)" if t is not None else ""
            print(f"{'PASS' if row['passed'] else 'FAIL'} {row['id']:>2} {row['title']}{took}", file=sys.stderr)
        return EXIT_OK if all(r["passed"] for r in report.rows) else EXIT_ACCEPTANCE

    cfg = config_from_args(args)
    try:
        cfg.validate()
        if args.command == "scan-conjecture":
            report = experiments.run_scan(cfg, checkpoint_dir=args.checkpoint)
        else:
            report = experiments.RUNNERS[args.command](cfg)
    except PrecisionError as exc:
        print(f"precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (ValueError, BudgetExceeded) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    emit(report.render(args.format), args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
