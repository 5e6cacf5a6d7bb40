#!/usr/bin/env python3
"""Run every experiment for a few primes and write JSON reports under results/.

    python3 scripts/run_experiments.py --primes 5 13 --nmax 10000 --outdir results
"""
import argparse
import logging
import sys
from pathlib import Path

from partlab.lab import main as lab

log = logging.getLogger("run_experiments")


def jobs(p: int, nmax: int):
    yield f"invariants_p{p}", ["invariants", "--p", str(p)]
    for k, name in ((0, "series"), (-1, "series_prefix")):
        yield f"{name}_p{p}", ["series", "--p", str(p), "--nmax", "200", "--k", str(k)]
    yield f"petersson_p{p}", ["petersson", "--p", str(p), "--nmax", str(nmax)]
    yield f"cesaro_p{p}", ["cesaro", "--p", str(p), "--nmax", str(nmax)]
    # the limit is approached like exp(-2 pi/(p t)), so scale the grid with p
    ts = [str(round(x * 5 / p, 4)) for x in (0.2, 0.1, 0.05)]
    yield f"schur_p{p}", ["schur", "--p", str(p), "--t", *ts]
    ns = [str(n) for n in (nmax // 10, nmax // 2, nmax)]
    yield f"meinardus_p{p}", ["meinardus", "--p", str(p), "--n", *ns]
    yield f"appendix_excl1_p{p}", ["appendix-excl1", "--p", str(p), "--nmax", str(nmax)]


def parse_args(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", type=int, nargs="+", default=[5, 13])
    ap.add_argument("--nmax", type=int, default=10_000)
    ap.add_argument("--outdir", default="results")
    return ap.parse_args(argv)


def run(argv=None) -> int:
    args = parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    outdir = Path(args.outdir)
    failures = 0
    for p in args.primes:
        for stem, cmd in jobs(p, args.nmax):
            code = lab([*cmd, "--out", str(outdir / f"{stem}.json")])
            log.info("%-28s exit %d", stem, code)
            failures += code != 0
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(run())
