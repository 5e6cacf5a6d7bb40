#!/usr/bin/env python3
"""Desk-scale conjecture scan: every admissible p up to --pmax, k in [kmin, kmax].

Results for each prime are checkpointed, so an interrupted run resumes where it
stopped. Prints one line per (p, set, k) with the observed threshold.
"""
import argparse
import sys
from pathlib import Path

from partlab.experiments import ExperimentConfig, run_scan


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pmax", type=int, default=97)
    ap.add_argument("--kmin", type=int, default=-3)
    ap.add_argument("--kmax", type=int, default=3)
    ap.add_argument("--nmax", type=int, default=10_000)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--checkpoint", default="results/scan_checkpoints")
    ap.add_argument("--out", default="results/scan.json")
    args = ap.parse_args(argv)

    cfg = ExperimentConfig("scan-conjecture", pmax=args.pmax, kmin=args.kmin, kmax=args.kmax,
                           N=args.nmax, classical=True, workers=args.workers)
    cfg.validate()
    report = run_scan(cfg, checkpoint_dir=args.checkpoint)
    for r in report.rows:
        mark = "ok " if r["supports"] else "BAD"
        print(f"{mark} p={r['p'] or '-':>3} {r['set']:<9} k={r['k']:>2} threshold={r['threshold']}")
    s = report.summary
    print(f"{s['jobs']} jobs, max threshold {s['max_threshold']}, all support: {s['all_support']}")
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(report.to_json())
    return 0 if s["all_support"] else 1


if __name__ == "__main__":
    sys.exit(main())
