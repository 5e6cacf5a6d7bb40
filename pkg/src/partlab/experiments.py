"""Experiment runners behind the CLI; each returns a :class:`Report`."""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import mpmath

from . import arith, asymptotics, partitions, qseries, quadfield
from .partitions import PartSet, diff_table, generate_table
from .reports import Report

COMMANDS = ("invariants", "series", "scan-conjecture", "petersson", "cesaro", "schur",
            "meinardus", "appendix-excl1", "acceptance")
SETS = ("plus", "minus", "plus-excl1", "classical")
DEFAULT_SCAN_BUDGET = 2 * 10 ** 10  # coefficient updates


class BudgetExceeded(ValueError):
    pass


@dataclass
class ExperimentConfig:
    command: str
    p: int | None = None
    pmax: int | None = None
    set: str = "plus"
    N: int = 10_000
    k: int = 0
    kmin: int = -3
    kmax: int = 3
    t: list[str] = field(default_factory=lambda: ["0.2", "0.1", "0.05"])
    n: list[int] = field(default_factory=lambda: [1000, 5000, 10000])
    digits: int = 50
    convention: str = "corrected"
    classical: bool = False
    workers: int = 1
    budget: int = DEFAULT_SCAN_BUDGET

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.command in ("invariants", "petersson", "cesaro", "schur", "meinardus",
                            "appendix-excl1") or (self.command == "series" and self.set != "classical"):
            if self.p is None:
                raise ValueError(f"{self.command} needs --p")
            arith.require_admissible(self.p)
        if self.set not in SETS:
            raise ValueError(f"--set must be one of {SETS}")
        if self.N < 0:
            raise ValueError("--nmax must be non-negative")
        if self.command in ("petersson", "cesaro", "appendix-excl1") and self.N < 10:
            raise ValueError("--nmax must be at least 10")
        if self.command == "scan-conjecture":
            if self.pmax is None or self.pmax < 5:
                raise ValueError("scan-conjecture needs --pmax >= 5")
            if self.kmin > self.kmax:
                raise ValueError("--kmin exceeds --kmax")
            if self.N < 2:
                raise ValueError("--nmax must be at least 2")
        for k in (self.k, self.kmin, self.kmax):
            if abs(k) > partitions.MAX_ABS_K:
                raise ValueError(f"|k| must be at most {partitions.MAX_ABS_K}")
        if any(float(t) <= 0 for t in self.t):
            raise ValueError("--t values must be positive")
        if any(n < 1 for n in self.n):
            raise ValueError("--n values must be positive")
        if self.digits < 20:
            raise ValueError("--digits must be at least 20")
        if self.workers < 1:
            raise ValueError("--workers must be at least 1")

    def header(self) -> dict:
        return asdict(self)


def _checkpoints(N: int) -> list[int]:
    return sorted({max(N // 10, 1), max(N // 2, 1), N})


def _strictly_decreasing(xs) -> bool:
    return all(b < a for a, b in zip(xs, xs[1:]))


def _stride_points(N: int, count: int = 100) -> list[int]:
    step = max(N // count, 1)
    return sorted(set(range(0, N + 1, step)) | set(_checkpoints(N)))


def run_invariants(cfg: ExperimentConfig) -> Report:
    p, digits = cfg.p, cfg.digits
    inv = quadfield.invariants(p, digits)
    adm = arith.admissibility(p)
    series, tail = quadfield.l_one_series(p, 4000)
    with mpmath.workdps(digits):
        kappa = quadfield.kappa(p, digits)
        summary = {
            "p": p, "above_five": adm.above_five,
            "unit_t": inv.t, "unit_u": inv.u, "unit_norm": inv.norm_sign,
            "epsilon": inv.epsilon, "regulator": inv.regulator,
            "h_sine": inv.h, "h_forms": inv.h_forms,
            "L1": inv.L1, "L1_series": series, "L1_series_tail_bound": tail,
            "gauss_sum": inv.gauss, "sqrt_p": mpmath.sqrt(p),
            "kappa": kappa, "eps_pow_minus_h": mpmath.exp(-inv.log_eps_h),
            "cusp_order": arith.cusp_order(p),
            "B2chi_standard": arith.bernoulli2_chi_standard(p),
        }
    return Report("invariants", cfg.header(), digits, summary=summary)


def run_series(cfg: ExperimentConfig) -> Report:
    pset = PartSet.from_name(cfg.set, cfg.p)
    dt = diff_table(generate_table(pset, cfg.N), cfg.k)
    col = "p(n)" if cfg.k == 0 else f"p^({cfg.k})(n)"
    rows = [{"n": n, col: v} for n, v in enumerate(dt.values)]
    return Report("series", cfg.header(), cfg.digits, rows=rows,
                  summary={"set": pset.label(), "k": cfg.k, "N": cfg.N})


def _ratio_report(cfg: ExperimentConfig, k: int) -> Report:
    p, N, digits = cfg.p, cfg.N, cfg.digits
    inv = quadfield.invariants(p, digits)
    plus = diff_table(generate_table(PartSet.plus(p), N), k)
    minus = diff_table(generate_table(PartSet.minus(p), N), k)
    undefined = [n for n in range(N + 1) if minus[n] == 0]
    last_bad = max((n for n in range(N + 1) if not minus[n] < plus[n]), default=None)
    with mpmath.workdps(digits):
        target = mpmath.exp(inv.log_eps_h)

        def gap(n):
            if minus[n] == 0:
                return None
            return abs(mpmath.mpf(plus[n]) / minus[n] - target)

        rows = []
        for n in _stride_points(N):
            g = gap(n)
            rows.append({
                "n": n, "plus": plus[n], "minus": minus[n],
                "ratio": None if g is None else mpmath.mpf(plus[n]) / minus[n],
                "gap": g,
            })
        checks = _checkpoints(N)
        gaps = [gap(n) for n in checks]
        summary = {
            "target": target, "h": inv.h,
            "checkpoints": checks, "gaps": gaps,
            "final_ratio": Fraction(plus[N], minus[N]) if minus[N] else None,
            "final_ratio_decimal": rows[-1]["ratio"],
            "final_gap": gaps[-1],
            "gaps_decreasing": None not in gaps and _strictly_decreasing(gaps),
            "undefined": undefined,
            "inequality_last_violation": last_bad,
            "inequality_threshold": 0 if last_bad is None else last_bad + 1,
        }
    return Report(cfg.command, cfg.header(), digits, rows=rows, summary=summary)


def run_petersson(cfg: ExperimentConfig) -> Report:
    return _ratio_report(cfg, 0)


def run_cesaro(cfg: ExperimentConfig) -> Report:
    return _ratio_report(cfg, -1)


def scan_cost(primes: list[int], N: int, classical: bool) -> int:
    """Rough count of coefficient updates for the tables a scan needs."""
    per_set = sum(N - a + 1 for a in range(1, N + 1)) // 2
    return per_set * 2 * len(primes) + (2 * per_set if classical else 0)


def _pk_certificate(pset: PartSet, k: int) -> bool:
    return all(partitions.has_property_pk(pset, j, max(j + 8, 2)) for j in range(k + 1, k + 6))


def _scan_rows(pset: PartSet, p: int | None, kmin: int, kmax: int, N: int) -> list[dict]:
    table = generate_table(pset, N)
    rows = []
    for k in range(kmin, kmax + 1):
        rep = partitions.scan_values(diff_table(table, k), pset.label())
        rows.append({
            "p": p, "set": pset.name, "k": k, "N": N,
            "last_violation": rep.last_violation, "violations": rep.violations,
            "undefined_count": len(rep.undefined), "undefined": list(rep.undefined[:20]),
            "threshold": rep.threshold,
            "supports": rep.threshold <= N // 2,
            "pk_certificate": _pk_certificate(pset, k),
        })
    return rows


def _scan_prime(p: int, kmin: int, kmax: int, N: int) -> list[dict]:
    return [row for name in ("plus", "minus")
            for row in _scan_rows(PartSet.from_name(name, p), p, kmin, kmax, N)]


def _checkpoint_path(directory: Path, p: int, kmin: int, kmax: int, N: int) -> Path:
    return directory / f"scan_p{p}_k{kmin}_{kmax}_N{N}.json"


def run_scan(cfg: ExperimentConfig, checkpoint_dir: str | os.PathLike | None = None) -> Report:
    primes = arith.admissible_primes(cfg.pmax)
    cost = scan_cost(primes, cfg.N, cfg.classical)
    if cost > cfg.budget:
        raise BudgetExceeded(f"scan needs about {cost:.2e} coefficient updates, budget is {cfg.budget:.2e}")
    results: dict[int, list[dict]] = {}
    todo = []
    ckdir = Path(checkpoint_dir) if checkpoint_dir else None
    for p in primes:
        path = ckdir and _checkpoint_path(ckdir, p, cfg.kmin, cfg.kmax, cfg.N)
        if path and path.exists():
            results[p] = json.loads(path.read_text())
        else:
            todo.append(p)

    def store(p, rows):
        results[p] = rows
        if ckdir:
            ckdir.mkdir(parents=True, exist_ok=True)
            _checkpoint_path(ckdir, p, cfg.kmin, cfg.kmax, cfg.N).write_text(json.dumps(rows, sort_keys=True))

    if cfg.workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = {p: pool.submit(_scan_prime, p, cfg.kmin, cfg.kmax, cfg.N) for p in todo}
            for p in todo:
                store(p, futures[p].result())
    else:
        for p in todo:
            store(p, _scan_prime(p, cfg.kmin, cfg.kmax, cfg.N))

    rows = [row for p in primes for row in results[p]]
    if cfg.classical:
        rows += _scan_rows(PartSet.classical(), None, cfg.kmin, cfg.kmax, cfg.N)
    rows.sort(key=lambda r: (r["p"] or 0, r["set"], r["k"]))
    summary = {
        "primes": primes, "jobs": len(rows),
        "max_threshold": max(r["threshold"] for r in rows),
        "all_support": all(r["supports"] for r in rows),
        "all_pk_certified": all(r["pk_certificate"] for r in rows),
    }
    return Report("scan-conjecture", cfg.header(), cfg.digits, rows=rows, summary=summary)


def run_schur(cfg: ExperimentConfig) -> Report:
    p, digits = cfg.p, cfg.digits
    inv = quadfield.invariants(p, max(digits, quadfield.DEFAULT_DIGITS))
    N = cfg.N if cfg.N else 2000
    plus = generate_table(PartSet.plus(p), N)
    minus = generate_table(PartSet.minus(p), N)
    rows = []
    with mpmath.workdps(digits + 10):
        ts = sorted({mpmath.mpf(t) for t in cfg.t}, reverse=True)
        target = mpmath.exp(inv.log_eps_h)
        for t in ts:
            pt = qseries.QPoint.at(t, digits)
            ub = qseries.u_breve(p, pt)
            other = qseries.u_expansion(p, pt, inv.log_eps_h)
            ratio = qseries.schur_ratio(p, pt, plus, minus)
            gap, tol = qseries.schur_identity_gap(p, pt, plus, minus)
            rows.append({
                "t": t, "q": pt.q, "u_breve": ub.value, "bound": ub.bound, "trunc": ub.trunc,
                "limit_gap": abs(ub.value * target - 1),
                "expansion_gap": abs(ub.value - other.value),
                "schur_ratio": ratio.value, "schur_ratio_bound": ratio.bound,
                "ratio_minus_limit": ratio.value - target,
                "identity_gap": gap, "identity_tol": tol, "identity_ok": gap <= tol,
            })
        gaps = [r["limit_gap"] for r in rows]
        summary = {"p": p, "limit": target, "N": N, "improving": _strictly_decreasing(gaps),
                   "final_limit_gap": gaps[-1] if gaps else None,
                   "identities_ok": all(r["identity_ok"] for r in rows)}
    return Report("schur", cfg.header(), digits, rows=rows, summary=summary)


def run_meinardus(cfg: ExperimentConfig) -> Report:
    p, digits = cfg.p, cfg.digits
    inv = quadfield.invariants(p, max(digits, quadfield.DEFAULT_DIGITS))
    md = asymptotics.build_meinardus(p, inv, cfg.convention)
    ns = sorted(set(cfg.n))
    N = max(ns)
    tables = {"+": generate_table(PartSet.plus(p), N), "-": generate_table(PartSet.minus(p), N)}
    rows = []
    with mpmath.workdps(digits):
        for sign, table in tables.items():
            for n in ns:
                pred = asymptotics.predict(md, sign, n)
                rows.append({"sign": sign, "n": n, "exact": table[n],
                             "predicted_log": pred.log_main_term,
                             "ratio": asymptotics.exact_to_predicted(md, sign, n, table[n])})
        dev = {s: [abs(r["ratio"] - 1) for r in rows if r["sign"] == s] for s in tables}
        summary = {
            "p": p, "convention": cfg.convention, "residueA": md.residueA,
            "Dp_plus": md.Dp_plus, "Dp_minus": md.Dp_minus, "C_plus": md.C_plus,
            "C_minus": md.C_minus, "exponent_power": md.exponent_power,
            "log_ratio": md.log_ratio, "h_regulator": inv.log_eps_h,
            "trend_to_one": {s: _strictly_decreasing(d) for s, d in dev.items()},
            "final_ratio": {s: [r["ratio"] for r in rows if r["sign"] == s][-1] for s in tables},
        }
    return Report("meinardus", cfg.header(), digits, rows=rows, summary=summary)


def printed_c3(p: int, inv: quadfield.QuadFieldInvariants):
    """exp(h log eps) * sqrt((1 - 1/p) zeta(2)), the constant as printed with A = 1 - 1/p."""
    with mpmath.workdps(inv.digits):
        return mpmath.exp(inv.log_eps_h) * mpmath.sqrt((1 - mpmath.mpf(1) / p) * mpmath.pi ** 2 / 6)


def run_appendix(cfg: ExperimentConfig) -> Report:
    p, N, digits = cfg.p, cfg.N, cfg.digits
    inv = quadfield.invariants(p, max(digits, quadfield.DEFAULT_DIGITS))
    md = asymptotics.build_excluded_one(asymptotics.build_meinardus(p, inv))
    excl = generate_table(PartSet.plus_excl1(p), N)
    minus = generate_table(PartSet.minus(p), N)
    plus = generate_table(PartSet.plus(p), N)
    first_diff = list(diff_table(plus, 1).values) == list(excl.coeffs)
    last_bad = max((n for n in range(N + 1) if not excl[n] < minus[n]), default=None)
    c3, c3_printed = md.excl1.c3, printed_c3(p, inv)
    rows = []
    with mpmath.workdps(digits):
        for n in _stride_points(N):
            if n == 0 or minus[n] == 0:
                continue
            scaled = mpmath.sqrt(n) * mpmath.mpf(excl[n]) / minus[n]
            rows.append({"n": n, "plus_excl1": excl[n], "minus": minus[n], "scaled_ratio": scaled,
                         "over_c3": scaled / c3})
        final = rows[-1]["scaled_ratio"]
        summary = {
            "p": p, "N": N, "c3": c3, "c3_printed": c3_printed,
            "final_scaled_ratio": final,
            "rel_err_c3": abs(final / c3 - 1), "rel_err_c3_printed": abs(final / c3_printed - 1),
            "inequality_last_violation": last_bad,
            "inequality_threshold": 0 if last_bad is None else last_bad + 1,
            "equals_first_difference_of_plus": first_diff,
        }
    return Report("appendix-excl1", cfg.header(), digits, rows=rows, summary=summary)


RUNNERS = {
    "invariants": run_invariants,
    "series": run_series,
    "scan-conjecture": run_scan,
    "petersson": run_petersson,
    "cesaro": run_cesaro,
    "schur": run_schur,
    "meinardus": run_meinardus,
    "appendix-excl1": run_appendix,
}
