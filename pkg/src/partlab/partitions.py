"""Exact partition counts p_A(n), their difference/summatory series, and rho ratios.

Everything here is integer or Fraction arithmetic; nothing is rounded.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Iterator

import numpy as np

from .arith import require_admissible, residues

MAX_ABS_K = 16
BRUTE_FORCE_LIMIT = 60


@dataclass(frozen=True)
class PartSet:
    """Allowed parts: m >= min_part, m mod modulus in allowed_residues, m not excluded.

    ``modulus=None`` means every positive integer is allowed (classical p(n)).
    """

    modulus: int | None = None
    allowed_residues: frozenset[int] = frozenset()
    excluded_parts: frozenset[int] = frozenset()
    min_part: int = 1
    name: str = "classical"

    @classmethod
    def classical(cls) -> PartSet:
        return cls()

    @classmethod
    def plus(cls, p: int) -> PartSet:
        require_admissible(p)
        return cls(p, residues(p, 1), name="plus")

    @classmethod
    def minus(cls, p: int) -> PartSet:
        require_admissible(p)
        return cls(p, residues(p, -1), name="minus")

    @classmethod
    def plus_excl1(cls, p: int) -> PartSet:
        require_admissible(p)
        return cls(p, residues(p, 1), frozenset({1}), name="plus-excl1")

    @classmethod
    def from_name(cls, name: str, p: int | None = None) -> PartSet:
        if name == "classical":
            return cls.classical()
        makers = {"plus": cls.plus, "minus": cls.minus, "plus-excl1": cls.plus_excl1}
        if name not in makers:
            raise ValueError(f"unknown part set {name!r}")
        if p is None:
            raise ValueError(f"part set {name!r} needs a modulus")
        return makers[name](p)

    def __contains__(self, m: int) -> bool:
        if m < self.min_part or m < 1 or m in self.excluded_parts:
            return False
        return self.modulus is None or m % self.modulus in self.allowed_residues

    def parts(self, upto: int) -> list[int]:
        return [m for m in range(1, upto + 1) if m in self]

    def label(self) -> str:
        return self.name if self.modulus is None else f"{self.name}/{self.modulus}"


@dataclass(frozen=True)
class PartitionTable:
    pset: PartSet
    N: int
    coeffs: tuple[int, ...] = field(repr=False)

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "p(n)"])
        w.writerows((n, str(c)) for n, c in enumerate(self.coeffs))
        return buf.getvalue()


@dataclass(frozen=True)
class DiffTable:
    base: PartitionTable
    k: int
    values: tuple[int, ...] = field(repr=False)

    def __getitem__(self, n: int) -> int:
        # p^(k)(n) = 0 for n < 0
        return self.values[n] if n >= 0 else 0

    @property
    def N(self) -> int:
        return self.base.N


def _euler_product(parts: list[int], N: int) -> list[int]:
    # in-place c[n] += c[n-a] for n = a..N, vectorised over blocks of length a;
    # each block only reads the previous (already final) block
    c = np.zeros(N + 1, dtype=object)
    c[:] = 0
    c[0] = 1
    for a in parts:
        lo = a
        while lo <= N:
            hi = min(lo + a, N + 1)
            c[lo:hi] += c[lo - a:hi - a]
            lo = hi
    return [int(x) for x in c]


@lru_cache(maxsize=64)
def generate_table(pset: PartSet, N: int) -> PartitionTable:
    """Coefficients of prod_{a in A, a <= N} 1/(1 - X^a) up to X^N."""
    if N < 0:
        raise ValueError("N must be non-negative")
    return PartitionTable(pset, N, tuple(_euler_product(pset.parts(N), N)))


def brute_force_count(pset: PartSet, n: int) -> int:
    """Count partitions of n into parts from pset by explicit enumeration (test oracle)."""
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force refuses n={n} > {BRUTE_FORCE_LIMIT}")
    parts = pset.parts(n)

    def walk(rest: int, largest: int) -> Iterator[None]:
        if rest == 0:
            yield None
            return
        for a in parts:
            if a > largest or a > rest:
                break
            yield from walk(rest - a, a)

    return sum(1 for _ in walk(n, n))


def series_inverse_holds(table: PartitionTable) -> bool:
    """Check (sum c_n X^n) * prod_{a<=N} (1 - X^a) == 1 mod X^(N+1), exactly."""
    N = table.N
    prod = [0] * (N + 1)
    prod[0] = 1
    for a in table.pset.parts(N):
        for n in range(N, a - 1, -1):
            prod[n] -= prod[n - a]
    c = np.array(table.coeffs, dtype=object)
    rev = np.array(prod[::-1], dtype=object)
    for n in range(N + 1):
        s = np.dot(c[: n + 1], rev[N - n:])
        if s != (1 if n == 0 else 0):
            return False
    return True


def forward_difference(values: list[int] | tuple[int, ...]) -> list[int]:
    return [v - (values[n - 1] if n else 0) for n, v in enumerate(values)]


def prefix_sums(values: list[int] | tuple[int, ...]) -> list[int]:
    out, s = [], 0
    for v in values:
        s += v
        out.append(s)
    return out


def diff_table(table: PartitionTable, k: int, max_abs_k: int = MAX_ABS_K) -> DiffTable:
    """Coefficients of (1 - X)^k * sum p(n) X^n."""
    if abs(k) > max_abs_k:
        raise ValueError(f"|k|={abs(k)} exceeds bound {max_abs_k}")
    values: list[int] | tuple[int, ...] = table.coeffs
    step = forward_difference if k > 0 else prefix_sums
    for _ in range(abs(k)):
        values = step(values)
    return DiffTable(table, k, tuple(values))


class UndefinedRatio(ZeroDivisionError):
    pass


def rho(dt_k: DiffTable, dt_k1: DiffTable, n: int) -> Fraction:
    """rho^(k)(n) = p^(k+1)(n) / p^(k)(n)."""
    if dt_k1.k != dt_k.k + 1:
        raise ValueError("second table must have k + 1")
    den = dt_k[n]
    if den == 0:
        raise UndefinedRatio(f"rho^({dt_k.k}) undefined at n={n}: p^({dt_k.k})({n}) = 0")
    return Fraction(dt_k1[n], den)


@dataclass(frozen=True)
class ScanReport:
    label: str
    k: int
    N: int
    last_violation: int | None  # largest n with rho(n) <= rho(n+1)
    violations: int
    undefined: tuple[int, ...]

    @property
    def threshold(self) -> int:
        """First index from which rho^(k) is strictly decreasing through N."""
        last = -1 if self.last_violation is None else self.last_violation
        return max([last, *self.undefined]) + 1

    def as_dict(self) -> dict:
        return {
            "set": self.label, "k": self.k, "N": self.N,
            "last_violation": self.last_violation, "violations": self.violations,
            "undefined": list(self.undefined), "threshold": self.threshold,
        }


def scan_values(values: DiffTable, label: str = "") -> ScanReport:
    """Scan n = 0..N-1 for failures of rho(n) > rho(n+1).

    rho(n) - rho(n+1) = (v(n)^2 - v(n-1) v(n+1)) / (v(n) v(n+1)), so the sign
    is decided by integer products; indices where v(n) or v(n+1) vanishes make
    the comparison undefined and are reported separately.
    """
    N = values.N
    last, count, undefined = None, 0, []
    for n in range(N):
        a, b, c = values[n - 1], values[n], values[n + 1]
        if b == 0 or c == 0:
            undefined.append(n)
            continue
        cross = b * b - a * c
        if (cross > 0) != ((b > 0) == (c > 0)) or cross == 0:
            last = n
            count += 1
    return ScanReport(label, values.k, N, last, count, tuple(undefined))


def monotonicity_scan(pset: PartSet, k: int, N: int) -> ScanReport:
    if N < 2:
        raise ValueError("N must be at least 2")
    return scan_values(diff_table(generate_table(pset, N), k), pset.label())


def has_property_pk(pset: PartSet, k: int, prefix_len: int) -> bool:
    """Every removal of k of the first prefix_len parts leaves gcd 1.

    Negative k needs nothing removed and is trivially satisfied. The check is
    a finite certificate; for the residue-class sets in use the parts beyond
    the prefix cannot spoil it.
    """
    if k < 0:
        return True
    if prefix_len < k + 2:
        raise ValueError("prefix_len must be at least k + 2")
    prefix: list[int] = []
    m = 0
    while len(prefix) < prefix_len:
        m += 1
        if m in pset:
            prefix.append(m)
    for removed in combinations(range(prefix_len), k):
        drop = set(removed)
        g = 0
        for i, a in enumerate(prefix):
            if i not in drop:
                g = gcd(g, a)
                if g == 1:
                    break
        if g != 1:
            return False
    return True


def partial_sum_ratio(prefix: DiffTable, n: int, h: int) -> Fraction:
    """(p(0) + ... + p(n+h)) / (p(0) + ... + p(n)) from a k = -1 table."""
    return Fraction(prefix[n + h], prefix[n])
