"""High-precision evaluation of u_breve(it), the Schur ratio and the Rogers-Ramanujan fraction.

u_breve(tau) = q^e * prod_{n>=1} (1 - q^n)^chi(n), with e the exact cusp order.
All products are evaluated as sums of logarithms and truncated only when the
tail bound q^(N+1)/(1-q)^2 on the neglected log-sum is below the requested
accuracy.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .arith import character_table, cusp_order, require_admissible
from .partitions import PartitionTable
from .quadfield import PrecisionError

DEFAULT_DIGITS = 50


@dataclass(frozen=True)
class QPoint:
    t: mpmath.mpf
    q: mpmath.mpf
    digits: int

    @classmethod
    def at(cls, t, digits: int = DEFAULT_DIGITS) -> QPoint:
        with mpmath.workdps(digits):
            t = mpmath.mpf(t)
            if t <= 0:
                raise ValueError("t must be positive")
            return cls(t, mpmath.exp(-2 * mpmath.pi * t), digits)


@dataclass(frozen=True)
class Evaluation:
    value: mpmath.mpf
    bound: mpmath.mpf  # absolute error bound on value
    trunc: int


def log_tail_bound(q, N: int):
    """Bound on |sum_{n>N} chi(n) log(1 - q^n)|."""
    return q ** (N + 1) / (1 - q) ** 2


def required_trunc(q, target) -> int:
    # smallest N with q^(N+1) <= target (1-q)^2
    N = int(mpmath.ceil(mpmath.log(target * (1 - q) ** 2) / mpmath.log(q))) - 1
    N = max(N, 1)
    while log_tail_bound(q, N) > target:
        N += 1
    return N


def _log_product(p: int, q, N: int):
    table = character_table(p)
    return mpmath.fsum(table[n % p] * mpmath.log1p(-q ** n) for n in range(1, N + 1) if n % p)


def u_breve(p: int, pt: QPoint, trunc: int | None = None, target=None) -> Evaluation:
    """u_breve(it) with a certified absolute error bound.

    With ``trunc=None`` the truncation is chosen to meet ``target``
    (default 10^-(digits-10)); an explicit ``trunc`` that cannot meet the
    target raises :class:`PrecisionError` naming the required order.
    """
    require_admissible(p)
    e = cusp_order(p)
    with mpmath.workdps(pt.digits + 10):
        target = mpmath.mpf(10) ** (-(pt.digits - 10)) if target is None else mpmath.mpf(target)
        need = required_trunc(pt.q, target)
        if trunc is None:
            trunc = need
        elif log_tail_bound(pt.q, trunc) > target:
            raise PrecisionError(f"trunc={trunc} too small at t={pt.t}; need {need}")
        tail = log_tail_bound(pt.q, trunc)
        logv = e.numerator * mpmath.log(pt.q) / e.denominator + _log_product(p, pt.q, trunc)
        value = mpmath.exp(logv)
        bound = value * mpmath.expm1(tail)
    return Evaluation(value, bound, trunc)


def u_via_involution(p: int, T, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    """u(iT) = u_breve(i/(pT))."""
    return u_breve(p, QPoint.at(1 / (p * mpmath.mpf(T)), digits)).value


def u_expansion(p: int, pt: QPoint, log_eps_h, terms: int = 200) -> Evaluation:
    """u_breve(it) from the expansion of u at the other cusp.

    With Q = exp(-2 pi/(p t)), u_breve(it) = u(i/(pt)) = eps^-h * prod_n Psi(Q^n),
    and log Psi(X) = -sqrt(p) sum_m chi(m) X^m / m, so
    log u_breve(it) = -h log eps - sqrt(p) sum_m chi(m)/m * Q^m/(1-Q^m).
    The truncation error after M terms is at most sqrt(p) Q^(M+1)/(1-Q)^2.
    """
    table = character_table(p)
    with mpmath.workdps(pt.digits + 10):
        Q = mpmath.exp(-2 * mpmath.pi / (p * pt.t))
        s = mpmath.fsum(table[m % p] * Q ** m / (m * (1 - Q ** m)) for m in range(1, terms + 1))
        value = mpmath.exp(-log_eps_h - mpmath.sqrt(p) * s)
        bound = value * mpmath.expm1(mpmath.sqrt(p) * Q ** (terms + 1) / (1 - Q) ** 2)
    return Evaluation(value, bound, terms)


def partition_series_tail(q, N: int):
    """Bound on sum_{n>N} p_A(n) q^n using p_A(n) <= p(n) < exp(pi sqrt(2n/3)).

    Returns None when the bound terms are not yet geometrically decreasing at N.
    """
    c = mpmath.pi * mpmath.sqrt(mpmath.mpf(2) / 3)
    n = N + 1
    ratio = mpmath.exp(c * (mpmath.sqrt(n + 1) - mpmath.sqrt(n))) * q
    if ratio >= 1:
        return None
    return mpmath.exp(c * mpmath.sqrt(n)) * q ** n / (1 - ratio)


@dataclass(frozen=True)
class SchurRatio:
    value: mpmath.mpf
    bound: mpmath.mpf  # absolute error bound
    plus_sum: mpmath.mpf
    minus_sum: mpmath.mpf


def schur_ratio(p: int, pt: QPoint, plus: PartitionTable, minus: PartitionTable,
                target=None) -> SchurRatio:
    """sum p_+(n) q^n / sum p_-(n) q^n over the tabulated range, with tail certificate."""
    if plus.N != minus.N:
        raise ValueError("tables must share the truncation order")
    N = plus.N
    with mpmath.workdps(pt.digits + 10):
        target = mpmath.mpf(10) ** (-(pt.digits - 10)) if target is None else mpmath.mpf(target)
        tail = partition_series_tail(pt.q, N)
        if tail is None or tail > target:
            raise PrecisionError(f"series tail not certifiable at t={pt.t}, N={N}")
        sp = mpmath.polyval(list(reversed([mpmath.mpf(c) for c in plus.coeffs])), pt.q)
        sm = mpmath.polyval(list(reversed([mpmath.mpf(c) for c in minus.coeffs])), pt.q)
        value = sp / sm
        # both sums are >= 1, so each truncation perturbs the ratio by at most tail*(1+value)
        bound = tail * (1 + value) / (sm - tail)
    return SchurRatio(value, bound, sp, sm)


def schur_identity_gap(p: int, pt: QPoint, plus: PartitionTable, minus: PartitionTable):
    """Return (|ratio * u_breve - q^e|, certified tolerance)."""
    e = cusp_order(p)
    ratio = schur_ratio(p, pt, plus, minus)
    ub = u_breve(p, pt)
    with mpmath.workdps(pt.digits + 10):
        qe = pt.q ** (mpmath.mpf(e.numerator) / e.denominator)
        gap = abs(ratio.value * ub.value - qe)
        tol = ratio.bound * ub.value + ratio.value * ub.bound + mpmath.mpf(10) ** (-pt.digits + 5)
    return gap, tol


@dataclass(frozen=True)
class CFValue:
    value: mpmath.mpf
    gap: mpmath.mpf  # |value - value at depth-1|


def _rr_backward(q, depth: int):
    x = mpmath.mpf(1)
    for k in range(depth - 1, 0, -1):
        x = 1 + q ** k / x
    return q ** (mpmath.mpf(1) / 5) / x


def rr_cf(pt: QPoint, depth: int) -> CFValue:
    """q^(1/5) / (1 + q/(1 + q^2/(1 + ...))) with depth-1 partial numerators."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    with mpmath.workdps(pt.digits + 10):
        v = _rr_backward(pt.q, depth)
        gap = abs(v - _rr_backward(pt.q, depth - 1)) if depth > 1 else mpmath.inf
    return CFValue(v, gap)


def rr_cf_at_one(depth: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    """The q = 1 fraction 1/(1 + 1/(1 + ...)), the formal t -> 0 limit."""
    with mpmath.workdps(digits):
        x = mpmath.mpf(1)
        for _ in range(depth - 1):
            x = 1 + 1 / x
        return 1 / x


def psi_leading(p: int, digits: int = 64) -> mpmath.mpc:
    """Gauss sum read off the X-coefficient of prod_{r=1}^{p-1} (1 - X zeta^r)^chi(r).

    Works with power series truncated after X^1: (1 - aX) for chi = +1 and its
    inverse 1 + aX for chi = -1.
    """
    require_admissible(p)
    table = character_table(p)
    with mpmath.workdps(digits):
        c0, c1 = mpmath.mpc(1), mpmath.mpc(0)
        for r in range(1, p):
            z = mpmath.expjpi(mpmath.mpf(2 * r) / p)
            f1 = -z if table[r] == 1 else z
            c0, c1 = c0, c1 + c0 * f1
        return -c1


@dataclass(frozen=True)
class ConcavityReport:
    p: int
    ts: tuple
    second_differences: tuple
    max_second_difference: object


def log_concavity_of_h(p: int, t_grid, digits: int = DEFAULT_DIGITS) -> ConcavityReport:
    """Second divided differences of t -> log u_breve(it) over the grid."""
    ts = [mpmath.mpf(t) for t in t_grid]
    if any(b <= a for a, b in zip(ts, ts[1:])) or any(t <= 0 for t in ts):
        raise ValueError("grid must be positive and strictly increasing")
    if len(ts) < 3:
        return ConcavityReport(p, tuple(ts), (), None)
    with mpmath.workdps(digits + 10):
        logs = [mpmath.log(u_breve(p, QPoint.at(t, digits)).value) for t in ts]
        d2 = []
        for i in range(1, len(ts) - 1):
            a, b, c = ts[i - 1], ts[i], ts[i + 1]
            left = (logs[i] - logs[i - 1]) / (b - a)
            right = (logs[i + 1] - logs[i]) / (c - b)
            d2.append(2 * (right - left) / (c - a))
    return ConcavityReport(p, tuple(ts), tuple(d2), max(d2))


def exponent_as_mpf(e: Fraction):
    return mpmath.mpf(e.numerator) / e.denominator
