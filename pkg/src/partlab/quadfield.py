"""Invariants of the real quadratic field Q(sqrt(p)) for a prime p = 1 mod 4.

The class number is computed twice by unrelated routes: the logarithmic sine
sum (needs the regulator) and the count of cycles of reduced indefinite
binary quadratic forms of discriminant p (pure integer arithmetic).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import mpmath

from .arith import character_table, require_admissible

DEFAULT_DIGITS = 64


class PrecisionError(ArithmeticError):
    """A rounding or cross-check step could not be certified at the working precision."""


def fundamental_unit(p: int, max_steps: int = 100_000) -> tuple[int, int, int]:
    """Return (t, u, s) with eps = (t + u sqrt(p))/2 and t^2 - p u^2 = 4 s.

    Expands omega = (1 + sqrt(p))/2 as a continued fraction, tracking the
    complete quotients (P + sqrt(p))/Q. A unit with t, u > 0 corresponds to a
    convergent h/k of omega via eps = h - k*conj(omega); the first convergent
    of norm +-1 is the fundamental unit, and it must appear before the
    expansion (periodic from the second quotient on) closes its first period.
    """
    require_admissible(p)
    r = isqrt(p)
    P, Q = 1, 2
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    start = None
    for _ in range(max_steps):
        a = (P + r) // Q
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        t, u = 2 * h - k, k
        norm4 = t * t - p * u * u
        if abs(norm4) == 4:
            return t, u, norm4 // 4
        P = a * Q - P
        Q = (p - P * P) // Q
        if start is None:
            start = (P, Q)
        elif (P, Q) == start:
            raise ArithmeticError(f"period closed without a unit at p={p}")
    raise PrecisionError(f"no unit found for p={p} within {max_steps} steps")


def fundamental_unit_search(p: int, umax: int = 100_000) -> tuple[int, int, int]:
    """Smallest u > 0 with p u^2 +- 4 a perfect square (test oracle)."""
    for u in range(1, umax + 1):
        for s in (-1, 1):
            tt = p * u * u + 4 * s
            t = isqrt(tt)
            if t > 0 and t * t == tt:
                return t, u, s
    raise PrecisionError(f"no unit with u <= {umax} for p={p}")


def regulator(p: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    t, u, _ = fundamental_unit(p)
    with mpmath.workdps(digits):
        return +mpmath.log((t + u * mpmath.sqrt(p)) / 2)


def class_number_sine(p: int, reg, digits: int = DEFAULT_DIGITS, margin: float = 0.25) -> int:
    """h = -(1/reg) * sum_{0<r<p/2} chi(r) log sin(pi r/p), rounded with a margin check."""
    require_admissible(p)
    table = character_table(p)
    with mpmath.workdps(digits):
        s = mpmath.fsum(table[r] * mpmath.log(mpmath.sin(mpmath.pi * r / p))
                        for r in range(1, (p - 1) // 2 + 1))
        value = -s / mpmath.mpf(reg)
        h = int(mpmath.nint(value))
        if abs(value - h) >= margin or h < 1:
            raise PrecisionError(f"sine-formula class number {value} not near an integer (p={p})")
    return h


def _rho_b(b: int, c: int, p: int, r: int) -> int:
    # b' = -b mod 2|c| placed in (r - 2|c|, r]; for reduced forms this is the reduced range
    m = 2 * abs(c)
    return r - ((r + b) % m)


def reduced_forms(p: int) -> list[tuple[int, int, int]]:
    """All reduced forms (a, b, c) with b^2 - 4ac = p.

    Reduced means 0 < b < sqrt(p) and sqrt(p) - b < 2|a| < sqrt(p) + b.
    """
    r = isqrt(p)
    forms = []
    for b in range(1, r + 1):
        if (b - p) % 2:
            continue
        n = (p - b * b) // 4  # = -a*c
        for a in range(1, n + 1):
            if n % a:
                continue
            # sqrt(p) - b < 2a < sqrt(p) + b, tested exactly by squaring
            lo_ok = 2 * a + b > 0 and (2 * a + b) ** 2 > p
            hi_ok = 2 * a - b < 0 or (2 * a - b) ** 2 < p
            if lo_ok and hi_ok:
                c = -n // a
                forms.append((a, b, c))
                forms.append((-a, b, -c))
    return sorted(forms)


def rho(form: tuple[int, int, int], p: int) -> tuple[int, int, int]:
    a, b, c = form
    r = isqrt(p)
    b2 = _rho_b(b, c, p, r)
    return c, b2, (b2 * b2 - p) // (4 * c)


def form_cycles(p: int) -> list[list[tuple[int, int, int]]]:
    forms = reduced_forms(p)
    unseen = set(forms)
    cycles = []
    for f in forms:
        if f not in unseen:
            continue
        cycle = [f]
        unseen.discard(f)
        g = rho(f, p)
        while g != f:
            if g not in unseen:
                raise ArithmeticError(f"rho left the reduced set or merged cycles at {g}")
            cycle.append(g)
            unseen.discard(g)
            g = rho(g, p)
        cycles.append(cycle)
    return cycles


def class_number_forms(p: int) -> int:
    """Narrow class number as the number of rho-cycles of reduced forms.

    For prime p = 1 mod 4 the fundamental unit has norm -1, so this is also
    the wide class number.
    """
    require_admissible(p)
    return len(form_cycles(p))


def l_one(p: int, h: int, reg, digits: int = DEFAULT_DIGITS, periods: int = 4000) -> mpmath.mpf:
    """L(1, chi) = (2h/sqrt(p)) * reg, cross-checked against the Dirichlet series.

    The series is summed one full period of chi at a time. Because chi is even
    with zero sum, each period block is O(1/m^3) and the tail after M blocks is
    at most 1/(6(M-1)^2).
    """
    with mpmath.workdps(digits):
        value = 2 * h * mpmath.mpf(reg) / mpmath.sqrt(p)
    direct, bound = l_one_series(p, periods)
    if abs(float(value) - direct) > bound + 1e-9:
        raise PrecisionError(
            f"L(1,chi) mismatch at p={p}: formula {float(value)!r}, series {direct!r} +- {bound:.1e}"
        )
    return value


def l_one_series(p: int, periods: int) -> tuple[float, float]:
    """Period-blocked partial sum of sum chi(n)/n and its tail bound (floats)."""
    import math

    table = character_table(p)
    res = [(r, table[r]) for r in range(1, p) if table[r]]
    total = math.fsum(
        math.fsum(s / (m * p + r) for r, s in res) for m in range(periods)
    )
    return total, 1.0 / (6 * (periods - 1) ** 2)


def gauss_sum(p: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpc:
    table = character_table(p)
    with mpmath.workdps(digits):
        return mpmath.fsum(table[r] * mpmath.expjpi(mpmath.mpf(2 * r) / p) for r in range(1, p))


def kappa(p: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpc:
    """prod_{0<r<p/2} (zeta_p^{-r/2} - zeta_p^{r/2})^{chi(r)} as a complex number."""
    table = character_table(p)
    with mpmath.workdps(digits):
        out = mpmath.mpc(1)
        for r in range(1, (p - 1) // 2 + 1):
            half = mpmath.expjpi(mpmath.mpf(r) / p)
            factor = 1 / half - half
            out *= factor if table[r] == 1 else 1 / factor
        return out


@dataclass(frozen=True)
class QuadFieldInvariants:
    p: int
    t: int
    u: int
    norm_sign: int
    regulator: mpmath.mpf
    h: int
    h_forms: int
    L1: mpmath.mpf
    gauss: mpmath.mpc
    digits: int = DEFAULT_DIGITS

    @property
    def epsilon(self) -> mpmath.mpf:
        with mpmath.workdps(self.digits):
            return (self.t + self.u * mpmath.sqrt(self.p)) / 2

    @property
    def log_eps_h(self) -> mpmath.mpf:
        """h * log(eps), the logarithm of the limiting ratio."""
        with mpmath.workdps(self.digits):
            return self.h * self.regulator


@lru_cache(maxsize=None)
def invariants(p: int, digits: int = DEFAULT_DIGITS) -> QuadFieldInvariants:
    require_admissible(p)
    t, u, s = fundamental_unit(p)
    reg = regulator(p, digits)
    h = class_number_sine(p, reg, digits)
    h_forms = class_number_forms(p)
    if h != h_forms:
        raise ArithmeticError(f"class numbers disagree at p={p}: sine {h}, forms {h_forms}")
    return QuadFieldInvariants(
        p=p, t=t, u=u, norm_sign=s, regulator=reg, h=h, h_forms=h_forms,
        L1=l_one(p, h, reg, digits), gauss=gauss_sum(p, digits), digits=digits,
    )
