"""Exact primitives: admissible primes, the Legendre character, B_2 data.

Rationals are :class:`fractions.Fraction` throughout, which is always kept in
lowest terms with a positive denominator.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import NamedTuple


class Admissibility(NamedTuple):
    admissible: bool  # prime and congruent to 1 mod 4
    above_five: bool


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def admissibility(p: int) -> Admissibility:
    ok = is_prime(p) and p % 4 == 1
    return Admissibility(ok, ok and p > 5)


def is_admissible_prime(p: int) -> bool:
    return admissibility(p).admissible


def admissible_primes(pmax: int, pmin: int = 5) -> list[int]:
    return [p for p in range(pmin, pmax + 1) if is_admissible_prime(p)]


def require_admissible(p: int) -> None:
    if not is_admissible_prime(p):
        raise ValueError(f"p={p} is not a prime congruent to 1 mod 4")


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0, by the binary reciprocity algorithm."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("n must be a positive odd integer")
    a %= n
    sign = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def chi(p: int, n: int) -> int:
    """Legendre character (n/p)."""
    return jacobi(n, p)


def euler_criterion(p: int, n: int) -> int:
    r = pow(n % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


@lru_cache(maxsize=None)
def character_table(p: int) -> tuple[int, ...]:
    """chi(p, r) for r = 0..p-1; index with n % p."""
    return tuple(chi(p, r) for r in range(p))


def residues(p: int, sign: int) -> frozenset[int]:
    """Residues r in 1..p-1 with chi(r) == sign."""
    table = character_table(p)
    return frozenset(r for r in range(1, p) if table[r] == sign)


def bernoulli2(x: Fraction | int) -> Fraction:
    x = Fraction(x)
    return x * x - x + Fraction(1, 6)


def cusp_order_siegel(p: int) -> Fraction:
    """(p/2) * sum_{0<r<p/2} chi(r) B_2(r/p), the exponent of q in u_breve."""
    table = character_table(p)
    s = sum(table[r] * bernoulli2(Fraction(r, p)) for r in range(1, (p - 1) // 2 + 1))
    return Fraction(p, 2) * s


def cusp_order_closed(p: int) -> Fraction:
    table = character_table(p)
    return Fraction(sum(table[a] * a * a for a in range(1, p)), 4 * p)


def cusp_order(p: int) -> Fraction:
    """Order of vanishing of u_breve at infinity, as an exact rational.

    Computed from the half-range Siegel exponents and checked against the
    full-range closed form; a mismatch raises ``ArithmeticError``.
    """
    require_admissible(p)
    siegel = cusp_order_siegel(p)
    closed = cusp_order_closed(p)
    if siegel != closed:
        raise ArithmeticError(f"cusp order mismatch at p={p}: {siegel} != {closed}")
    return siegel


def bernoulli2_chi_standard(p: int) -> Fraction:
    """Generalized B_{2,chi} under the usual convention: (1/p) sum chi(a) a^2 - sum chi(a) a."""
    table = character_table(p)
    return Fraction(sum(table[a] * a * a for a in range(1, p)), p) - sum(
        table[a] * a for a in range(1, p)
    )
