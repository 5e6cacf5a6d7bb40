"""Meinardus main terms for partitions into quadratic residues / non-residues.

For A = S_+ or S_-, D(s) = sum_{a in A} a^-s = (zeta(s)(1 - p^-s) +- L(s, chi))/2
has its only pole at s = 1 (alpha = 1) with residue (1 - 1/p)/2, D(0) = 0, and
D'(0) = zeta(0) log(p)/2 +- L'(0, chi)/2 = -(log p)/4 +- (sqrt(p)/4) L(1, chi).

``convention="printed"`` instead uses residue 1 - 1/p and zeta(0) = -1/12
(giving -(log p)/24); those constants leave C_+/C_- unchanged but miss the
exact counts by a factor growing like exp(c sqrt(n)). Only alpha = 1 occurs,
so zeta(2) = pi^2/6 is used in closed form.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import mpmath

from .quadfield import QuadFieldInvariants


@dataclass(frozen=True)
class ExcludedOne:
    """Parts in S_+ other than 1: D shifts by -1, the derivative is unchanged."""

    D0: int
    exponent_power: Fraction
    C_1plus: mpmath.mpf
    c3: mpmath.mpf


@dataclass(frozen=True)
class MeinardusData:
    p: int
    alpha: int
    residueA: mpmath.mpf
    D0_plus: Fraction
    D0_minus: Fraction
    Dp_plus: mpmath.mpf
    Dp_minus: mpmath.mpf
    C_plus: mpmath.mpf
    C_minus: mpmath.mpf
    exponent_power: Fraction
    digits: int
    convention: str = "corrected"
    excl1: ExcludedOne | None = None

    @property
    def growth(self) -> mpmath.mpf:
        """A * zeta(2); the exponential term is exp(2 sqrt(growth * n))."""
        with mpmath.workdps(self.digits):
            return self.residueA * mpmath.pi ** 2 / 6

    @property
    def log_ratio(self) -> mpmath.mpf:
        """log(C_+/C_-) = D'_+(0) - D'_-(0)."""
        with mpmath.workdps(self.digits):
            return self.Dp_plus - self.Dp_minus


def exponent_power(D0, alpha: int = 1) -> Fraction:
    """Power of n in the main term: (2 D(0) - 2 - alpha) / (2 (1 + alpha))."""
    return Fraction(2 * Fraction(D0) - 2 - alpha, 2 * (1 + alpha))


def meinardus_constant(Dp, D0, residueA, alpha: int = 1):
    """C = e^{D'(0)} (2 pi (1+alpha))^{-1/2} (A Gamma(alpha+1) zeta(alpha+1))^{(1-2D(0))/(2(1+alpha))}."""
    power = Fraction(1 - 2 * Fraction(D0), 2 * (1 + alpha))
    return (mpmath.exp(Dp) * (2 * mpmath.pi * (1 + alpha)) ** mpmath.mpf(-0.5)
            * (residueA * mpmath.gamma(alpha + 1) * mpmath.zeta(alpha + 1))
            ** (mpmath.mpf(power.numerator) / power.denominator))


CONVENTIONS = ("corrected", "printed")


def build_meinardus(p: int, inv: QuadFieldInvariants, convention: str = "corrected") -> MeinardusData:
    if inv.p != p:
        raise ValueError("invariants belong to a different prime")
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    digits = inv.digits
    with mpmath.workdps(digits):
        if convention == "corrected":
            A = (1 - mpmath.mpf(1) / p) / 2
            zeta0 = mpmath.mpf(-1) / 2
        else:
            A = 1 - mpmath.mpf(1) / p
            zeta0 = mpmath.mpf(-1) / 12
        base = zeta0 * mpmath.log(p) / 2
        half_Lprime0 = mpmath.sqrt(p) / 4 * inv.L1  # (1/2) L'(0, chi)
        Dp_plus, Dp_minus = base + half_Lprime0, base - half_Lprime0
        zeta2 = mpmath.pi ** 2 / 6
        quarter = (A * zeta2) ** mpmath.mpf(0.25)
        front = 1 / mpmath.sqrt(4 * mpmath.pi)
        return MeinardusData(
            p=p, alpha=1, residueA=A, D0_plus=Fraction(0), D0_minus=Fraction(0),
            Dp_plus=Dp_plus, Dp_minus=Dp_minus,
            C_plus=mpmath.exp(Dp_plus) * front * quarter,
            C_minus=mpmath.exp(Dp_minus) * front * quarter,
            exponent_power=exponent_power(0), digits=digits, convention=convention,
        )


def build_excluded_one(md: MeinardusData) -> MeinardusData:
    with mpmath.workdps(md.digits):
        g = md.growth
        C1 = mpmath.exp(md.Dp_plus) / mpmath.sqrt(4 * mpmath.pi) * g ** mpmath.mpf(0.75)
        block = ExcludedOne(D0=-1, exponent_power=exponent_power(-1), C_1plus=C1,
                            c3=C1 / md.C_minus)
    return replace(md, excl1=block)


@dataclass(frozen=True)
class Prediction:
    n: int
    log_main_term: mpmath.mpf


def predict(md: MeinardusData, sign: str, n: int) -> Prediction:
    """log of C n^kappa exp(2 sqrt(A zeta(2) n)) for sign '+', '-' or '1+' (excluded-one)."""
    if n < 1:
        raise ValueError("n must be positive")
    with mpmath.workdps(md.digits):
        if sign == "+":
            C, power = md.C_plus, md.exponent_power
        elif sign == "-":
            C, power = md.C_minus, md.exponent_power
        elif sign == "1+":
            if md.excl1 is None:
                raise ValueError("excluded-one data not built")
            C, power = md.excl1.C_1plus, md.excl1.exponent_power
        else:
            raise ValueError(f"unknown sign {sign!r}")
        logv = (mpmath.log(C) + mpmath.mpf(power.numerator) / power.denominator * mpmath.log(n)
                + 2 * mpmath.sqrt(md.growth * n))
        return Prediction(n, logv)


def D_plus_derivative_numeric(p: int, digits: int = 30) -> mpmath.mpf:
    """D'_+(0) by numerical differentiation of (zeta(s)(1-p^-s) + L(s,chi))/2 (test oracle)."""
    from .arith import character_table

    chi = list(character_table(p))
    with mpmath.workdps(digits):
        def D(s):
            return (mpmath.zeta(s) * (1 - mpmath.power(p, -s)) + mpmath.dirichlet(s, chi)) / 2
        return mpmath.diff(D, 0)


def exact_to_predicted(md: MeinardusData, sign: str, n: int, exact: int) -> mpmath.mpf:
    with mpmath.workdps(md.digits):
        return mpmath.exp(mpmath.log(mpmath.mpf(exact)) - predict(md, sign, n).log_main_term)
