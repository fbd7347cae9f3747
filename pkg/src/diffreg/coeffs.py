"""Exact coefficients: rational-linear combinations of monomials in the
commuting constants pi, gammaE, ln2, zeta3.

Everything the exact layer produces (sphere areas, transform constants,
polygamma values at integer and half-integer arguments) lives in this ring,
so equality of symbolic results is decidable by normal-form comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Tuple

from .errors import DiffRegError, SymbolSetError

# Exponent order: (pi, gammaE, ln2, zeta3).
Monomial = Tuple[int, int, int, int]

GAMMA_E_VALUE = 0.5772156649015328606
ZETA3_VALUE = 1.2020569031595942854
_SYMBOL_VALUES = (math.pi, GAMMA_E_VALUE, math.log(2.0), ZETA3_VALUE)
SYMBOL_NAMES = ("pi", "gammaE", "ln2", "zeta3")

_ONE_MONO: Monomial = (0, 0, 0, 0)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class Coefficient:
    """Normalized sum of monomials: tuple of (exponents, rational) pairs,
    sorted by exponent tuple, with no zero rationals."""

    terms: Tuple[Tuple[Monomial, Fraction], ...] = ()

    # -- constructors -------------------------------------------------

    @classmethod
    def from_dict(cls, d: Mapping[Monomial, Fraction]) -> "Coefficient":
        items = tuple(sorted((m, q) for m, q in d.items() if q != 0))
        return cls(items)

    @classmethod
    def rational(cls, q) -> "Coefficient":
        q = _as_fraction(q)
        if q == 0:
            return cls()
        return cls(((_ONE_MONO, q),))

    @classmethod
    def monomial(cls, q, pi=0, gammaE=0, ln2=0, zeta3=0) -> "Coefficient":
        q = _as_fraction(q)
        if q == 0:
            return cls()
        if min(pi, gammaE, ln2, zeta3) < 0:
            raise DiffRegError("monomial exponents must be non-negative")
        return cls((((pi, gammaE, ln2, zeta3), q),))

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "Coefficient") -> "Coefficient":
        acc = dict(self.terms)
        for m, q in other.terms:
            acc[m] = acc.get(m, Fraction(0)) + q
        return Coefficient.from_dict(acc)

    def __sub__(self, other: "Coefficient") -> "Coefficient":
        return self + (-other)

    def __neg__(self) -> "Coefficient":
        return Coefficient(tuple((m, -q) for m, q in self.terms))

    def __mul__(self, other) -> "Coefficient":
        if isinstance(other, (int, Fraction)):
            other = Coefficient.rational(other)
        acc: dict = {}
        for m1, q1 in self.terms:
            for m2, q2 in other.terms:
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3])
                acc[m] = acc.get(m, Fraction(0)) + q1 * q2
        return Coefficient.from_dict(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Coefficient":
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> "Coefficient":
        """Inverse of a single-monomial coefficient (with non-negative
        resulting exponents only when the monomial is rational times pi^0;
        general monomials invert only against matching factors, so this is
        restricted to rational coefficients and used via :meth:`divide`)."""
        if not self.is_rational():
            raise DiffRegError("only rational coefficients are invertible")
        return Coefficient.rational(1 / self.rational_value())

    def divide(self, other: "Coefficient") -> "Coefficient":
        """Divide by a single-monomial coefficient whose monomial divides
        every monomial of self."""
        if len(other.terms) != 1:
            raise DiffRegError("division only by a single monomial")
        (mono, q) = other.terms[0]
        acc: dict = {}
        for m, c in self.terms:
            newm = tuple(a - b for a, b in zip(m, mono))
            if min(newm) < 0:
                raise DiffRegError(f"monomial {mono} does not divide {m}")
            acc[newm] = acc.get(newm, Fraction(0)) + c / q
        return Coefficient.from_dict(acc)

    # -- queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(m == _ONE_MONO for m, _ in self.terms)

    def rational_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_rational():
            raise DiffRegError("coefficient is not rational")
        return self.terms[0][1]

    def evalf(self) -> float:
        """Floating value; terms summed in normalized order."""
        total = 0.0
        for m, q in self.terms:
            v = float(q)
            for exp, sym in zip(m, _SYMBOL_VALUES):
                if exp:
                    v *= sym ** exp
            total += v
        return total

    def __str__(self) -> str:
        from .printer import format_coefficient

        return format_coefficient(self)


ZERO = Coefficient()
ONE = Coefficient.rational(1)
PI = Coefficient.monomial(1, pi=1)
GAMMA_E = Coefficient.monomial(1, gammaE=1)
LN2 = Coefficient.monomial(1, ln2=1)
ZETA3 = Coefficient.monomial(1, zeta3=1)


# -- exact special values ---------------------------------------------


def gamma_exact(x: Fraction) -> Tuple[Fraction, int]:
    """Gamma(x) for positive integer or half-integer x, as
    (rational, h) meaning rational * pi**(h/2) with h in {0, 1}."""
    x = _as_fraction(x)
    if x <= 0 or (2 * x).denominator != 1:
        raise DiffRegError(f"gamma_exact needs positive (half-)integer, got {x}")
    if x.denominator == 1:
        return Fraction(math.factorial(int(x) - 1)), 0
    m = int(x - Fraction(1, 2))
    # Gamma(m + 1/2) = (2m)! / (4^m m!) * sqrt(pi)
    val = Fraction(math.factorial(2 * m), 4 ** m * math.factorial(m))
    return val, 1


def _check_half_arg(x: Fraction) -> Fraction:
    x = _as_fraction(x)
    if x <= 0 or (2 * x).denominator != 1:
        raise SymbolSetError(
            f"polygamma argument {x} is not a positive integer or half-integer; "
            "value leaves the exact symbol set"
        )
    return x


def psi0(x: Fraction) -> Coefficient:
    """digamma at positive integer or half-integer argument."""
    x = _check_half_arg(x)
    if x.denominator == 1:
        h = sum((Fraction(1, i) for i in range(1, int(x))), Fraction(0))
        return Coefficient.rational(h) - GAMMA_E
    m = int(x - Fraction(1, 2))
    h = sum((Fraction(2, 2 * i - 1) for i in range(1, m + 1)), Fraction(0))
    return Coefficient.rational(h) - GAMMA_E - 2 * LN2


def psi1(x: Fraction) -> Coefficient:
    """trigamma at positive integer or half-integer argument."""
    x = _check_half_arg(x)
    if x.denominator == 1:
        s = sum((Fraction(1, i * i) for i in range(1, int(x))), Fraction(0))
        return Coefficient.monomial(Fraction(1, 6), pi=2) - Coefficient.rational(s)
    m = int(x - Fraction(1, 2))
    s = sum((Fraction(4, (2 * i - 1) ** 2) for i in range(1, m + 1)), Fraction(0))
    return Coefficient.monomial(Fraction(1, 2), pi=2) - Coefficient.rational(s)


def psi2(x: Fraction) -> Coefficient:
    """tetragamma (second derivative of digamma) at (half-)integer argument."""
    x = _check_half_arg(x)
    if x.denominator == 1:
        s = sum((Fraction(2, i ** 3) for i in range(1, int(x))), Fraction(0))
        return Coefficient.rational(s) - 2 * ZETA3
    m = int(x - Fraction(1, 2))
    s = sum((Fraction(16, (2 * i - 1) ** 3) for i in range(1, m + 1)), Fraction(0))
    return Coefficient.rational(s) - 14 * ZETA3


def sphere_area(n: int) -> Coefficient:
    """Surface area of the unit (n-1)-sphere, 2 pi^(n/2) / Gamma(n/2)."""
    if n < 1:
        raise DiffRegError("dimension must be positive")
    gval, ghalf = gamma_exact(Fraction(n, 2))
    # 2 * pi^(n/2) / (gval * pi^(ghalf/2))
    pi_exp = Fraction(n, 2) - Fraction(ghalf, 2)
    if pi_exp.denominator != 1:
        raise DiffRegError("internal: non-integer pi exponent in sphere area")
    return Coefficient.monomial(Fraction(2) / gval, pi=int(pi_exp))
