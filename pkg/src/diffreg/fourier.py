"""Exact Fourier transforms of Fourier-safe radial power-log functions.

Convention: F[f](p) = int e^{ip.x} f(x) d^n x, inverse with (2 pi)^{-n},
so box maps to -p^2 and delta^n(x) maps to 1.

The workhorse is the radial master formula

    F_n[r^{-2a'}](p) = pi^{n/2} 2^{n-2a'} Gamma(n/2 - a')/Gamma(a') p^{2a'-n}

valid on the open window 0 < a' < n/2.  Log powers follow by differentiating
both sides in a', which brings in digamma/trigamma/tetragamma values; these
stay inside the symbol set {pi, gammaE, ln2, zeta3} exactly when 2a' is an
integer, which bounds the exact layer at log powers k <= 3.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List

from .algebra import (
    LocalTerm,
    MomentumFunction,
    MomentumTerm,
    PositionFunction,
    RadialTerm,
    add,
    sub,
)
from .coeffs import Coefficient, gamma_exact, psi0, psi1, psi2
from .errors import DiffRegError, FourierWindowError, SymbolSetError

MAX_EXACT_LOGPOW = 3


def in_window(rpow: Fraction, n: int) -> bool:
    """Open convergence window: r^{-2a'} with 0 < a' < n/2."""
    return -n < rpow < 0


def term_fourier_safe(t: RadialTerm, n: int) -> bool:
    return in_window(t.rpow, n) and t.logpow <= MAX_EXACT_LOGPOW


def fourier_safe(f: PositionFunction) -> bool:
    """True iff every radial term sits strictly inside the window with a
    supported log power (local terms always transform)."""
    return all(term_fourier_safe(t, f.dim) for t in f.radial)


def assert_fourier_safe(f: PositionFunction) -> None:
    n = f.dim
    for t in f.radial:
        if not in_window(t.rpow, n):
            raise FourierWindowError(
                f"term r^{t.rpow} log^{t.logpow} outside the open window "
                f"-{n} < rpow < 0 for dim {n}"
            )
        if t.logpow > MAX_EXACT_LOGPOW:
            raise SymbolSetError(
                f"log power {t.logpow} exceeds exact symbol set "
                f"(max {MAX_EXACT_LOGPOW}); use the numeric oracle"
            )


def master_coefficients(aprime: Fraction, n: int, depth: int) -> List[Coefficient]:
    """[C, C', ..., C^(depth)] where C(a') is the master-formula constant
    pi^{n/2} 2^{n-2a'} Gamma(n/2-a')/Gamma(a').  Needs 2a' integer."""
    if not (0 < aprime < Fraction(n, 2)):
        raise FourierWindowError(f"a'={aprime} outside (0, {n}/2)")
    if (2 * aprime).denominator != 1:
        raise SymbolSetError(
            f"exponent r^{-2 * aprime} needs polygamma values outside the "
            "exact symbol set; use the numeric oracle"
        )
    b = Fraction(n, 2) - aprime
    gnum, hnum = gamma_exact(b)
    gden, hden = gamma_exact(aprime)
    pi_exp = Fraction(n, 2) + Fraction(hnum, 2) - Fraction(hden, 2)
    if pi_exp.denominator != 1:
        raise DiffRegError("internal: non-integer pi exponent in master formula")
    two_exp = n - 2 * aprime  # integer by the check above
    rat = Fraction(2) ** int(two_exp) * gnum / gden
    C = Coefficient.monomial(rat, pi=int(pi_exp))
    out = [C]
    if depth >= 1:
        L1 = -2 * Coefficient.monomial(1, ln2=1) - psi0(b) - psi0(aprime)
        out.append(C * L1)
    if depth >= 2:
        L2 = psi1(b) - psi1(aprime)
        out.append(C * (L1 * L1 + L2))
    if depth >= 3:
        L3 = -psi2(b) - psi2(aprime)
        out.append(C * (L1 * L1 * L1 + 3 * L1 * L2 + L3))
    if depth > 3:
        raise SymbolSetError("log powers above 3 exceed the exact symbol set")
    return out


def fourier_base(g: PositionFunction) -> MomentumFunction:
    """Exact transform of a Fourier-safe function.  Radial terms map through
    the master formula and its a'-derivatives; local terms map to the
    polynomial part, coeff * box^j delta -> coeff * (-p^2)^j."""
    assert_fourier_safe(g)
    n = g.dim
    terms = []
    for t in g.radial:
        aprime = -t.rpow / 2
        k = t.logpow
        C = master_coefficients(aprime, n, k)
        sign = Fraction(-1) ** k
        for j in range(k + 1):
            coeff = t.coeff * sign * Fraction(math.comb(k, j)) * C[j]
            terms.append(MomentumTerm(coeff, 2 * aprime - n, k - j))
    poly = [(t.coeff, t.boxpow) for t in g.local]
    return MomentumFunction.build(n, terms, poly, g.flags)


def inverse_fourier_base(F: MomentumFunction) -> PositionFunction:
    """Inverse transform on the image class, by triangular back-substitution:
    the highest log power at each momentum exponent can only come from one
    position term, which is peeled off and its forward image subtracted."""
    n = F.dim
    for t in F.terms:
        if not (-n < t.ppow < 0):
            raise FourierWindowError(
                f"momentum term p^{t.ppow} outside the open window for dim {n}"
            )
        if t.logpow > MAX_EXACT_LOGPOW:
            raise SymbolSetError("log power exceeds exact symbol set")
    residual = MomentumFunction.build(n, F.terms)
    out = PositionFunction.build(n)
    guard = 0
    while residual.terms:
        guard += 1
        if guard > 10000:
            raise DiffRegError("internal: inverse transform failed to terminate")
        # highest log power within some momentum exponent group
        by_pow: dict = {}
        for t in residual.terms:
            cur = by_pow.get(t.ppow)
            if cur is None or t.logpow > cur.logpow:
                by_pow[t.ppow] = t
        peeled = []
        for t in by_pow.values():
            aprime = (t.ppow + n) / 2
            k = t.logpow
            C0 = master_coefficients(aprime, n, 0)[0]
            lead = Fraction(-1) ** k * C0
            coeff = t.coeff.divide(lead)
            peeled.append(RadialTerm(coeff, -2 * aprime, k))
        cand = PositionFunction.build(n, peeled)
        out = add(out, cand)
        residual = sub(residual, fourier_base(cand))
    local = [LocalTerm(c, j) for c, j in F.local_poly]
    return PositionFunction.build(
        n, out.radial, local, out.flags + F.flags
    )


def fourier_formal(rep) -> MomentumFunction:
    """Transform of a representation (L, g) by formal integration by parts:
    the operator symbol times the exact transform of the seed."""
    from .operators import multiply_by_symbol, operator_symbol

    base = fourier_base(rep.g)
    return multiply_by_symbol(base, operator_symbol(rep.L, rep.g.dim))


def cs_derivative(F: MomentumFunction) -> MomentumFunction:
    """d/d log(M^2) on the momentum side: log^k(p^2/M^2) -> -k log^(k-1);
    the M-independent polynomial part drops.  M d/dM is twice this."""
    terms = [
        MomentumTerm(t.coeff * Fraction(-t.logpow), t.ppow, t.logpow - 1)
        for t in F.terms
        if t.logpow >= 1
    ]
    return MomentumFunction.build(F.dim, terms, flags=F.flags)


def cs_derivative_position(f: PositionFunction) -> PositionFunction:
    """d/d log(M^2) on the position side: log^k(r^2 M^2) -> +k log^(k-1);
    delta-type terms drop."""
    terms = [
        RadialTerm(t.coeff * Fraction(t.logpow), t.rpow, t.logpow - 1)
        for t in f.radial
        if t.logpow >= 1
    ]
    return PositionFunction.build(f.dim, terms, flags=f.flags)
