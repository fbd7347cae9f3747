"""Pretty-printing of coefficients, functions, and operators in the same
surface syntax the parser accepts, so that parse(print(x)) == x on
normalized values."""

from __future__ import annotations

from fractions import Fraction
from typing import List

from .algebra import MomentumFunction, PositionFunction
from .coeffs import SYMBOL_NAMES, Coefficient
from .operators import DiffOperator

_LOG_R = "log(r^2*M^2)"
_LOG_P = "log(p^2/M^2)"


def _format_monomial(mono, q: Fraction) -> str:
    parts: List[str] = []
    if abs(q) != 1 or not any(mono):
        parts.append(str(abs(q)))
    for name, exp in zip(SYMBOL_NAMES, mono):
        if exp == 1:
            parts.append(name)
        elif exp > 1:
            parts.append(f"{name}^{exp}")
    return "*".join(parts)


def format_coefficient(c: Coefficient) -> str:
    if c.is_zero():
        return "0"
    out = ""
    for i, (mono, q) in enumerate(c.terms):
        body = _format_monomial(mono, q)
        if i == 0:
            out = ("-" if q < 0 else "") + body
        else:
            out += (" - " if q < 0 else " + ") + body
    return out


def _coeff_factor(c: Coefficient) -> tuple:
    """(sign_str, factor_str or None): a coefficient rendered as a leading
    factor of a product term.  Multi-monomial coefficients get parentheses."""
    if len(c.terms) > 1:
        return "+", f"({format_coefficient(c)})"
    mono, q = c.terms[0]
    sign = "-" if q < 0 else "+"
    body = _format_monomial(mono, q)
    return sign, body if body else None


def _join_terms(rendered: List[tuple]) -> str:
    if not rendered:
        return "0"
    out = ""
    for i, (sign, body) in enumerate(rendered):
        if i == 0:
            out = ("-" if sign == "-" else "") + body
        else:
            out += (" - " if sign == "-" else " + ") + body
    return out


def _power_suffix(var: str, pw: Fraction) -> List[str]:
    if pw == 0:
        return []
    if pw.denominator == 1:
        pw = int(pw)
    return [f"{var}^{pw}"]


def _product(sign: str, factors: List[str], divisors: List[str]) -> tuple:
    if not factors:
        factors = ["1"]
    if len(factors) > 1 and factors[0] == "1":
        factors = factors[1:]
    body = "*".join(factors)
    for d in divisors:
        body += f"/{d}"
    return sign, body


def format_position(f: PositionFunction) -> str:
    rendered = []
    for t in f.radial:
        sign, cfac = _coeff_factor(t.coeff)
        factors = [cfac] if cfac else []
        if t.logpow == 1:
            factors.append(_LOG_R)
        elif t.logpow > 1:
            factors.append(f"{_LOG_R}^{t.logpow}")
        divisors = []
        if t.rpow > 0:
            factors += _power_suffix("r", t.rpow)
        elif t.rpow < 0:
            if t.rpow.denominator == 1:
                divisors.append(f"r^{-int(t.rpow)}")
            else:
                factors += _power_suffix("r", t.rpow)
        rendered.append(_product(sign, factors, divisors))
    for t in f.local:
        sign, cfac = _coeff_factor(t.coeff)
        factors = [cfac] if cfac else []
        if t.boxpow == 1:
            factors.append("box")
        elif t.boxpow > 1:
            factors.append(f"box^{t.boxpow}")
        factors.append("delta")
        rendered.append(_product(sign, factors, []))
    return _join_terms(rendered)


def format_momentum(F: MomentumFunction) -> str:
    rendered = []
    for t in F.terms:
        sign, cfac = _coeff_factor(t.coeff)
        factors = [cfac] if cfac else []
        if t.logpow == 1:
            factors.append(_LOG_P)
        elif t.logpow > 1:
            factors.append(f"{_LOG_P}^{t.logpow}")
        divisors = []
        if t.ppow > 0:
            factors += _power_suffix("p", t.ppow)
        elif t.ppow < 0:
            if t.ppow.denominator == 1:
                divisors.append(f"p^{-int(t.ppow)}")
            else:
                factors += _power_suffix("p", t.ppow)
        rendered.append(_product(sign, factors, divisors))
    for c, j in F.local_poly:
        coeff = c if j % 2 == 0 else -1 * c
        sign, cfac = _coeff_factor(coeff)
        factors = [cfac] if cfac else []
        if j > 0:
            factors += _power_suffix("p", Fraction(2 * j))
        if not factors:
            factors = ["1"]
        rendered.append(_product(sign, factors, []))
    return _join_terms(rendered)


def format_operator(L: DiffOperator) -> str:
    rendered = []
    for k, c in sorted(L.coeffs, reverse=True):
        sign, cfac = _coeff_factor(c)
        factors = [cfac] if cfac else []
        if k == 1:
            factors.append("box")
        elif k > 1:
            factors.append(f"box^{k}")
        rendered.append(_product(sign, factors, []))
    return _join_terms(rendered)
