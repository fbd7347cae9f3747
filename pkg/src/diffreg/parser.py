"""Recursive-descent parser for the term language.

Grammar (whitespace-insensitive):

    expr     := ['-'] term (('+'|'-') term)*
    term     := factor ('*' factor | '/' factor)*
    factor   := number | 'pi' | 'gammaE' | 'ln2' | 'zeta3'
              | 'r' ['^' exponent] | 'p' ['^' exponent]
              | 'log(r^2*M^2)' ['^' int] | 'log(p^2/M^2)' ['^' int]
              | 'delta' | 'box' ['^' int] | '(' expr ')'
    exponent := ['-'] int ['/' int]
    number   := int ['/' int]

The log tokens are atomic.  A parsed expression is a tagged value (scalar /
position / momentum / operator); the requested context then converts or
rejects it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .algebra import (
    LocalTerm,
    MomentumFunction,
    MomentumTerm,
    PositionFunction,
    RadialTerm,
    add,
    mul,
    scale,
)
from .coeffs import GAMMA_E, LN2, PI, ZETA3, Coefficient
from .errors import ParseError
from .operators import DiffOperator, apply_operator

_TOKEN_RE = re.compile(
    r"""
    (?P<logr>log\(\s*r\s*\^\s*2\s*\*\s*M\s*\^\s*2\s*\))
  | (?P<logp>log\(\s*p\s*\^\s*2\s*/\s*M\s*\^\s*2\s*\))
  | (?P<number>\d+)
  | (?P<name>pi|gammaE|ln2|zeta3|delta|box|r|p)
  | (?P<op>[-+*/^()])
  | (?P<ws>\s+)
  | (?P<bad>.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    line, col = 1, 1
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        val = m.group()
        if kind == "bad":
            raise ParseError(f"unexpected character {val!r}", line, col)
        if kind != "ws":
            tokens.append(_Token(kind, val, line, col))
        for ch in val:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
    tokens.append(_Token("eof", "", line, col))
    return tokens


# A parsed value: exactly one of the payloads is set.
@dataclass(frozen=True)
class _Value:
    scalar: Optional[Coefficient] = None
    position: Optional[PositionFunction] = None
    momentum: Optional[MomentumFunction] = None
    operator: Optional[DiffOperator] = None

    @property
    def kind(self) -> str:
        for name in ("scalar", "position", "momentum", "operator"):
            if getattr(self, name) is not None:
                return name
        raise AssertionError("empty value")


class _Parser:
    def __init__(self, text: str, dim: int):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.dim = dim

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, text: Optional[str] = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise ParseError(f"expected {want!r}, found {tok.text!r}", tok.line, tok.col)
        return self.advance()

    def fail(self, msg: str):
        tok = self.peek()
        raise ParseError(msg, tok.line, tok.col)

    # -- grammar -------------------------------------------------------

    def parse(self) -> _Value:
        val = self.expr()
        if self.peek().kind != "eof":
            self.fail(f"unexpected trailing input {self.peek().text!r}")
        return val

    def expr(self) -> _Value:
        negate = False
        if self._is_op("-"):
            self.advance()
            negate = True
        val = self.term()
        if negate:
            val = self._scale(Coefficient.rational(-1), val)
        while self._is_op("+") or self._is_op("-"):
            op = self.advance().text
            rhs = self.term()
            if op == "-":
                rhs = self._scale(Coefficient.rational(-1), rhs)
            val = self._add(val, rhs)
        return val

    def term(self) -> _Value:
        val = self.factor()
        while self._is_op("*") or self._is_op("/"):
            op = self.advance().text
            rhs = self.factor()
            if op == "*":
                val = self._mul(val, rhs)
            else:
                val = self._mul(val, self._invert(rhs))
        return val

    def factor(self) -> _Value:
        tok = self.peek()
        if self._is_op("-"):
            self.advance()
            return self._scale(Coefficient.rational(-1), self.factor())
        if self._is_op("("):
            self.advance()
            val = self.expr()
            self.expect("op", ")")
            return val
        if tok.kind == "number":
            return _Value(scalar=Coefficient.rational(self._rational()))
        if tok.kind == "logr":
            self.advance()
            k = self._opt_int_power()
            return _Value(
                position=PositionFunction.build(
                    self.dim, [RadialTerm(Coefficient.rational(1), Fraction(0), k)]
                )
            )
        if tok.kind == "logp":
            self.advance()
            k = self._opt_int_power()
            return _Value(
                momentum=MomentumFunction.build(
                    self.dim, [MomentumTerm(Coefficient.rational(1), Fraction(0), k)]
                )
            )
        if tok.kind == "name":
            self.advance()
            name = tok.text
            symbols = {"pi": PI, "gammaE": GAMMA_E, "ln2": LN2, "zeta3": ZETA3}
            if name in symbols:
                k = self._opt_int_power()
                return _Value(scalar=symbols[name] ** k)
            if name == "delta":
                return _Value(
                    position=PositionFunction.build(
                        self.dim, local=[LocalTerm(Coefficient.rational(1), 0)]
                    )
                )
            if name == "box":
                k = self._opt_int_power()
                return _Value(operator=DiffOperator.box(k))
            if name == "r":
                e = self._opt_exponent()
                return _Value(
                    position=PositionFunction.build(
                        self.dim, [RadialTerm(Coefficient.rational(1), e, 0)]
                    )
                )
            if name == "p":
                e = self._opt_exponent()
                return _Value(
                    momentum=MomentumFunction.build(
                        self.dim, [MomentumTerm(Coefficient.rational(1), e, 0)]
                    )
                )
        self.fail(f"unexpected token {tok.text!r}")

    def _is_op(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text == text

    def _rational(self) -> Fraction:
        num = int(self.expect("number").text)
        if self._is_op("/") and self.tokens[self.pos + 1].kind == "number":
            # lookahead past the slash: only a plain integer denominator
            # belongs to the number; anything else is term-level division
            nxt = self.tokens[self.pos + 2]
            if not (nxt.kind == "op" and nxt.text == "^"):
                self.advance()
                den = int(self.expect("number").text)
                return Fraction(num, den)
        return Fraction(num)

    def _opt_int_power(self) -> int:
        if self._is_op("^"):
            self.advance()
            neg = False
            if self._is_op("-"):
                self.advance()
                neg = True
            k = int(self.expect("number").text)
            if neg:
                self.fail("this power must be a non-negative integer")
            return k
        return 1

    def _opt_exponent(self) -> Fraction:
        if not self._is_op("^"):
            return Fraction(1)
        self.advance()
        neg = False
        if self._is_op("-"):
            self.advance()
            neg = True
        num = int(self.expect("number").text)
        e = Fraction(num)
        if self._is_op("/"):
            # r^3/2 binds the slash to the exponent
            if self.tokens[self.pos + 1].kind == "number":
                nxt = self.tokens[self.pos + 2]
                if not (nxt.kind == "op" and nxt.text == "^"):
                    self.advance()
                    den = int(self.expect("number").text)
                    e = Fraction(num, den)
        return -e if neg else e

    # -- semantics -----------------------------------------------------

    def _scale(self, c: Coefficient, v: _Value) -> _Value:
        if v.scalar is not None:
            return _Value(scalar=c * v.scalar)
        if v.position is not None:
            return _Value(position=scale(c, v.position))
        if v.momentum is not None:
            return _Value(momentum=scale(c, v.momentum))
        return _Value(operator=v.operator.scaled(c))

    def _promote_pair(self, a: _Value, b: _Value) -> Tuple[_Value, _Value]:
        kinds = {a.kind, b.kind}
        if kinds == {"position", "momentum"}:
            self.fail("cannot mix r-space and p-space in one expression")
        for target in ("position", "momentum", "operator"):
            if target in kinds:
                return self._to(target, a), self._to(target, b)
        return a, b

    def _to(self, target: str, v: _Value) -> _Value:
        if v.kind == target:
            return v
        if v.scalar is None:
            self.fail(f"cannot combine {v.kind} value here")
        c = v.scalar
        if target == "position":
            return _Value(
                position=PositionFunction.build(self.dim, [RadialTerm(c, Fraction(0), 0)])
            )
        if target == "momentum":
            return _Value(
                momentum=MomentumFunction.build(self.dim, [MomentumTerm(c, Fraction(0), 0)])
            )
        return _Value(operator=DiffOperator.identity().scaled(c))

    def _add(self, a: _Value, b: _Value) -> _Value:
        a, b = self._promote_pair(a, b)
        kind = a.kind
        if kind == "scalar":
            return _Value(scalar=a.scalar + b.scalar)
        if kind == "position":
            return _Value(position=add(a.position, b.position))
        if kind == "momentum":
            return _Value(momentum=add(a.momentum, b.momentum))
        return _Value(operator=a.operator + b.operator)

    def _mul(self, a: _Value, b: _Value) -> _Value:
        if "scalar" in (a.kind, b.kind):
            if a.kind == "scalar":
                return self._scale(a.scalar, b)
            return self._scale(b.scalar, a)
        if a.kind == b.kind == "position":
            try:
                return _Value(position=mul(a.position, b.position))
            except Exception as exc:
                self.fail(str(exc))
        if a.kind == b.kind == "momentum":
            return _Value(momentum=self._mul_momentum(a.momentum, b.momentum))
        if a.kind == b.kind == "operator":
            return _Value(operator=a.operator * b.operator)
        if a.kind == "operator" and b.kind == "position":
            return _Value(position=apply_operator(a.operator, b.position))
        self.fail(f"cannot multiply {a.kind} by {b.kind}")

    def _mul_momentum(self, A: MomentumFunction, B: MomentumFunction):
        terms = []
        seqA = list(A.terms) + [
            (MomentumTerm(c if j % 2 == 0 else -1 * c, Fraction(2 * j), 0))
            for c, j in A.local_poly
        ]
        seqB = list(B.terms) + [
            (MomentumTerm(c if j % 2 == 0 else -1 * c, Fraction(2 * j), 0))
            for c, j in B.local_poly
        ]
        for s in seqA:
            for t in seqB:
                terms.append(
                    MomentumTerm(s.coeff * t.coeff, s.ppow + t.ppow, s.logpow + t.logpow)
                )
        return MomentumFunction.build(A.dim, terms)

    def _invert(self, v: _Value) -> _Value:
        if v.scalar is not None:
            if len(v.scalar.terms) != 1 or not v.scalar.is_rational():
                self.fail("can only divide by a plain rational")
            return _Value(scalar=Coefficient.rational(1 / v.scalar.rational_value()))
        if v.position is not None:
            f = v.position
            if f.local or len(f.radial) != 1:
                self.fail("can only divide by a single power term")
            t = f.radial[0]
            if t.logpow != 0 or not t.coeff.is_rational():
                self.fail("can only divide by a rational power of r")
            return _Value(
                position=PositionFunction.build(
                    self.dim,
                    [RadialTerm(Coefficient.rational(1 / t.coeff.rational_value()), -t.rpow, 0)],
                )
            )
        if v.momentum is not None:
            F = v.momentum
            seq = list(F.terms) + [
                MomentumTerm(c if j % 2 == 0 else -1 * c, Fraction(2 * j), 0)
                for c, j in F.local_poly
            ]
            if len(seq) != 1:
                self.fail("can only divide by a single power term")
            t = seq[0]
            if t.logpow != 0 or not t.coeff.is_rational():
                self.fail("can only divide by a rational power of p")
            return _Value(
                momentum=MomentumFunction.build(
                    self.dim,
                    [MomentumTerm(Coefficient.rational(1 / t.coeff.rational_value()), -t.ppow, 0)],
                )
            )
        self.fail("cannot divide by an operator")


def parse_value(text: str, dim: int) -> _Value:
    return _Parser(text, dim).parse()


def parse_position(text: str, dim: int) -> PositionFunction:
    v = parse_value(text, dim)
    if v.position is not None:
        return v.position
    if v.scalar is not None:
        return PositionFunction.build(dim, [RadialTerm(v.scalar, Fraction(0), 0)])
    raise ParseError(f"expected a position-space expression, got {v.kind}")


def parse_momentum(text: str, dim: int) -> MomentumFunction:
    v = parse_value(text, dim)
    if v.momentum is not None:
        return v.momentum
    if v.scalar is not None:
        return MomentumFunction.build(dim, [MomentumTerm(v.scalar, Fraction(0), 0)])
    raise ParseError(f"expected a momentum-space expression, got {v.kind}")


def parse_operator(text: str, dim: int = 4) -> DiffOperator:
    v = parse_value(text, dim)
    if v.operator is not None:
        return v.operator
    if v.scalar is not None:
        return DiffOperator.identity().scaled(v.scalar)
    raise ParseError(f"expected an operator expression, got {v.kind}")
