"""The evaluation character, the ideal it generates, and a falsifiable
audit of the commuting-diagram claim.

The character evaluates the exact transform of a Fourier-safe function at a
fixed momentum p0.  The audit computes the residual

    | F[a b](p0) - eps(b) F[a](p0) |

with exact transforms where available and the regulated or numeric route
otherwise, and reports it without asserting it vanishes: whether the ideal
lies in the kernel of the transform depends on the (unstated) algebra
structure on the momentum side, so the residual is data, not a failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from .algebra import (
    PositionFunction,
    eval_momentum,
    mul,
    scale,
)
from .errors import DiffRegError, EvaluationError
from .fourier import fourier_base, fourier_formal, fourier_safe
from .numeric import DEFAULT_CONFIG, QuadratureConfig, hankel_numeric
from .regulate import find_representation


@dataclass(frozen=True)
class Character:
    """eps(b) = b-hat(p0) on the Fourier-safe subalgebra."""

    p0: float
    dim: int
    Mval: float = 1.0

    def __post_init__(self):
        if self.p0 <= 0:
            raise ValueError("character momentum must be positive")


@dataclass(frozen=True)
class IdealElement:
    """Formal pair representing a (b - eps(b)) with b Fourier-safe."""

    a: PositionFunction
    b: PositionFunction

    def __post_init__(self):
        if self.a.dim != self.b.dim:
            raise DiffRegError("ideal factors must share a dimension")
        if not fourier_safe(self.b):
            raise DiffRegError("ideal factor b must be Fourier-safe")


@dataclass(frozen=True)
class AuditReport:
    residual: float
    value_ab: float
    value_a: float
    character_value: float
    route_ab: str
    elem: IdealElement
    character: Character


def character_eval(b: PositionFunction, ch: Character) -> float:
    """Numeric value of the exact transform of b at the character momentum."""
    if b.dim != ch.dim:
        raise DiffRegError("dimension mismatch with character")
    if not fourier_safe(b):
        raise EvaluationError("character is defined on Fourier-safe functions only")
    F = fourier_base(b)
    if F.is_zero():
        return 0.0
    return eval_momentum(F, ch.p0, ch.Mval)


def reduce_mod_ideal(elem: IdealElement, ch: Character) -> PositionFunction:
    """Canonical representative of a*b modulo the ideal: replace the
    Fourier-safe factor by its character value, giving eps(b) * a."""
    mul(elem.a, elem.b)  # raises when the product itself is undefined
    eps_b = character_eval(elem.b, ch)
    return _scale_float(elem.a, eps_b)


def _scale_float(f: PositionFunction, x: float) -> PositionFunction:
    # float scalars are outside the exact ring; fall back to an exact
    # rational with full double precision
    from fractions import Fraction

    return scale(Fraction(x).limit_denominator(10 ** 17), f)


def transform_value(
    f: PositionFunction,
    p0: float,
    Mval: float = 1.0,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
):
    """Evaluate a transform of f at p0 by the best available route:
    exact where Fourier-safe, regulated formal transform for integer
    power-log targets at or below the window, numeric quadrature otherwise.
    Returns (value, route)."""
    n = f.dim
    safe, divergent, rest = [], [], []
    for t in f.radial:
        if -n < t.rpow < 0 and t.logpow <= 3:
            safe.append(t)
        elif t.rpow <= -n and t.rpow.denominator == 1:
            divergent.append(t)
        else:
            rest.append(t)
    total = 0.0
    routes = []
    safe_fn = PositionFunction.build(n, safe, f.local)
    if not safe_fn.is_zero():
        total += eval_momentum(fourier_base(safe_fn), p0, Mval)
        routes.append("exact")
    if divergent:
        rep = find_representation(PositionFunction.build(n, divergent))
        total += eval_momentum(fourier_formal(rep), p0, Mval)
        routes.append("regulated")
    if rest:
        rest_fn = PositionFunction.build(n, rest)
        if any(t.rpow <= -n for t in rest):
            raise DiffRegError(
                "no exact, regulated, or numeric transform available for "
                f"terms {rest}"
            )
        val, _ = hankel_numeric(rest_fn, p0, n, Mval, cfg)
        total += val
        routes.append("numeric")
    return total, "+".join(routes) if routes else "zero"


def diagram_audit(
    elem: IdealElement,
    ch: Character,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> AuditReport:
    """Residual of the kernel claim for a single ideal element."""
    ab = mul(elem.a, elem.b)
    eps_b = character_eval(elem.b, ch)
    if ab.is_zero():
        value_ab, route = 0.0, "zero"
    else:
        value_ab, route = transform_value(ab, ch.p0, ch.Mval, cfg)
    if elem.a.is_zero():
        value_a = 0.0
    else:
        value_a, _ = transform_value(elem.a, ch.p0, ch.Mval, cfg)
    residual = abs(value_ab - eps_b * value_a)
    return AuditReport(
        residual=residual,
        value_ab=value_ab,
        value_a=value_a,
        character_value=eps_b,
        route_ab=route,
        elem=elem,
        character=ch,
    )
