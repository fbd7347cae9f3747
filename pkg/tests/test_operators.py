import math
import random
from fractions import Fraction

import pytest
import sympy as sp

from diffreg.algebra import (
    PositionFunction,
    RadialTerm,
    delta_term,
    position_term,
    add,
)
from diffreg.coeffs import Coefficient, ONE, PI, sphere_area
from diffreg.errors import DiffRegError
from diffreg.operators import (
    RESONANCE_FLAG,
    DiffOperator,
    apply_laplacian,
    apply_operator,
    laplacian_radial,
    multiply_by_symbol,
    operator_symbol,
)
from diffreg.numeric import gauss_flux_numeric


def sympy_box(a: Fraction, k: int, n: int):
    """Brute-force radial Laplacian f'' + (n-1)/r f' of r^a log(r^2 M^2)^k."""
    r, M = sp.symbols("r M", positive=True)
    f = r ** sp.Rational(a.numerator, a.denominator) * sp.log(r ** 2 * M ** 2) ** k
    return sp.expand(sp.diff(f, r, 2) + (n - 1) / r * sp.diff(f, r)), (r, M)


def terms_to_sympy(terms, r, M):
    total = sp.Integer(0)
    for t in terms:
        q = t.coeff.rational_value()
        total += (
            sp.Rational(q.numerator, q.denominator)
            * r ** sp.Rational(t.rpow.numerator, t.rpow.denominator)
            * sp.log(r ** 2 * M ** 2) ** t.logpow
        )
    return total


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_recurrence_matches_sympy(n):
    rng = random.Random(20240 + n)
    for _ in range(12):
        a = Fraction(rng.randint(-6, 6))
        k = rng.randint(0, 3)
        out = laplacian_radial(n, [RadialTerm(ONE, a, k)])
        expr, (r, M) = sympy_box(a, k, n)
        assert sp.simplify(expr - terms_to_sympy(out, r, M)) == 0


def test_recurrence_half_integer_exponent():
    out = laplacian_radial(3, [RadialTerm(ONE, Fraction(1, 2), 1)])
    expr, (r, M) = sympy_box(Fraction(1, 2), 1, 3)
    assert sp.simplify(expr - terms_to_sympy(out, r, M)) == 0


class TestOperatorAlgebra:
    def test_build_drops_zero(self):
        assert DiffOperator.build({2: Coefficient()}).coeffs == ()

    def test_add_and_mul(self):
        L = DiffOperator.box(1) + DiffOperator.box(1, 2)
        assert L == DiffOperator.box(1, 3)
        assert DiffOperator.box(1) * DiffOperator.box(2) == DiffOperator.box(3)

    def test_degree(self):
        L = DiffOperator.build({0: ONE, 3: PI})
        assert L.degree == 3
        assert DiffOperator.build({}).degree == 0

    def test_pure_power(self):
        assert DiffOperator.box(2).is_pure_power()
        assert not DiffOperator.box(2, 5).is_pure_power()

    def test_rejects_negative_power(self):
        with pytest.raises(ValueError):
            DiffOperator.build({-1: ONE})


class TestApply:
    def test_linearity(self):
        f = position_term(4, 1, Fraction(-1), 1)
        g = position_term(4, 2, Fraction(3), 0)
        L = DiffOperator.build({1: ONE, 2: Coefficient.rational(Fraction(1, 2))})
        lhs = apply_operator(L, add(f, g))
        rhs = add(apply_operator(L, f), apply_operator(L, g))
        assert lhs == rhs

    def test_composition(self):
        f = position_term(4, 1, Fraction(5), 2)
        twice = apply_laplacian(apply_laplacian(f))
        assert apply_operator(DiffOperator.box(2), f) == twice

    def test_r_squared_in_dim4(self):
        # box r^2 = 2n = 8
        out = apply_operator(DiffOperator.box(1), position_term(4, 1, Fraction(2)))
        assert out.radial == (RadialTerm(Coefficient.rational(8), Fraction(0), 0),)

    def test_delta_emission(self):
        # box r^(2-n) = -(n-2) Omega_{n-1} delta
        for n in (3, 4, 6):
            f = position_term(n, 1, Fraction(2 - n))
            out = apply_laplacian(f)
            assert out.radial == ()
            assert len(out.local) == 1
            t = out.local[0]
            assert t.boxpow == 0
            assert t.coeff == Fraction(-(n - 2)) * sphere_area(n)

    def test_harmonic_in_window_no_delta(self):
        # r^0 is annihilated with no local content
        out = apply_laplacian(position_term(4, 1, Fraction(0)))
        assert out.is_zero()

    def test_resonance_flag_for_log(self):
        f = position_term(4, 1, Fraction(-2), 1)
        out = apply_laplacian(f)
        assert RESONANCE_FLAG in out.flags
        # the away-from-origin radial part is still produced
        assert out.radial == (RadialTerm(Coefficient.rational(-4), Fraction(-4), 0),)

    def test_local_terms_shift(self):
        out = apply_laplacian(delta_term(4, 1, boxpow=1))
        assert out.local[0].boxpow == 2

    def test_dim_one_rejected(self):
        with pytest.raises(DiffRegError):
            apply_laplacian(position_term(1, 1, Fraction(-1)))


class TestSymbol:
    def test_box_symbol(self):
        sym = operator_symbol(DiffOperator.box(2), 4)
        assert sym.terms == ()
        assert sym.local_poly == ((ONE, 2),)

    def test_multiply_by_symbol(self):
        from diffreg.algebra import momentum_term, eval_momentum

        F = momentum_term(4, 1, Fraction(-2), 1)
        sym = operator_symbol(DiffOperator.box(1), 4)
        G = multiply_by_symbol(F, sym)
        p, M = 1.7, 1.1
        assert eval_momentum(G, p, M) == pytest.approx(
            -(p * p) * eval_momentum(F, p, M), rel=1e-15
        )


class TestGaussFlux:
    @pytest.mark.parametrize("radius", [0.5, 1.0, 2.0, 7.0])
    def test_r_minus_2_flux_radius_independent(self, radius):
        f = position_term(4, 1, Fraction(-2))
        expected = -4.0 * math.pi ** 2
        assert gauss_flux_numeric(f, radius, 4) == pytest.approx(expected, rel=1e-12)

    def test_matches_finite_difference(self):
        from diffreg.algebra import eval_position

        f = PositionFunction.build(
            4,
            [
                RadialTerm(Coefficient.rational(Fraction(1, 2)), Fraction(-2), 1),
                RadialTerm(PI, Fraction(1), 0),
            ],
        )
        radius, M, h = 1.3, 0.8, 1e-6
        fd = (eval_position(f, radius + h, M) - eval_position(f, radius - h, M)) / (2 * h)
        expected = sphere_area(4).evalf() * radius ** 3 * fd
        assert gauss_flux_numeric(f, radius, 4, M) == pytest.approx(expected, rel=1e-8)
