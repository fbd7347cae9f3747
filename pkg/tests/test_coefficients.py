import math
from fractions import Fraction

import pytest
from hypothesis import given
from scipy import special

from diffreg.coeffs import (
    GAMMA_E,
    LN2,
    ONE,
    PI,
    ZERO,
    ZETA3,
    Coefficient,
    gamma_exact,
    psi0,
    psi1,
    psi2,
    sphere_area,
)
from diffreg.errors import DiffRegError, SymbolSetError

from conftest import coefficients


class TestRingAxioms:
    @given(coefficients(), coefficients(), coefficients())
    def test_add_associative(self, a, b, c):
        assert (a + b) + c == a + (b + c)

    @given(coefficients(), coefficients())
    def test_add_commutative(self, a, b):
        assert a + b == b + a

    @given(coefficients(), coefficients())
    def test_mul_commutative(self, a, b):
        assert a * b == b * a

    @given(coefficients(), coefficients(), coefficients())
    def test_mul_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)

    @given(coefficients(), coefficients(), coefficients())
    def test_distributive(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(coefficients())
    def test_identities(self, a):
        assert a + ZERO == a
        assert a * ONE == a
        assert a - a == ZERO
        assert a * ZERO == ZERO

    @given(coefficients())
    def test_negation(self, a):
        assert a + (-a) == ZERO
        assert -(-a) == a


class TestEvalf:
    # evalf is a ring homomorphism up to roundoff
    @given(coefficients(), coefficients())
    def test_add_homomorphism(self, a, b):
        lhs = (a + b).evalf()
        rhs = a.evalf() + b.evalf()
        assert lhs == pytest.approx(rhs, rel=1e-13, abs=1e-13)

    @given(coefficients(max_terms=2), coefficients(max_terms=2))
    def test_mul_homomorphism(self, a, b):
        lhs = (a * b).evalf()
        rhs = a.evalf() * b.evalf()
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)

    def test_symbol_values(self):
        assert PI.evalf() == math.pi
        assert GAMMA_E.evalf() == pytest.approx(0.5772156649015329, rel=1e-15)
        assert LN2.evalf() == math.log(2.0)
        assert ZETA3.evalf() == pytest.approx(1.2020569031595943, rel=1e-15)

    def test_deterministic(self):
        c = PI * PI + 3 * GAMMA_E - Coefficient.rational(Fraction(7, 3)) * LN2
        assert c.evalf() == c.evalf()


class TestQueries:
    def test_rational_value(self):
        assert Coefficient.rational(Fraction(3, 7)).rational_value() == Fraction(3, 7)
        assert ZERO.rational_value() == 0
        with pytest.raises(DiffRegError):
            PI.rational_value()

    def test_divide(self):
        c = 6 * PI * PI
        assert c.divide(2 * PI) == 3 * PI
        with pytest.raises(DiffRegError):
            GAMMA_E.divide(PI)
        with pytest.raises(DiffRegError):
            (PI + ONE).divide(PI + ONE)  # not a single monomial

    def test_pow(self):
        assert PI ** 3 == PI * PI * PI
        assert (2 * ONE) ** -2 == Coefficient.rational(Fraction(1, 4))


class TestSpecialValues:
    def test_gamma_integers(self):
        assert gamma_exact(Fraction(1)) == (Fraction(1), 0)
        assert gamma_exact(Fraction(5)) == (Fraction(24), 0)

    def test_gamma_half_integers(self):
        # Gamma(1/2) = sqrt(pi), Gamma(3/2) = sqrt(pi)/2
        assert gamma_exact(Fraction(1, 2)) == (Fraction(1), 1)
        assert gamma_exact(Fraction(3, 2)) == (Fraction(1, 2), 1)
        assert gamma_exact(Fraction(7, 2)) == (Fraction(15, 8), 1)

    @pytest.mark.parametrize("x", [Fraction(k, 2) for k in range(1, 12)])
    def test_polygamma_against_scipy(self, x):
        xf = float(x)
        assert psi0(x).evalf() == pytest.approx(special.polygamma(0, xf), rel=1e-12)
        assert psi1(x).evalf() == pytest.approx(special.polygamma(1, xf), rel=1e-12)
        assert psi2(x).evalf() == pytest.approx(special.polygamma(2, xf), rel=1e-12)

    @pytest.mark.parametrize("x", [Fraction(1, 3), Fraction(-1), Fraction(0)])
    def test_polygamma_rejects_off_lattice(self, x):
        with pytest.raises(SymbolSetError):
            psi0(x)

    def test_sphere_area_exact(self):
        assert sphere_area(2) == 2 * PI
        assert sphere_area(3) == 4 * PI
        assert sphere_area(4) == 2 * PI * PI

    @pytest.mark.parametrize("n", range(1, 9))
    def test_sphere_area_numeric(self, n):
        expected = 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)
        assert sphere_area(n).evalf() == pytest.approx(expected, rel=1e-14)
