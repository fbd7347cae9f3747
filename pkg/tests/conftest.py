"""Shared hypothesis strategies for the exact layers."""

from fractions import Fraction

from hypothesis import strategies as st

from diffreg.coeffs import Coefficient

small_rationals = st.builds(
    Fraction,
    st.integers(min_value=-50, max_value=50),
    st.integers(min_value=1, max_value=12),
)

monomials = st.tuples(
    st.integers(min_value=0, max_value=3),
    st.integers(min_value=0, max_value=2),
    st.integers(min_value=0, max_value=2),
    st.integers(min_value=0, max_value=1),
)


@st.composite
def coefficients(draw, max_terms=3):
    pairs = draw(
        st.lists(st.tuples(monomials, small_rationals), max_size=max_terms)
    )
    acc = {}
    for m, q in pairs:
        acc[m] = acc.get(m, Fraction(0)) + q
    return Coefficient.from_dict(acc)
