from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from asmshape.polys import MultiPoly, RationalPoly, TruncatedSeries, binomial_series

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=9)
polys = st.lists(fracs, max_size=5).map(RationalPoly)


@given(polys, polys, polys)
@settings(max_examples=80, deadline=None)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == RationalPoly()


@given(polys, polys, fracs)
@settings(max_examples=80, deadline=None)
def test_evaluation_is_homomorphism(a, b, z):
    assert (a * b)(z) == a(z) * b(z)
    assert (a + b)(z) == a(z) + b(z)
    assert a.shift(Fraction(2))(z) == a(z + 2)


@given(polys, polys.filter(lambda p: not p.is_zero()))
@settings(max_examples=80, deadline=None)
def test_divmod(a, b):
    quo, rem = a.divmod(b)
    assert quo * b + rem == a
    assert rem.degree < b.degree


def test_degree_and_derivative():
    p = RationalPoly([1, 2, 3])
    assert p.degree == 2
    assert RationalPoly().degree == -1
    assert p.derivative() == RationalPoly([2, 6])
    assert (RationalPoly([1, 1]) ** 3).coeffs == (1, 3, 3, 1)


def test_float_evaluation():
    assert RationalPoly([1, 1])(0.5) == 1.5


def test_rejects_floats():
    with pytest.raises(TypeError):
        RationalPoly([0.5])


def test_binomial_series():
    # (1 - z)^-2 = sum (k + 1) z^k
    assert binomial_series(2, 4).coeffs == (1, 2, 3, 4, 5)


def test_multi_divide_linear():
    z0, z1 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    p = (z0 - z1) * (z0 * z0 + z1)
    assert p.divide_linear(0, 1) == z0 * z0 + z1
    with pytest.raises(ArithmeticError):
        (z0 + z1).divide_linear(0, 1)


def test_multi_substitute_and_permute():
    z0, z1 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    p = z0 * z0 * z1 + z1 * Fraction(3)
    assert p.substitute(1, 2).to_univariate() == RationalPoly([6, 0, 2])
    assert p.permute([1, 0])(Fraction(5), Fraction(7)) == p(Fraction(7), Fraction(5))


series = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), fracs, max_size=6)


@given(series, fracs.filter(lambda c: c != 0))
@settings(max_examples=60, deadline=None)
def test_series_inverse(terms, c0):
    terms = dict(terms)
    terms[(0, 0)] = c0
    f = TruncatedSeries((2, 2), terms)
    assert f * f.inverse() == TruncatedSeries.one((2, 2))


def test_series_inverse_needs_unit():
    with pytest.raises(ZeroDivisionError):
        TruncatedSeries((2,), {(1,): 1}).inverse()


def test_series_geometric():
    f = TruncatedSeries((4,), {(0,): 1, (1,): -1})
    assert f.inverse() == TruncatedSeries((4,), {(k,): 1 for k in range(5)})


def test_series_order_mismatch():
    with pytest.raises(ValueError):
        TruncatedSeries((1,), {}) + TruncatedSeries((2,), {})


def test_dot():
    z0, z1 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    f = TruncatedSeries((2, 2), {(0, 0): 1, (1, 0): 2, (0, 1): 3})
    p = z0 * z1 + z1
    # coefficient of z0 z1 in (1 + 2 z0 + 3 z1)(z0 z1 + z1)
    assert f.dot(p, (1, 1)) == 1 + 2
