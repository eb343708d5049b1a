import math
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from asmshape.conventions import Case
from asmshape.genfun import (
    B_poly, empirical_log_density, h_multi, h_poly, hypergeometric_terms, log_density,
)
from asmshape.polys import RationalPoly
from asmshape.sixvertex import boundary_correlation

CASES = list(Case)


@pytest.mark.parametrize("case", CASES)
@pytest.mark.parametrize("n", range(1, 7))
def test_h_poly_is_boundary_correlation(n, case):
    assert list(h_poly(n, case).coeffs) == boundary_correlation(n, case.q)


@pytest.mark.parametrize("case", CASES)
def test_h_poly_normalised_and_positive(case):
    for n in range(1, 21):
        h = h_poly(n, case)
        assert h(Fraction(1)) == 1
        assert h.degree == n - 1
        assert all(c > 0 for c in h.coeffs)


def test_q3_parity_branches_to_12():
    for n in range(1, 13):
        assert h_poly(n, Case.Q3)(Fraction(1)) == 1


def test_q2_binomial():
    assert list(h_poly(4, Case.Q2).coeffs) == [Fraction(1, 8), Fraction(3, 8), Fraction(3, 8), Fraction(1, 8)]


def test_small_closed_forms():
    assert list(h_poly(2, Case.Q1).coeffs) == [Fraction(1, 2), Fraction(1, 2)]
    # (1/9)(2z+1)(z+2) B_0 with B_0 = 1
    assert list(h_poly(3, Case.Q3).coeffs) == [Fraction(2, 9), Fraction(5, 9), Fraction(2, 9)]
    assert B_poly(0) == RationalPoly([1])


def test_hypergeometric_terms():
    # 2F1(-2, 3; 6; x) = 1 - x + 2/7 x^2
    assert hypergeometric_terms(-2, 3, 6) == [1, -1, Fraction(2, 7)]


@pytest.mark.parametrize("case", CASES)
def test_h_multi_s1(case):
    for n in range(1, 6):
        assert h_multi(n, 1, case).to_univariate() == h_poly(n, case)


@pytest.mark.parametrize("case", CASES)
@pytest.mark.parametrize("n", range(1, 7))
def test_reduction_at_one(n, case):
    for s in range(1, min(n, 3)):
        upper = h_multi(n, s + 1, case)
        assert upper.substitute(s, 1) == h_multi(n, s, case)


@pytest.mark.parametrize("case", CASES)
@pytest.mark.parametrize("n", range(2, 7))
def test_reduction_at_zero(n, case):
    h0 = h_poly(n, case)(Fraction(0))
    for s in range(1, min(n - 1, 3) + 1):
        upper = h_multi(n, s + 1, case)
        assert upper.substitute(s, 0) == h_multi(n - 1, s, case) * h0


@pytest.mark.parametrize("case", CASES)
def test_reduction_chain(case):
    h = h_multi(5, 4, case)
    for k in range(3, 0, -1):
        h = h.substitute(k, 1)
    assert h.to_univariate() == h_poly(5, case)


@pytest.mark.parametrize("case", CASES)
@pytest.mark.parametrize("s", [2, 3])
def test_symmetry(case, s):
    h = h_multi(5, s, case)
    for perm in permutations(range(s)):
        assert h.permute(perm) == h


def test_multi_bounds():
    with pytest.raises(ValueError):
        h_multi(3, 4, Case.Q1)


def test_log_density_derivatives():
    assert log_density(Case.Q2).derivative(Fraction(1)) == Fraction(1, 2)
    assert log_density(Case.Q3).derivative(Fraction(2)) == Fraction(19, 60)
    for c in CASES:
        ld = log_density(c)
        assert abs(ld(1.0)) < 1e-15
        assert abs(ld.derivative(1.0) - 0.5) < 1e-15


def test_q3_partial_fractions_exact():
    ld = log_density(Case.Q3)
    for z in [Fraction(1, 3), Fraction(1), Fraction(7, 2), Fraction(40)]:
        assert ld.derivative(z) == 2 / (2 * z + 1) + 1 / (z + 2) - 1 / (z + 1)
        assert ld.derivative(z) == (2 * z * z + 4 * z + 3) / ((1 + z) * (2 + z) * (1 + 2 * z))


@pytest.mark.parametrize("case", CASES)
def test_finite_differences(case):
    ld = log_density(case)
    hstep = 1e-5
    for z in [1.01, 1.5, 2.0, 3.0, 7.0, 20.0, 50.0]:
        fd = (ld(z + hstep) - ld(z - hstep)) / (2 * hstep)
        assert abs(fd - ld.derivative(z)) < 1e-9
        fd2 = (ld.derivative(z + hstep) - ld.derivative(z - hstep)) / (2 * hstep)
        assert abs(fd2 - ld.second_derivative(z)) < 1e-8


def test_q1_rationalised_form():
    ld = log_density(Case.Q1)
    for z in [0.3, 2.0, 9.0]:
        S = math.sqrt(z * z - z + 1)
        assert abs(ld.derivative(z) - (1 - S) / (z * (1 - z))) < 1e-14
        assert abs(ld.v(z) - (2 - z - S) / (3 * (1 - z))) < 1e-14


def test_empirical_log_density():
    ns = [10, 25, 50, 100]
    q2 = empirical_log_density(ns, Case.Q2, 3.0)
    for n, val in zip(ns, q2):
        assert abs(val - (n - 1) / n * math.log(2)) < 1e-12
    q1 = empirical_log_density(ns, Case.Q1, 2.0)
    target = log_density(Case.Q1)(2.0)
    assert all(a < b < target for a, b in zip(q1, q1[1:]))
    assert target - q1[-1] < 0.02
    q3 = empirical_log_density([40, 80], Case.Q3, 2.0)
    assert abs(q3[-1] - math.log(40 / 27)) < abs(q3[0] - math.log(40 / 27)) < 0.05


@given(st.sampled_from(CASES), st.integers(2, 5),
       st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=7), min_size=2, max_size=2))
@settings(max_examples=40, deadline=None)
def test_h_multi_symmetric_pointwise(case, n, zs):
    h = h_multi(n, 2, case)
    assert h(*zs) == h(*zs[::-1])
