from fractions import Fraction
from itertools import permutations, product

import pytest

from asmshape.conventions import C0_ORIENTATION, Case
from asmshape.efp import (
    EfpQuery, UTransform, efp_profile, efp_record, efp_residue, profile_csv,
    unit_integral_check, unit_integral_series,
)
from asmshape.genfun import h_poly
from asmshape.sixvertex import ModelParams, efp_oracle

QS = [1, 2, 3]


def test_spot_values():
    assert efp_residue(EfpQuery.from_q(4, 4, 2, 1)) == 1
    assert efp_residue(EfpQuery.from_q(4, 2, 2, 2)) == efp_oracle(4, 2, 2, 2)
    assert efp_residue(EfpQuery.from_q(5, 3, 2, 3)) == efp_oracle(5, 3, 2, 3)


@pytest.mark.parametrize("q", QS)
@pytest.mark.parametrize("n", range(1, 5))
def test_residue_equals_oracle(n, q):
    for r, s in product(range(1, n + 1), repeat=2):
        assert efp_residue(EfpQuery.from_q(n, r, s, q)) == efp_oracle(n, r, s, q), (r, s)


@pytest.mark.parametrize("q", QS)
@pytest.mark.parametrize("n", range(1, 5))
def test_unit_integral(n, q):
    p = ModelParams.from_q(q)
    for r, s in product(range(1, n + 1), repeat=2):
        assert unit_integral_check(n, r, s, p) == 1


def test_unit_integral_spot():
    assert unit_integral_check(4, 2, 2, ModelParams.from_q(1)) == 1
    assert unit_integral_check(5, 3, 3, ModelParams.from_q(3)) == 1


@pytest.mark.parametrize("q", QS)
def test_unit_integral_two_routes(q):
    p = ModelParams.from_q(q)
    for r, s in [(1, 1), (2, 3), (4, 2), (5, 4)]:
        assert unit_integral_series(5, r, s, p) == unit_integral_check(5, r, s, p) == 1


@pytest.mark.parametrize("r,s", [(2, 1), (2, 2), (3, 3)])
def test_orientation_flip_negates_odd(r, s):
    q = EfpQuery.from_q(4, r, s, 1)
    base = efp_residue(q)
    assert base != 0
    flipped = efp_residue(q, orientation=-C0_ORIENTATION)
    assert flipped == (-1) ** s * base
    if s % 2:
        assert flipped != base


@pytest.mark.parametrize("s", [2, 3])
def test_variable_order_invariance(s):
    q = EfpQuery.from_q(5, 3, s, 3)
    base = efp_residue(q)
    for perm in permutations(range(s)):
        assert efp_residue(q, variable_order=perm) == base


def test_bad_variable_order():
    with pytest.raises(ValueError):
        efp_residue(EfpQuery.from_q(4, 2, 2, 1), variable_order=[0, 0])


def test_profile_s1_is_cumulative_h():
    prof = efp_profile(5, 1, ModelParams.from_q(1))
    coeffs = h_poly(5, Case.Q1).coeffs
    assert prof == [sum(coeffs[:r]) for r in range(1, 6)]


@pytest.mark.parametrize("q", QS)
def test_profile_monotone(q):
    for s in range(1, 5):
        prof = efp_profile(5, s, ModelParams.from_q(q))
        assert prof == sorted(prof)
        assert prof[-1] == 1


def test_query_validation():
    with pytest.raises(IndexError):
        EfpQuery.from_q(4, 5, 1, 1)
    with pytest.raises(ValueError):
        EfpQuery.from_q(0, 1, 1, 1)
    with pytest.raises(ValueError):
        efp_residue(EfpQuery(3, 1, 1, ModelParams(Fraction(1, 3), Fraction(1), None)))


def test_u_transform():
    u = UTransform(ModelParams.from_q(1))
    assert u(Fraction(1)) == 0
    assert u(Fraction(0)) == 1


def test_record_and_csv():
    v = efp_residue(EfpQuery.from_q(3, 2, 2, 1))
    rec = efp_record(3, 2, 2, 1, v, efp_oracle(3, 2, 2, 1))
    assert rec == {"n": 3, "r": 2, "s": 2, "q": "1/1", "efp": "2/7", "oracle": "2/7", "match": True}
    text = profile_csv([Fraction(1, 2), Fraction(1)])
    assert text.splitlines() == ["r,value", "1,0.5", "2,1.0"]
