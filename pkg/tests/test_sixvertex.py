from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from asmshape.sixvertex import (
    Asm, AsmValidationError, ConfigValidationError, EnumerationBoundError, ModelParams,
    SixVertexConfig, VertexType, asm_to_sixvertex, boundary_correlation, efp_oracle,
    efp_oracle_block, enumerate_asms, minus_histogram, oracle_record, sixvertex_to_asm,
    weighted_count,
)

ASM_COUNTS = [1, 2, 7, 42, 429, 7436]

# The N=5 example: matrix plus arrows read edge by edge off the drawing.
FIG_ASM = [
    [0, 0, 1, 0, 0],
    [0, 1, -1, 1, 0],
    [1, -1, 1, 0, 0],
    [0, 1, 0, -1, 1],
    [0, 0, 0, 1, 0],
]
FIG_HORIZONTAL = ["LLLRRR", "LLRLRR", "LRLRRR", "LLRRLR", "LLLLRR"]
FIG_VERTICAL = ["DDDDD", "DDUDD", "DUDUD", "UDUUD", "UUUDU", "UUUUU"]


def _arrows(rows, one):
    return [[1 if ch == one else 0 for ch in row] for row in rows]


def test_figure_configuration():
    c = asm_to_sixvertex(FIG_ASM)
    assert c.horizontal.tolist() == _arrows(FIG_HORIZONTAL, "R")
    assert c.vertical.tolist() == _arrows(FIG_VERTICAL, "U")
    assert sixvertex_to_asm(c) == Asm(FIG_ASM)
    assert Asm(FIG_ASM).minus_count() == 3


def test_figure_vertex_types():
    types = asm_to_sixvertex(FIG_ASM).vertex_types()
    for i in range(5):
        for j in range(5):
            assert types[i][j].asm_entry == FIG_ASM[i][j]
    assert types[0][0] is VertexType.A2    # all left/down: frozen top-left corner
    assert types[0][4] is VertexType.B1


@pytest.mark.parametrize("n", range(1, 7))
def test_counts(n):
    assert sum(minus_histogram(n)) == ASM_COUNTS[n - 1]
    assert weighted_count(n, 1) == ASM_COUNTS[n - 1]


@pytest.mark.parametrize("n", range(1, 7))
def test_two_enumeration(n):
    assert weighted_count(n, 2) == 2 ** (n * (n - 1) // 2)


def test_three_enumeration_small():
    assert [weighted_count(n, 3) for n in range(1, 6)] == [1, 2, 9, 90, 2025]


@pytest.mark.parametrize("n", range(1, 6))
def test_enumeration_matches_histogram(n):
    hist = [0] * len(minus_histogram(n))
    mats = list(enumerate_asms(n))
    for m in mats:
        hist[m.minus_count()] += 1
    assert tuple(hist) == minus_histogram(n)
    assert len(set(mats)) == len(mats)


@pytest.mark.parametrize("n", range(1, 6))
def test_bijection_roundtrip(n):
    configs = set()
    for m in enumerate_asms(n):
        c = asm_to_sixvertex(m)
        assert sixvertex_to_asm(c) == m
        configs.add(c)
    assert len(configs) == ASM_COUNTS[n - 1]


def test_c_vertices_are_nonzero_entries():
    for m in enumerate_asms(4):
        c = asm_to_sixvertex(m)
        for i, j in product(range(4), repeat=2):
            is_c = c.vertex_type(i, j).weight_class == "c"
            assert is_c == (m.entries[i, j] != 0)


def test_invalid_asm():
    with pytest.raises(AsmValidationError):
        Asm([[1, 0], [1, 0]])
    with pytest.raises(AsmValidationError):
        Asm([[0, 1, 0], [1, -1, 1], [0, 1, -1]])
    with pytest.raises(AsmValidationError):
        Asm([[2]])


def test_invalid_config():
    good = asm_to_sixvertex([[1, 0], [0, 1]])
    h = good.horizontal.copy()
    h[0, 0] = 1
    with pytest.raises(ConfigValidationError):
        SixVertexConfig(h, good.vertical)
    h = good.horizontal.copy()
    h[0, 1] = 1 - h[0, 1]
    with pytest.raises(ConfigValidationError):
        SixVertexConfig(h, good.vertical)


def test_json_roundtrip():
    m = Asm(FIG_ASM)
    assert Asm.from_json(m.to_json()) == m


def test_enumeration_bound(monkeypatch):
    monkeypatch.setenv("ASM_MAX_N", "4")
    with pytest.raises(EnumerationBoundError):
        list(enumerate_asms(5))
    with pytest.raises(EnumerationBoundError):
        efp_oracle(5, 1, 1)


def test_model_params():
    assert ModelParams.from_q(1).delta == Fraction(1, 2)
    assert ModelParams.from_q(3).delta == Fraction(-1, 2)
    assert ModelParams.from_weights(1, 1, 2).delta == 0
    with pytest.raises(ValueError):
        ModelParams(delta=Fraction(1, 3), t=Fraction(1), q=Fraction(1))


@pytest.mark.parametrize("q", [1, 2, 3])
def test_boundary_correlation_normalised(q):
    for n in range(1, 6):
        h = boundary_correlation(n, q)
        assert sum(h) == 1
        assert h == h[::-1]      # left-right mirror symmetry


def test_boundary_correlation_n3():
    assert boundary_correlation(3, 1) == [Fraction(2, 7), Fraction(3, 7), Fraction(2, 7)]


@pytest.mark.parametrize("q", [1, 2, 3])
@pytest.mark.parametrize("n", range(1, 6))
def test_efp_trivial_edges(n, q):
    for s in range(1, n + 1):
        assert efp_oracle(n, n, s, q) == 1       # left boundary column
    # F(1, 1): the first-row 1 sits in the last column
    assert efp_oracle(n, 1, 1, q) == boundary_correlation(n, q)[0]


@pytest.mark.parametrize("q", [1, 2, 3])
@pytest.mark.parametrize("n", range(1, 6))
def test_arrow_event_equals_block_event(n, q):
    for r, s in product(range(1, n + 1), repeat=2):
        assert efp_oracle(n, r, s, q) == efp_oracle_block(n, r, s, q)


def test_efp_small_value():
    # 7 matrices; the 1 in row 0 avoids column 0 in 5, column 0 starts 0,0 in 2
    assert efp_oracle(3, 2, 1, 1) == Fraction(5, 7)
    assert efp_oracle(3, 2, 2, 1) == Fraction(2, 7)


def test_efp_monotone():
    n = 5
    for r in range(1, n + 1):
        vals = [efp_oracle(n, r, s, 2) for s in range(1, n + 1)]
        assert vals == sorted(vals, reverse=True)


def test_efp_index_errors():
    with pytest.raises(IndexError):
        efp_oracle(3, 0, 1)
    with pytest.raises(IndexError):
        efp_oracle(3, 1, 4)


def test_oracle_record():
    rec = oracle_record(4, 2, 2, 1, Fraction(3, 7))
    assert rec == {"n": 4, "r": 2, "s": 2, "q_num": 1, "q_den": 1, "value_num": 3, "value_den": 7}


@st.composite
def asms(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    mats = list(enumerate_asms(n))
    return mats[draw(st.integers(0, len(mats) - 1))]


@given(asms())
@settings(max_examples=60, deadline=None)
def test_ice_rule_and_symmetries(m):
    c = asm_to_sixvertex(m)
    assert all(t is not None for row in c.vertex_types() for t in row)
    e = m.entries
    for img in (e[::-1], e[:, ::-1], e.T, np.rot90(e)):
        a = Asm(img)
        assert a.minus_count() == m.minus_count()
        assert sixvertex_to_asm(asm_to_sixvertex(a)) == a


@given(asms())
@settings(max_examples=60, deadline=None)
def test_nonzero_count_identity(m):
    # n ones more than minus ones
    e = m.entries
    assert int((e == 1).sum()) - int((e == -1).sum()) == m.n
