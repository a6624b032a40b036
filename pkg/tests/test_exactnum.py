from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import eig_psd, float_rank
from psdrank.errors import NegativeEntry
from psdrank.exactnum import (
    FieldMatrix,
    RatMatrix,
    Surd,
    SurdMatrix,
    as_rational,
    factorize,
    field_det,
    field_for_radicands,
    embed_surd,
    is_psd,
    rat_det,
    rat_nullspace,
    rat_rank,
    squarefree_decompose,
    surd_rank,
    sym_rank,
    trace_inner,
)
from psdrank.hadamard import positive_sqrt
from psdrank.io import load_fixture

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
small = st.integers(min_value=-5, max_value=5)


def test_as_rational_accepts_strings_and_rejects_floats():
    assert as_rational("3/6") == Fraction(1, 2)
    assert as_rational(7) == 7
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_factorize_and_squarefree():
    assert factorize(360) == ((2, 3), (3, 2), (5, 1))
    assert squarefree_decompose(72) == (6, 2)
    assert squarefree_decompose(1) == (1, 1)


def test_surd_normalises_and_prints():
    assert Surd.sqrt(8) == Surd(2, 2)
    assert str(Surd.sqrt(8)) == "2*sqrt(2)"
    assert str(Surd.sqrt(Fraction(1, 2))) == "1/2*sqrt(2)"
    assert Surd.parse("-3*sqrt(12)") == Surd(-6, 3)
    assert Surd.sqrt(0).is_zero()
    with pytest.raises(NegativeEntry):
        Surd.sqrt(-1)


@given(st.fractions(min_value=-50, max_value=50, max_denominator=30), st.integers(1, 60))
def test_surd_square_then_root_is_abs(c, d):
    s = Surd(c, d)
    assert Surd.sqrt(s.square()) == abs(s)


def test_field_arithmetic_and_inverse():
    field, table = field_for_radicands([2, 3, 6])
    assert field.degree == 4
    r2 = embed_surd(Surd.sqrt(2), field, table)
    r3 = embed_surd(Surd.sqrt(3), field, table)
    r6 = embed_surd(Surd.sqrt(6), field, table)
    assert r2 * r3 == r6
    x = r2 + r3 + 1
    assert x * x.inverse() == field.one()
    assert (r2 - r3).sign() == -1
    assert (r3 * r3 - 3).is_zero()


def test_field_sign_of_near_cancellation():
    field, table = field_for_radicands([2, 3])
    # sqrt(2) + sqrt(3) vs its rational approximation 3.1462643699...
    x = embed_surd(Surd.sqrt(2), field, table) + embed_surd(Surd.sqrt(3), field, table)
    assert (x - Fraction(31462643699, 10 ** 10)).sign() == 1
    assert (x - Fraction(31462643700, 10 ** 10)).sign() == -1


def test_rat_rank_examples():
    assert rat_rank(RatMatrix.identity(3)) == 3
    assert rat_rank(RatMatrix([[1, 1, 1], [1, 0, 1], [0, 1, 1]])) == 3
    assert rat_rank(load_fixture("pentagon_slack")) == 3
    assert rat_rank(RatMatrix.zeros(2, 3)) == 0


def test_rat_det():
    assert rat_det(RatMatrix([[1, 2], [3, 4]])) == -2
    assert rat_det(RatMatrix.identity(4)) == 1


def test_surd_rank_examples():
    assert surd_rank(load_fixture("hexagon_root4")) == 4
    assert surd_rank(positive_sqrt(load_fixture("hexagon_slack"))) == 5
    d = SurdMatrix([[Surd.sqrt(1), 0, 0], [0, Surd.sqrt(2), 0], [0, 0, Surd.sqrt(3)]])
    assert surd_rank(d) == 3


def test_surd_rank_detects_irrational_dependence():
    # rows (1, sqrt2) and (sqrt2, 2) are dependent over Q(sqrt2)
    a = SurdMatrix([[1, Surd.sqrt(2)], [Surd.sqrt(2), 2]])
    assert surd_rank(a) == 1
    b = SurdMatrix([[1, Surd.sqrt(2)], [Surd.sqrt(3), Surd.sqrt(6)]])
    assert surd_rank(b) == 1
    c = SurdMatrix([[1, Surd.sqrt(2)], [Surd.sqrt(3), Surd.sqrt(5)]])
    assert surd_rank(c) == 2


def test_is_psd_examples():
    assert is_psd(RatMatrix([["1/2", "-1/2"], ["-1/2", 1]]))
    assert not is_psd(RatMatrix([[1, 2], [2, 1]]))
    assert is_psd(RatMatrix.zeros(3, 3))
    # zero leading minors with a negative later one
    assert not is_psd(RatMatrix([[0, 0], [0, -1]]))
    assert not is_psd(RatMatrix([[0, 1], [1, 0]]))


def test_sym_rank_examples():
    assert sym_rank(RatMatrix([[1, 1], [1, 1]])) == 1
    col = RatMatrix([[1, -1, 0, 1], [-1, 1, 0, -1], [0, 0, 1, 0], [1, -1, 0, 1]])
    assert sym_rank(col) == 2
    assert sym_rank(RatMatrix.zeros(4, 4)) == 0


def test_trace_inner():
    a = RatMatrix([[1, 2], [2, 1]])
    b = RatMatrix([[3, 0], [0, 5]])
    assert trace_inner(a, b) == 8


def test_nullspace():
    m = RatMatrix([[1, 1, 0], [0, 1, 1]])
    ker = rat_nullspace(m)
    assert len(ker) == 1
    v = ker[0]
    assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in m.rows)


def test_field_det_of_field_matrix():
    field, table = field_for_radicands([2])
    r2 = embed_surd(Surd.sqrt(2), field, table)
    m = FieldMatrix([[r2, field.one()], [field.one(), r2]])
    assert field_det(m) == field.one()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=3, max_size=3))
def test_rat_rank_matches_float_and_transpose(rows):
    m = RatMatrix(rows)
    assert rat_rank(m) == rat_rank(m.T) == float_rank(rows)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.lists(st.integers(0, 6), min_size=3, max_size=3), min_size=3, max_size=3),
    st.lists(st.integers(1, 5), min_size=3, max_size=3),
    st.lists(st.integers(1, 5), min_size=3, max_size=3),
)
def test_ranks_invariant_under_positive_scaling(rows, d1, d2):
    m = RatMatrix(rows)
    scaled = m.scale(d1, d2)
    assert rat_rank(scaled) == rat_rank(m)
    assert surd_rank(positive_sqrt(scaled)) == surd_rank(positive_sqrt(m))
    assert surd_rank(positive_sqrt(m).T) == surd_rank(positive_sqrt(m))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(0, 9), min_size=3, max_size=3), min_size=3, max_size=3))
def test_surd_rank_dominates_rational_submatrices(rows):
    a = positive_sqrt(RatMatrix(rows))
    r = surd_rank(a)
    rational = [
        (i, j) for i in range(3) for j in range(3) if a[i, j].radicand == 1
    ]
    rows_q = sorted({i for i, _ in rational})
    for i in rows_q:
        cols = [j for (k, j) in rational if k == i]
        sub = RatMatrix([[a[i, j].coeff for j in cols]])
        assert rat_rank(sub) <= r


def test_is_psd_matches_eigenvalues_on_random_matrices():
    rng = random.Random(7)
    for _ in range(1000):
        a = [[0] * 4 for _ in range(4)]
        for i in range(4):
            for j in range(i, 4):
                a[i][j] = a[j][i] = Fraction(rng.randint(-10, 10), 2)
        if rng.random() < 0.5:
            # bias towards psd: A A^T
            b = [[Fraction(rng.randint(-2, 2)) for _ in range(4)] for _ in range(rng.randint(1, 4))]
            a = [[sum(b[k][i] * b[k][j] for k in range(len(b))) for j in range(4)] for i in range(4)]
        assert is_psd(RatMatrix(a)) == eig_psd(a)
