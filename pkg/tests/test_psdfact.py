from __future__ import annotations


import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psdrank.errors import DimensionMismatch, InvalidCertificate, IrrationalFactor, NonPositiveAlpha, WrongDimension
from psdrank.exactnum import RatMatrix, rat_rank, surd_rank
from psdrank.hadamard import positive_sqrt, sqrt_rank
from psdrank.io import load_fixture
from psdrank.polytope import Polytope, cube, pyramid, simplex
from psdrank.psdfact import (
    PsdFactorization,
    Rule,
    extend_matrix,
    facet_recursive_lower_bound,
    psd_rank_bounds,
    quadratic_lower_bound,
    rank_one_factorization,
    rank_one_root,
    verify_factorization,
)

CERTS = {
    "example_rank3_k2": "example_rank3",
    "derangement_k2": "derangement",
    "pentagon_k4": "pentagon_slack",
    "hexagon_k4": "hexagon_slack",
}
MATRICES = ["pentagon_slack", "hexagon_slack", "example_rank3", "derangement", "octahedron_slack",
            "identity4", "diag1234", "segment_slack", "one_by_one", "prism_slack"]


def test_displayed_certificates_verify():
    r = verify_factorization(load_fixture("example_rank3"), load_fixture("example_rank3_k2"))
    assert r.valid and r.k == 2
    r = verify_factorization(load_fixture("pentagon_slack"), load_fixture("pentagon_k4"))
    assert r.valid and r.k == 4
    r = verify_factorization(load_fixture("hexagon_slack"), load_fixture("hexagon_k4"))
    assert r.valid and r.k == 4 and r.max_col_factor_rank == 2
    assert set(r.col_factor_ranks) == {2}
    r = verify_factorization(load_fixture("derangement"), load_fixture("derangement_k2"))
    assert r.valid and r.k == 2
    assert set(r.row_factor_ranks) | set(r.col_factor_ranks) == {1}


def test_verify_rejects_bad_certificates():
    m = load_fixture("derangement")
    f = load_fixture("derangement_k2")
    wrong = RatMatrix([[2, 0], [0, 0]])
    bad = PsdFactorization(2, (wrong,) + f.row_factors[1:], f.col_factors)
    r = verify_factorization(m, bad)
    assert not r.valid and any("inner product" in p for p in r.problems)
    neg = PsdFactorization(2, (RatMatrix([[1, 2], [2, 1]]),) + f.row_factors[1:], f.col_factors)
    assert any("semidefinite" in p for p in verify_factorization(m, neg).problems)
    asym = PsdFactorization(2, (RatMatrix([[1, 1], [0, 1]]),) + f.row_factors[1:], f.col_factors)
    assert any("symmetric" in p for p in verify_factorization(m, asym).problems)
    with pytest.raises(DimensionMismatch):
        verify_factorization(m, PsdFactorization(2, f.row_factors[:2], f.col_factors))
    with pytest.raises(DimensionMismatch):
        PsdFactorization(3, f.row_factors, f.col_factors)


def test_rank_one_factorizations():
    d = load_fixture("derangement")
    f = rank_one_factorization(load_fixture("derangement_root2"), require_rational=True)
    assert f.k == 2 and verify_factorization(d, f).valid
    i3 = rank_one_factorization(positive_sqrt(RatMatrix.identity(3)))
    assert i3.k == 3 and verify_factorization(RatMatrix.identity(3), i3).valid
    assert sorted(tuple(map(tuple, a.rows)) for a in i3.row_factors) == sorted(
        tuple(tuple(int(i == j == t) for j in range(3)) for i in range(3)) for t in range(3)
    )
    h = rank_one_factorization(load_fixture("hexagon_root4"))
    rep = verify_factorization(load_fixture("hexagon_slack"), h)
    assert rep.valid and h.k == 4
    assert rep.max_row_factor_rank == rep.max_col_factor_rank == 1
    with pytest.raises(IrrationalFactor):
        rank_one_factorization(load_fixture("hexagon_root4"), require_rational=True)


def test_rank_one_root_roundtrip():
    d = load_fixture("derangement")
    root = rank_one_root(d, load_fixture("derangement_k2"))
    assert root.square() == d and surd_rank(root) <= 2
    with pytest.raises(InvalidCertificate):
        rank_one_root(load_fixture("example_rank3"), load_fixture("example_rank3_k2"))


@pytest.mark.parametrize("name", MATRICES)
def test_rank_one_factorization_of_any_root_verifies(name):
    m = load_fixture(name)
    for root in (positive_sqrt(m), sqrt_rank(m).witness):
        f = rank_one_factorization(root)
        assert verify_factorization(m, f).valid
        assert f.k == surd_rank(root)


@pytest.mark.parametrize("name", ["pentagon_slack", "example_rank3", "derangement", "identity4",
                                  "diag1234", "segment_slack", "one_by_one"])
def test_smallest_rank_one_certificate_is_sqrt_rank(name):
    m = load_fixture(name)
    r = sqrt_rank(m).min_rank
    ks = [rank_one_factorization(sqrt_rank(m).witness).k]
    for cert, mat in CERTS.items():
        f = load_fixture(cert)
        rep = verify_factorization(load_fixture(mat), f)
        if mat == name and rep.max_row_factor_rank <= 1 and rep.max_col_factor_rank <= 1:
            ks.append(f.k)
    assert min(ks) == r


def test_extend_matrix():
    m = RatMatrix([[1]])
    m = extend_matrix(extend_matrix(m, [0], 1), [0, 0], 1)
    assert m == RatMatrix.identity(3)
    with pytest.raises(NonPositiveAlpha):
        extend_matrix(m, [0, 0, 0], 0)
    with pytest.raises(DimensionMismatch):
        extend_matrix(m, [0], 1)
    sp = load_fixture("pentagon_slack")
    ext = extend_matrix(sp, [1, 0, 2, 0, 1], 3)
    assert sqrt_rank(sp).min_rank == 5 and sqrt_rank(ext).min_rank == 6


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.lists(st.integers(0, 5), min_size=3, max_size=3), min_size=2, max_size=3),
    st.lists(st.integers(0, 5), min_size=3, max_size=3),
    st.integers(1, 9),
)
def test_extension_raises_rank_by_one(rows, w, alpha):
    m = RatMatrix(rows)
    e = extend_matrix(m, w, alpha)
    assert rat_rank(e) == rat_rank(m) + 1
    assert sqrt_rank(e).min_rank == sqrt_rank(m).min_rank + 1


def test_bounds_examples():
    iv = psd_rank_bounds(load_fixture("octahedron_slack"), dim=3)
    assert (iv.lo, iv.hi) == (5, 5)
    assert Rule.SQRT_GAP in {r.rule for r in iv.lo_reasons}
    sp = load_fixture("pentagon_slack")
    iv = psd_rank_bounds(sp, dim=2, certs=[load_fixture("pentagon_k4")])
    assert (iv.lo, iv.hi) == (4, 4)
    assert (psd_rank_bounds(sp, dim=2).lo, psd_rank_bounds(sp, dim=2).hi) == (4, 5)
    for n in (2, 3, 4, 5):
        iv = psd_rank_bounds(RatMatrix.identity(n), dim=n - 1)
        assert (iv.lo, iv.hi) == (n, n)


def test_bounds_without_dimension_and_errors():
    iv = psd_rank_bounds(load_fixture("derangement"), certs=[load_fixture("derangement_k2")])
    assert (iv.lo, iv.hi) == (2, 2)
    with pytest.raises(WrongDimension):
        psd_rank_bounds(load_fixture("pentagon_slack"), dim=3)
    bad = PsdFactorization(2, (RatMatrix([[2, 0], [0, 0]]),) * 3, load_fixture("derangement_k2").col_factors)
    with pytest.raises(InvalidCertificate):
        psd_rank_bounds(load_fixture("derangement"), certs=[bad])


def test_non_certified_search_gives_upper_bound_only():
    iv = psd_rank_bounds(load_fixture("pentagon_slack"), dim=2, budget=2)
    assert iv.lo == 3 and iv.hi >= 5
    assert iv.notes


@pytest.mark.parametrize("cert,name", sorted(CERTS.items()))
def test_certificates_only_tighten_hi(cert, name):
    m = load_fixture(name)
    plain = psd_rank_bounds(m)
    with_cert = psd_rank_bounds(m, certs=[load_fixture(cert)])
    assert with_cert.lo == plain.lo
    assert with_cert.hi <= plain.hi
    assert plain.lo <= plain.hi


@pytest.mark.parametrize("name,dim", [("pentagon_slack", 2), ("hexagon_slack", 2), ("octahedron_slack", 3),
                                      ("prism_slack", 3), ("identity4", 3)])
def test_interval_extension_law(name, dim):
    m = load_fixture(name)
    base = psd_rank_bounds(m, dim=dim)
    ext = psd_rank_bounds(extend_matrix(m, [1] * m.ncols, 2), dim=dim + 1)
    if Rule.SQRT_GAP in {r.rule for r in base.lo_reasons}:
        assert ext.lo >= base.lo + 1
    assert ext.lo <= ext.hi


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(0, 4), min_size=4, max_size=4), min_size=2, max_size=4))
def test_quadratic_bound_always_holds(rows):
    m = RatMatrix(rows)
    r = rat_rank(m)
    iv = psd_rank_bounds(m)
    k = quadratic_lower_bound(r)
    assert k * (k + 1) // 2 >= r and (k - 1) * k // 2 < r or r == 0
    assert iv.lo >= k


def test_facet_recursion():
    assert facet_recursive_lower_bound(pyramid(Polytope.from_vertices([(0, 0), (1, 0), (2, 1), (1, 2), (0, 1)]))) == 5
    assert facet_recursive_lower_bound(cube(3)) == 4
    assert facet_recursive_lower_bound(simplex(3)) == 4
    p = pyramid(load_fixture("pentagon"))
    from psdrank.polytope import slack_matrix
    iv = psd_rank_bounds(slack_matrix(p).matrix, polytope=p)
    assert iv.lo == 5
