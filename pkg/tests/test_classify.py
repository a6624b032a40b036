from __future__ import annotations

import random

import pytest

from psdrank.classify import (
    POLAR_TAG,
    OctahedronParams,
    Tag,
    build_octahedron,
    classify_3d,
    double_simplex_obstruction,
    equatorial_quadruples,
    is_biplanar_octahedron,
    is_octahedron,
    is_two_level,
    polygon_minimal,
    random_affine_image,
    random_octahedron_params,
    random_polytope_with_extra_vertex,
    scaling_to_01,
    slack_rank_ok,
)
from psdrank.errors import DegenerateParams, NotOctahedron, WrongDimension
from psdrank.exactnum import RatMatrix, rat_rank, surd_rank
from psdrank.hadamard import positive_sqrt, sqrt_rank
from psdrank.io import load_fixture
from psdrank.polytope import Polytope, bipyramid, cross_polytope, cube, polar, pyramid, simplex, slack_matrix
from psdrank.psdfact import psd_rank_bounds

THREE_D = ["octahedron_example", "regular_octahedron", "prism", "cube", "simplex3", "bisimplex", "hexagonal_prism"]


def test_two_level_examples():
    assert is_two_level(slack_matrix(cube(3))) is not None
    assert is_two_level(slack_matrix(cross_polytope(3))) is not None
    assert is_two_level(load_fixture("pentagon_slack")) is None
    scaled = is_two_level(RatMatrix([[0, 2], [3, 0], [3, 2]]))
    assert scaled == RatMatrix([[0, 1], [1, 0], [1, 1]])


def test_scaling_to_01_examples():
    ones = RatMatrix([[1, 0, 1], [0, 1, 1]])
    assert scaling_to_01(ones) == ((1, 1), (1, 1, 1))
    assert scaling_to_01(load_fixture("prism_slack")) is None
    assert scaling_to_01(slack_matrix(load_fixture("bisimplex")).matrix) is not None
    r, c = scaling_to_01(RatMatrix([[2, 4], [1, 2]]))
    assert all(r[i] * x * c[j] == 1 for i, row in enumerate([[2, 4], [1, 2]]) for j, x in enumerate(row))
    with pytest.raises(ValueError):
        scaling_to_01(RatMatrix([[-1]]))


def test_polygon_minimal():
    assert polygon_minimal(simplex(2))
    assert polygon_minimal(Polytope.from_vertices([(0, 0), (3, 0), (3, 2), (0, 5)]))
    assert not polygon_minimal(load_fixture("pentagon"))
    with pytest.raises(WrongDimension):
        polygon_minimal(cube(3))


def test_octahedron_recognition_and_biplanarity():
    reg = load_fixture("regular_octahedron")
    ex = load_fixture("octahedron_example")
    assert is_octahedron(reg) and is_octahedron(ex)
    assert not is_octahedron(cube(3))
    assert is_biplanar_octahedron(reg)
    assert not is_biplanar_octahedron(ex)
    assert len(equatorial_quadruples(ex)) == 3
    with pytest.raises(NotOctahedron):
        is_biplanar_octahedron(cube(3))


def test_octahedron_params():
    q = OctahedronParams(1, 1, ("1/2", "1/2", 1), ("1/2", "1/2", -1))
    assert q.alpha == q.beta + q.gamma and q.b * q.beta == q.a * q.gamma
    p = build_octahedron(q)
    assert q.biplanar() and is_biplanar_octahedron(p)
    # a=2, b=1 with only alpha = beta + gamma
    q = OctahedronParams(2, 1, ("1/2", "1/2", 1), ("1/2", "1/2", "-1/2"))
    assert q.alpha == q.beta + q.gamma and q.b * q.beta != q.a * q.gamma
    p = build_octahedron(q)
    assert is_biplanar_octahedron(p)
    assert surd_rank(positive_sqrt(slack_matrix(p).matrix)) == 4
    with pytest.raises(DegenerateParams):
        OctahedronParams(0, 1, (0, 0, 1), (0, 0, -1))
    with pytest.raises(DegenerateParams):
        build_octahedron(OctahedronParams(1, 1, (5, 5, 1), (6, 6, -1)))


def test_random_params_match_their_kind():
    rng = random.Random(11)
    for kind in ("diagonal", "antidiagonal", "generic"):
        for _ in range(5):
            q = random_octahedron_params(rng, kind)
            p = build_octahedron(q)
            assert q.biplanar() == (kind != "generic")
            assert is_biplanar_octahedron(p) == q.biplanar()


def test_generic_octahedron_is_not_minimal():
    rng = random.Random(5)
    q = random_octahedron_params(rng, "generic")
    r = sqrt_rank(slack_matrix(build_octahedron(q)).matrix)
    assert r.certified and r.min_rank >= 5


def test_classify_3d_examples():
    assert classify_3d(simplex(3)).tag is Tag.SIMPLEX and classify_3d(simplex(3)).minimal
    c = classify_3d(load_fixture("octahedron_example"))
    assert c.tag is Tag.OCTAHEDRON and not c.minimal
    h = classify_3d(load_fixture("hexagonal_prism"))
    assert h.tag is Tag.OTHER and not h.minimal
    assert classify_3d(pyramid(cube(2))).tag is Tag.QUAD_PYRAMID
    assert classify_3d(load_fixture("bisimplex")).tag is Tag.BISIMPLEX
    assert classify_3d(load_fixture("prism")).tag is Tag.CUBOID
    with pytest.raises(WrongDimension):
        classify_3d(cube(2))


def test_prism_fixture_is_minimal_cuboid_without_01_scaling():
    c = classify_3d(load_fixture("prism"))
    assert c.minimal
    assert scaling_to_01(slack_matrix(load_fixture("prism")).matrix) is None


@pytest.mark.parametrize("name", THREE_D + ["triangular_prism", "square_pyramid"])
def test_polar_pairs_tags(name):
    extra = {
        "triangular_prism": lambda: Polytope.from_vertices(
            [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1)]),
        "square_pyramid": lambda: pyramid(cube(2)),
    }
    p = extra[name]() if name in extra else load_fixture(name)
    a, b = classify_3d(p), classify_3d(polar(p))
    assert POLAR_TAG[a.tag] is b.tag
    assert a.minimal == b.minimal


@pytest.mark.parametrize("name", THREE_D)
def test_verdict_consistent_with_bounds(name):
    p = load_fixture(name)
    iv = psd_rank_bounds(slack_matrix(p).matrix, dim=3)
    if iv.exact:
        assert classify_3d(p).minimal == (iv.lo == 4)


def test_double_simplex_obstruction():
    r2 = double_simplex_obstruction(2)
    assert not r2.obstructed
    r3 = double_simplex_obstruction(3)
    assert r3.kernel_dim == 1 and r3.obstructed
    assert r3.kernel_generator == (1, -1, -1, -1, 1)
    assert double_simplex_obstruction(5).obstructed


@pytest.mark.parametrize("p", [cube(3), cross_polytope(3), simplex(2), simplex(3), simplex(4)],
                         ids=["cube", "octahedron", "simplex2", "simplex3", "simplex4"])
def test_two_level_gives_minimal_sqrt_rank(p):
    s = slack_matrix(p).matrix
    assert is_two_level(s) is not None
    assert sqrt_rank(s).min_rank == p.dim + 1


def test_random_two_level_embeddings():
    rng = random.Random(2)
    bases = [cube(3), cross_polytope(3), simplex(3), cube(2), simplex(4)]
    for k in range(10):
        p = random_affine_image(bases[k % len(bases)], rng)
        s = slack_matrix(p).matrix
        assert is_two_level(s) is not None
        assert sqrt_rank(s).min_rank == p.dim + 1


@pytest.mark.parametrize("m", [RatMatrix([[1, 0, 2], [2, 3, 0], [0, 1, 1]]), load_fixture("prism_slack"),
                               slack_matrix(load_fixture("bisimplex")).matrix, RatMatrix([[4, 2], [2, 1]])])
def test_scaling_implies_sqrt_rank_equals_rank(m):
    if scaling_to_01(m) is not None:
        assert sqrt_rank(m).min_rank == rat_rank(m)


def test_polytopes_with_extra_vertex_have_minimal_positive_root():
    rng = random.Random(9)
    for n in (2, 3):
        for _ in range(3):
            p = random_polytope_with_extra_vertex(rng, n)
            assert slack_rank_ok(p)
            assert surd_rank(positive_sqrt(slack_matrix(p).matrix)) == n + 1


def test_bipyramid_over_triangle_is_bisimplex():
    assert classify_3d(bipyramid(simplex(2))).tag is Tag.BISIMPLEX
