"""Geometric classifiers for polytopes of minimal psd rank.

Covers 2-level detection, scaling of a nonnegative matrix to 0/1, the
polygon criterion, biplanarity of octahedra, combinatorial typing of
3-polytopes, and the kernel argument ruling out 2-level double simplices.
Seeded generators for the sampling checks live here too.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Sequence

from .errors import DegenerateParams, GeometryError, NotOctahedron, WrongDimension
from .exactnum import RatMatrix, as_rational, rat_det, rat_nullspace, rat_rank
from .polytope import Polytope, SlackMatrix, polar, slack_matrix

DEFAULT_SEED = 20130601


def _as_matrix(s: SlackMatrix | RatMatrix | Sequence[Sequence[Any]]) -> RatMatrix:
    if isinstance(s, SlackMatrix):
        return s.matrix
    if isinstance(s, RatMatrix):
        return s
    return RatMatrix(s)


def is_two_level(s: SlackMatrix | RatMatrix) -> RatMatrix | None:
    """The column-scaled 0/1 matrix when every column has a single nonzero value."""
    M = _as_matrix(s)
    cols = []
    for c in zip(*M.rows):
        vals = {x for x in c if x != 0}
        if len(vals) > 1:
            return None
        v = vals.pop() if vals else Fraction(1)
        cols.append([x / v for x in c])
    return RatMatrix([list(r) for r in zip(*cols)]) if cols else M


def scaling_to_01(M: RatMatrix) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]] | None:
    """Positive row and column scales making ``M`` a 0/1 matrix, if they exist.

    Scales are propagated along a spanning forest of the support graph
    (each component rooted at a row with scale 1); the scaling exists iff
    every remaining nonzero entry then also becomes 1.
    """
    M = _as_matrix(M)
    nr, nc = M.shape
    if any(x < 0 for r in M.rows for x in r):
        raise ValueError("matrix must be nonnegative")
    rs: list[Fraction | None] = [None] * nr
    cs: list[Fraction | None] = [None] * nc
    for start in range(nr):
        if rs[start] is not None:
            continue
        rs[start] = Fraction(1)
        stack = [("r", start)]
        while stack:
            kind, k = stack.pop()
            if kind == "r":
                for j in range(nc):
                    if M[k, j] != 0 and cs[j] is None:
                        cs[j] = 1 / (rs[k] * M[k, j])
                        stack.append(("c", j))
            else:
                for i in range(nr):
                    if M[i, k] != 0 and rs[i] is None:
                        rs[i] = 1 / (cs[k] * M[i, k])
                        stack.append(("r", i))
    r = tuple(x if x is not None else Fraction(1) for x in rs)
    c = tuple(x if x is not None else Fraction(1) for x in cs)
    for i in range(nr):
        for j in range(nc):
            if M[i, j] != 0 and r[i] * M[i, j] * c[j] != 1:
                return None
    return r, c


def polygon_minimal(p: Polytope) -> bool:
    if p.dim != 2:
        raise WrongDimension("polygon_minimal needs a 2-dimensional polytope")
    return len(p.vertices) <= 4


# ---------------------------------------------------------------------------
# octahedra


def _coplanar(points: Sequence[Sequence[Fraction]]) -> bool:
    return rat_det(RatMatrix([[1, *p] for p in points])) == 0


def _vertex_adjacency(p: Polytope) -> list[set[int]]:
    """Graph of the polytope: u, v adjacent iff the facets through both meet exactly in {u, v}."""
    inc = p.incidence()
    nv = len(p.vertices)
    adj: list[set[int]] = [set() for _ in range(nv)]
    for u in range(nv):
        for v in range(u + 1, nv):
            common = [f for f in inc if u in f and v in f]
            if len(common) >= p.dim - 1 and frozenset.intersection(*common) == frozenset((u, v)):
                adj[u].add(v)
                adj[v].add(u)
    return adj


def is_octahedron(p: Polytope) -> bool:
    if p.dim != 3 or len(p.vertices) != 6 or len(p.facets) != 8:
        return False
    if any(len(f) != 3 for f in p.incidence()):
        return False
    return all(len(a) == 4 for a in _vertex_adjacency(p))


def equatorial_quadruples(p: Polytope) -> list[tuple[int, ...]]:
    """Vertex index quadruples left after removing each antipodal (non-adjacent) pair."""
    if not is_octahedron(p):
        raise NotOctahedron("not a combinatorial octahedron")
    adj = _vertex_adjacency(p)
    quads = []
    for u in range(6):
        (v,) = [x for x in range(6) if x != u and x not in adj[u]]
        if u < v:
            quads.append(tuple(x for x in range(6) if x not in (u, v)))
    return quads


def is_biplanar_octahedron(p: Polytope) -> bool:
    """At least two of the three equatorial quadruples are coplanar."""
    quads = equatorial_quadruples(p)
    planar = sum(1 for q in quads if _coplanar([p.vertices[i] for i in q]))
    return planar >= 2


@dataclass(frozen=True)
class OctahedronParams:
    """Octahedron with vertices (0,0,0), (1,0,0), (0,1,0), (a,b,0), z, w."""

    a: Fraction
    b: Fraction
    z: tuple[Fraction, Fraction, Fraction]
    w: tuple[Fraction, Fraction, Fraction]

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))
        z = tuple(as_rational(x) for x in self.z)
        w = tuple(as_rational(x) for x in self.w)
        if len(z) != 3 or len(w) != 3:
            raise DegenerateParams("z and w must be 3-vectors")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "w", w)
        if self.a + self.b <= 1:
            raise DegenerateParams("need a + b > 1")
        if z[2] <= 0 or w[2] >= 0:
            raise DegenerateParams("need z3 > 0 and w3 < 0")

    @property
    def alpha(self) -> Fraction:
        return self.z[2] - self.w[2]

    @property
    def beta(self) -> Fraction:
        return self.w[0] * self.z[2] - self.z[0] * self.w[2]

    @property
    def gamma(self) -> Fraction:
        return self.w[1] * self.z[2] - self.z[1] * self.w[2]

    def vertices(self) -> list[tuple[Fraction, ...]]:
        o, l = Fraction(0), Fraction(1)
        return [(o, o, o), (l, o, o), (o, l, o), (self.a, self.b, o), self.z, self.w]

    def biplanar(self) -> bool:
        """Whether either extra quadruple through z and w is coplanar."""
        return self.b * self.beta == self.a * self.gamma or self.alpha == self.beta + self.gamma


def build_octahedron(q: OctahedronParams) -> Polytope:
    try:
        p = Polytope.from_vertices(q.vertices(), name="octahedron")
    except GeometryError as exc:
        raise DegenerateParams(f"parameters give a degenerate polytope: {exc}") from exc
    if not is_octahedron(p):
        raise DegenerateParams("parameters do not give a combinatorial octahedron")
    return p


def _rand_frac(rng: random.Random, lo: Fraction, hi: Fraction, den: int = 12) -> Fraction:
    """Uniform draw from the grid of step 1/den strictly between lo and hi."""
    a = int(lo * den) + 1
    b = -int(-hi * den) - 1
    if a > b:
        raise DegenerateParams("interval too narrow for the sampling grid")
    return Fraction(rng.randint(a, b), den)


def random_octahedron_params(rng: random.Random, kind: str) -> OctahedronParams:
    """Seeded parameters; ``kind`` is "diagonal", "antidiagonal", or "generic".

    The segment from z to w crosses the plane z=0 at a point ``c`` strictly
    inside the base quadrilateral, which makes the hull an octahedron.
    "diagonal" puts ``c`` on the segment (0,0)-(a,b), "antidiagonal" on
    (1,0)-(0,1), and "generic" keeps it off both.
    """
    while True:
        a = Fraction(rng.randint(4, 12), 4)
        b = Fraction(rng.randint(4, 12), 4)
        if kind == "diagonal":
            t = _rand_frac(rng, Fraction(0), Fraction(1))
            c = (t * a, t * b)
        elif kind == "antidiagonal":
            s = _rand_frac(rng, Fraction(0), Fraction(1))
            c = (s, 1 - s)
        elif kind == "generic":
            c = (_rand_frac(rng, Fraction(0), a), _rand_frac(rng, Fraction(0), b))
            if b * c[0] == a * c[1] or c[0] + c[1] == 1:
                continue
        else:
            raise ValueError(f"unknown kind {kind!r}")
        if not _inside_quad(c, a, b):
            continue
        z = (c[0] + Fraction(rng.randint(-4, 4), 4), c[1] + Fraction(rng.randint(-4, 4), 4),
             Fraction(rng.randint(1, 4)))
        mu = Fraction(rng.randint(1, 8), 4)
        w = tuple(ci + mu * (ci - zi) for ci, zi in zip((*c, Fraction(0)), z))
        return OctahedronParams(a, b, z, w)


def _inside_quad(c: tuple[Fraction, Fraction], a: Fraction, b: Fraction) -> bool:
    quad = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (a, b), (Fraction(0), Fraction(1))]
    for k in range(4):
        (x0, y0), (x1, y1) = quad[k], quad[(k + 1) % 4]
        if (x1 - x0) * (c[1] - y0) - (y1 - y0) * (c[0] - x0) <= 0:
            return False
    return True


# ---------------------------------------------------------------------------
# 3D combinatorial types


class Tag(str, Enum):
    SIMPLEX = "Simplex"
    QUAD_PYRAMID = "QuadPyramid"
    BISIMPLEX = "Bisimplex"
    TRIANGULAR_PRISM = "TriangularPrism"
    OCTAHEDRON = "Octahedron"
    CUBOID = "Cuboid"
    OTHER = "Other"


POLAR_TAG = {
    Tag.SIMPLEX: Tag.SIMPLEX,
    Tag.QUAD_PYRAMID: Tag.QUAD_PYRAMID,
    Tag.BISIMPLEX: Tag.TRIANGULAR_PRISM,
    Tag.TRIANGULAR_PRISM: Tag.BISIMPLEX,
    Tag.OCTAHEDRON: Tag.CUBOID,
    Tag.CUBOID: Tag.OCTAHEDRON,
    Tag.OTHER: Tag.OTHER,
}


@dataclass(frozen=True)
class CombType3D:
    tag: Tag
    counts: tuple[int, int, int, int]  # (v_t, v_q, f_t, f_q)
    minimal: bool
    vertex_degrees: tuple[int, ...] = ()
    facet_sizes: tuple[int, ...] = ()


def _degrees_and_sizes(p: Polytope) -> tuple[list[int], list[int]]:
    adj = _vertex_adjacency(p)
    return [len(a) for a in adj], [len(f) for f in p.incidence()]


def _tag(v: int, f: int, degrees: list[int], sizes: list[int]) -> Tag:
    if v == 4 and f == 4:
        return Tag.SIMPLEX
    if v == 5 and f == 5 and sorted(sizes) == [3, 3, 3, 3, 4]:
        return Tag.QUAD_PYRAMID
    if v == 5 and f == 6 and all(s == 3 for s in sizes):
        return Tag.BISIMPLEX
    if v == 6 and f == 5 and sorted(sizes) == [3, 3, 4, 4, 4]:
        return Tag.TRIANGULAR_PRISM
    if v == 6 and f == 8 and all(s == 3 for s in sizes) and all(d == 4 for d in degrees):
        return Tag.OCTAHEDRON
    if v == 8 and f == 6 and all(s == 4 for s in sizes):
        return Tag.CUBOID
    return Tag.OTHER


def classify_3d(p: Polytope) -> CombType3D:
    """Combinatorial type of a 3-polytope and whether its psd rank is 4."""
    if p.dim != 3:
        raise WrongDimension("classify_3d needs a 3-dimensional polytope")
    degrees, sizes = _degrees_and_sizes(p)
    counts = (degrees.count(3), degrees.count(4), sizes.count(3), sizes.count(4))
    tag = _tag(len(p.vertices), len(p.facets), degrees, sizes)
    if tag in (Tag.SIMPLEX, Tag.QUAD_PYRAMID, Tag.BISIMPLEX, Tag.TRIANGULAR_PRISM):
        minimal = True
    elif tag is Tag.OCTAHEDRON:
        minimal = is_biplanar_octahedron(p)
    elif tag is Tag.CUBOID:
        minimal = is_biplanar_octahedron(polar(p))
    else:
        minimal = False
    return CombType3D(tag, counts, minimal, tuple(degrees), tuple(sizes))


# ---------------------------------------------------------------------------
# double simplices


@dataclass(frozen=True)
class DoubleSimplexReport:
    n: int
    kernel_dim: int
    kernel_generator: tuple[Fraction, ...]
    obstructed: bool


def double_simplex_support(n: int) -> RatMatrix:
    """Support of an (n+2) x 2n double simplex slack matrix, apexes first and last."""
    top = [0] * n + [1] * n
    mid = [[int(i == j) for j in range(n)] * 2 for i in range(n)]
    bottom = [1] * n + [0] * n
    return RatMatrix([top, *mid, bottom])


def double_simplex_obstruction(n: int) -> DoubleSimplexReport:
    """Left kernel of the double simplex support matrix and the 2-level test.

    A 2-level realization would have this 0/1 matrix as its slack matrix,
    so its left kernel would also annihilate the all-ones column of the
    homogenized vertex matrix; that fails exactly when the generator does
    not sum to zero.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    M = double_simplex_support(n)
    ker = rat_nullspace(M.T)
    gen: tuple[Fraction, ...] = ()
    if ker:
        v = ker[0]
        lead = next(x for x in v if x != 0)
        gen = tuple(x / lead for x in v)
    obstructed = len(ker) == 1 and sum(gen) != 0
    return DoubleSimplexReport(n, len(ker), gen, obstructed)


# ---------------------------------------------------------------------------
# seeded samplers


def random_polytope_with_extra_vertex(rng: random.Random, n: int, box: int = 6) -> Polytope:
    """A random full-dimensional polytope in R^n with exactly n+2 vertices."""
    while True:
        pts = {tuple(Fraction(rng.randint(-box, box)) for _ in range(n)) for _ in range(n + 2)}
        if len(pts) != n + 2:
            continue
        try:
            return Polytope.from_vertices(sorted(pts))
        except GeometryError:
            continue


def _random_unimodular(rng: random.Random, n: int) -> list[list[int]]:
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        k = rng.choice((-2, -1, 1, 2))
        U[i] = [x + k * y for x, y in zip(U[i], U[j])]
    return U


def random_affine_image(p: Polytope, rng: random.Random) -> Polytope:
    """Image of ``p`` under a random integer unimodular map plus translation."""
    n = p.dim
    U = _random_unimodular(rng, n)
    t = [rng.randint(-3, 3) for _ in range(n)]
    pts = [tuple(sum(U[i][k] * x[k] for k in range(n)) + t[i] for i in range(n)) for x in p.vertices]
    return Polytope.from_vertices(pts)


def slack_rank_ok(p: Polytope) -> bool:
    return rat_rank(slack_matrix(p).matrix) == p.dim + 1
