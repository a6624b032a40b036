"""Rational polytopes: vertex and facet representations and slack matrices.

Polytopes are always built from vertices. The facet description is
recomputed exactly (double description method on the homogenized cone) and
never taken from input, so slack matrices are internally consistent.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .errors import GeometryError, NotAVertex, NotFullDimensional, TooLarge
from .exactnum import RatMatrix, as_rational, rat_rank

MAX_DIM = 8
MAX_VERTICES = 256

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class VRep:
    dim: int
    points: tuple[Point, ...]

    @classmethod
    def from_points(cls, points: Iterable[Sequence[Any]], dim: int | None = None) -> VRep:
        pts = tuple(tuple(as_rational(x) for x in p) for p in points)
        if not pts:
            raise NotFullDimensional("empty vertex list")
        d = len(pts[0]) if dim is None else dim
        if any(len(p) != d for p in pts):
            raise GeometryError("points do not all have the ambient dimension")
        if len(set(pts)) != len(pts):
            raise NotAVertex("duplicate points in vertex list")
        return cls(d, pts)


@dataclass(frozen=True, order=True)
class Facet:
    """The inequality ``<normal, x> <= offset`` with a primitive integer normal."""

    normal: tuple[int, ...]
    offset: Fraction

    def slack(self, p: Sequence[Fraction]) -> Fraction:
        return self.offset - sum((a * x for a, x in zip(self.normal, p)), Fraction(0))


@dataclass(frozen=True)
class HRep:
    dim: int
    facets: tuple[Facet, ...]


@dataclass(frozen=True)
class Polytope:
    vrep: VRep
    hrep: HRep
    name: str = field(default="", compare=False)

    @classmethod
    def from_vertices(cls, points: Iterable[Sequence[Any]], name: str = "") -> Polytope:
        v = VRep.from_points(points)
        h = facet_enumeration(v)
        return cls(v, h, name)

    @property
    def dim(self) -> int:
        return self.vrep.dim

    @property
    def vertices(self) -> tuple[Point, ...]:
        return self.vrep.points

    @property
    def facets(self) -> tuple[Facet, ...]:
        return self.hrep.facets

    def incidence(self) -> list[frozenset[int]]:
        """For each facet, the set of vertex indices lying on it."""
        return [
            frozenset(i for i, p in enumerate(self.vertices) if f.slack(p) == 0) for f in self.facets
        ]

    def centroid(self) -> Point:
        n = len(self.vertices)
        return tuple(sum(c) / n for c in zip(*self.vertices))


@dataclass(frozen=True)
class SlackMatrix:
    matrix: RatMatrix
    row_labels: tuple[Any, ...]
    col_labels: tuple[Any, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


# ---------------------------------------------------------------------------
# facet enumeration


def _primitive(v: Sequence[int]) -> list[int]:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return [x // g for x in v] if g > 1 else list(v)


def _homogenize(points: Sequence[Point]) -> list[list[int]]:
    out = []
    for p in points:
        row = [Fraction(1), *p]
        lcm = 1
        for x in row:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        out.append([int(x * lcm) for x in row])
    return out


def _initial_rays(H: list[list[int]], basis: list[int]) -> list[list[int]]:
    """Columns of the inverse of the square matrix formed by rows ``basis`` of ``H``."""
    d = len(basis)
    aug = [[Fraction(x) for x in H[b]] + [Fraction(int(i == k)) for k in range(d)] for i, b in enumerate(basis)]
    for col in range(d):
        piv = next(i for i in range(col, d) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(d):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    inv = [r[d:] for r in aug]
    rays = []
    for k in range(d):
        col = [inv[i][k] for i in range(d)]
        lcm = 1
        for x in col:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        rays.append(_primitive([int(x * lcm) for x in col]))
    return rays


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _double_description(H: list[list[int]]) -> list[list[int]]:
    """Extreme rays of the pointed cone ``{y : H y >= 0}``."""
    d = len(H[0])
    basis: list[int] = []
    for i in range(len(H)):
        if rat_rank([H[b] for b in basis] + [H[i]]) > len(basis):
            basis.append(i)
            if len(basis) == d:
                break
    rays_v = _initial_rays(H, basis)
    # zero sets as bitmasks over constraint indices
    rays: list[tuple[list[int], int]] = []
    for k, r in enumerate(rays_v):
        z = 0
        for i, b in enumerate(basis):
            if i != k:
                z |= 1 << b
        rays.append((r, z))
    in_basis = set(basis)
    for j in range(len(H)):
        if j in in_basis:
            continue
        h = H[j]
        plus, zero, minus = [], [], []
        for r, z in rays:
            s = _dot(h, r)
            if s > 0:
                plus.append((r, z, s))
            elif s < 0:
                minus.append((r, z, s))
            else:
                zero.append((r, z | (1 << j)))
        new: list[tuple[list[int], int]] = []
        if plus and minus:
            all_z = [z for _, z in rays]
            for rp, zp, sp in plus:
                for rm, zm, sm in minus:
                    common = zp & zm
                    if bin(common).count("1") < d - 2:
                        continue
                    adjacent = True
                    for z in all_z:
                        if z != zp and z != zm and (z & common) == common:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    v = _primitive([sp * a - sm * b for a, b in zip(rm, rp)])
                    new.append((v, common | (1 << j)))
        rays = [(r, z) for r, z, _ in plus] + zero + new
    return [r for r, _ in rays]


def facet_enumeration(v: VRep) -> HRep:
    """Canonical irredundant facet description of the convex hull of ``v``.

    Raises :class:`NotFullDimensional` when the points do not affinely span
    the ambient space and :class:`NotAVertex` when some listed point is not
    a vertex of the hull.
    """
    n = v.dim
    if n < 1:
        raise NotFullDimensional("dimension must be at least 1")
    if n > MAX_DIM or len(v.points) > MAX_VERTICES:
        raise TooLarge(f"facet enumeration is capped at dim {MAX_DIM} and {MAX_VERTICES} vertices")
    H = _homogenize(v.points)
    if rat_rank(H) != n + 1:
        raise NotFullDimensional("points do not affinely span the ambient space")
    facets = set()
    for y in _double_description(H):
        a = [-x for x in y[1:]]
        g = 0
        for x in a:
            g = math.gcd(g, x)
        facets.add(Facet(tuple(x // g for x in a), Fraction(y[0], g)))
    hrep = HRep(n, tuple(sorted(facets)))
    _check_vertices(v, hrep)
    return hrep


def _check_vertices(v: VRep, h: HRep) -> None:
    for idx, p in enumerate(v.points):
        tight = [f.normal for f in h.facets if f.slack(p) == 0]
        if not tight or rat_rank(tight) < v.dim:
            raise NotAVertex(f"point {idx} is not a vertex of the convex hull")


# ---------------------------------------------------------------------------
# slack matrices and constructions


def slack_matrix(p: Polytope) -> SlackMatrix:
    """Vertices by facets matrix of slacks ``offset_j - <normal_j, p_i>``."""
    rows = [[f.slack(x) for f in p.facets] for x in p.vertices]
    return SlackMatrix(RatMatrix(rows), tuple(range(len(p.vertices))), tuple(range(len(p.facets))))


def polar_slack(s: SlackMatrix) -> SlackMatrix:
    return SlackMatrix(s.matrix.T, s.col_labels, s.row_labels)


def pyramid(p: Polytope, apex_height: Any = 1) -> Polytope:
    """Pyramid with the apex above the centroid of ``p`` (base in ``x_{n+1} = 0``)."""
    h = as_rational(apex_height)
    if h <= 0:
        raise GeometryError("apex height must be positive")
    base = [(*x, Fraction(0)) for x in p.vertices]
    apex = (*p.centroid(), h)
    return Polytope.from_vertices(base + [apex], name=f"pyramid({p.name})" if p.name else "")


def bipyramid(p: Polytope) -> Polytope:
    """Bipyramid with apexes at heights +1 and -1 above the centroid of ``p``."""
    c = p.centroid()
    base = [(*x, Fraction(0)) for x in p.vertices]
    pts = base + [(*c, Fraction(1)), (*c, Fraction(-1))]
    return Polytope.from_vertices(pts, name=f"bipyramid({p.name})" if p.name else "")


def facet_as_polytope(p: Polytope, facet_index: int) -> Polytope:
    """The facet as a full-dimensional polytope one dimension down.

    Coordinates come from dropping one coordinate along which the facet
    normal is nonzero, an affine isomorphism of the facet hyperplane.
    """
    f = p.facets[facet_index]
    drop = next(k for k, a in enumerate(f.normal) if a != 0)
    pts = [tuple(x for k, x in enumerate(v) if k != drop) for v in p.vertices if f.slack(v) == 0]
    return Polytope.from_vertices(pts)


def polar(p: Polytope) -> Polytope:
    """Polar of ``p`` after translating its vertex centroid to the origin."""
    c = p.centroid()
    pts = []
    for f in p.facets:
        off = f.slack(c)
        pts.append(tuple(Fraction(a) / off for a in f.normal))
    return Polytope.from_vertices(pts, name=f"polar({p.name})" if p.name else "")


def simplex(n: int) -> Polytope:
    pts = [tuple(Fraction(0) for _ in range(n))]
    pts += [tuple(Fraction(int(i == k)) for k in range(n)) for i in range(n)]
    return Polytope.from_vertices(pts, name=f"simplex{n}")


def cube(n: int) -> Polytope:
    pts = [tuple(Fraction(b) for b in bits) for bits in itertools.product((0, 1), repeat=n)]
    return Polytope.from_vertices(pts, name=f"cube{n}")


def cross_polytope(n: int) -> Polytope:
    pts = []
    for i in range(n):
        for s in (1, -1):
            pts.append(tuple(Fraction(s if k == i else 0) for k in range(n)))
    return Polytope.from_vertices(pts, name=f"cross{n}")


# ---------------------------------------------------------------------------
# comparison up to column scaling and permutation


def _normalize_columns(M: RatMatrix) -> list[tuple[Fraction, ...]]:
    cols = []
    for c in zip(*M.rows):
        top = max(c)
        cols.append(tuple(x / top for x in c) if top > 0 else tuple(c))
    return cols


def equivalent_up_to_scaling(A: RatMatrix, B: RatMatrix) -> bool:
    """True iff ``B`` is ``A`` after positive column scaling and row/column permutations."""
    if A.shape != B.shape:
        return False
    ca = _normalize_columns(A)
    cb = _normalize_columns(B)
    ra = [tuple(col[i] for col in ca) for i in range(A.nrows)]
    rb = [tuple(col[i] for col in cb) for i in range(B.nrows)]
    sig_a = [tuple(sorted(r)) for r in ra]
    sig_b = [tuple(sorted(r)) for r in rb]
    if sorted(sig_a) != sorted(sig_b):
        return False
    target = sorted(cb)
    n = A.nrows
    used = [False] * n
    perm: list[int] = []

    def extend(i: int) -> bool:
        if i == n:
            cols = sorted(tuple(col[perm[k]] for k in range(n)) for col in ca)
            return cols == target
        for k in range(n):
            if not used[k] and sig_a[k] == sig_b[i]:
                used[k] = True
                perm.append(k)
                if extend(i + 1):
                    return True
                perm.pop()
                used[k] = False
        return False

    return extend(0)
