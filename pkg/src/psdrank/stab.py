"""Stable set polytopes of small graphs and minimality of their psd rank.

Perfectness is decided by brute force (no induced odd cycle of length at
least five in the graph or its complement). Minimality is decided
independently from the slack matrix: a 2-level slack matrix gives psd rank
``n+1``, while a square submatrix of a face's slack matrix with no low-rank
Hadamard square root rules it out.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import TooLarge
from .exactnum import RatMatrix
from .hadamard import DEFAULT_BUDGET, sqrt_rank
from .polytope import Polytope, equivalent_up_to_scaling, slack_matrix

MAX_GRAPH_VERTICES = 12
MAX_STAB_VERTICES = 8

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Simple graph on vertices ``1..n``."""

    n: int
    edges: frozenset[Edge]

    def __init__(self, n: int, edges: Iterable[Iterable[int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        if n > MAX_GRAPH_VERTICES:
            raise TooLarge(f"graphs are capped at {MAX_GRAPH_VERTICES} vertices")
        es = set()
        for e in edges:
            i, j = (int(x) for x in e)
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"edge {(i, j)} outside 1..{n}")
            es.add((min(i, j), max(i, j)))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(es))

    def adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def complement(self) -> Graph:
        return Graph(self.n, [e for e in itertools.combinations(range(1, self.n + 1), 2) if e not in self.edges])

    def induced(self, vertices: Iterable[int]) -> Graph:
        """Induced subgraph, relabelled ``1..k`` in the given vertex order."""
        vs = list(vertices)
        pos = {v: k + 1 for k, v in enumerate(vs)}
        return Graph(len(vs), [(pos[i], pos[j]) for i, j in self.edges if i in pos and j in pos])

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, i % n + 1) for i in range(1, n + 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(1, n + 1), 2))


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(1, n)])


@dataclass(frozen=True)
class StableSetFamily:
    n: int
    sets: tuple[tuple[int, ...], ...]

    def vectors(self) -> list[tuple[int, ...]]:
        return [tuple(int(v in s) for v in range(1, self.n + 1)) for s in self.sets]


def stable_sets(g: Graph) -> StableSetFamily:
    """All stable sets in lexicographic order of their sorted vertex tuples."""
    out: list[tuple[int, ...]] = []

    def grow(current: list[int], start: int) -> None:
        out.append(tuple(current))
        for v in range(start, g.n + 1):
            if all(not g.adjacent(u, v) for u in current):
                current.append(v)
                grow(current, v + 1)
                current.pop()

    grow([], 1)
    return StableSetFamily(g.n, tuple(out))


def stab_polytope(g: Graph) -> Polytope:
    if g.n > MAX_STAB_VERTICES:
        raise TooLarge(f"stable set polytopes are capped at {MAX_STAB_VERTICES} graph vertices")
    fam = stable_sets(g)
    return Polytope.from_vertices(fam.vectors(), name="stab")


# ---------------------------------------------------------------------------
# perfectness


def _is_cycle(g: Graph, vs: tuple[int, ...]) -> list[int] | None:
    """Cyclic vertex order if ``vs`` induces a chordless cycle in ``g``."""
    nbrs = {v: [u for u in vs if u != v and g.adjacent(u, v)] for v in vs}
    if any(len(x) != 2 for x in nbrs.values()):
        return None
    order = [vs[0]]
    prev, cur = None, vs[0]
    while True:
        nxt = nbrs[cur][0] if nbrs[cur][0] != prev else nbrs[cur][1]
        if nxt == vs[0]:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    return order if len(order) == len(vs) else None


def find_odd_hole(g: Graph) -> list[int] | None:
    """Vertices of a shortest induced odd cycle of length at least 5, in cyclic order."""
    for k in range(5, g.n + 1, 2):
        for vs in itertools.combinations(range(1, g.n + 1), k):
            order = _is_cycle(g, vs)
            if order is not None:
                return order
    return None


def is_perfect(g: Graph) -> bool:
    return find_odd_hole(g) is None and find_odd_hole(g.complement()) is None


# ---------------------------------------------------------------------------
# minimality


def odd_hole_submatrix(m: int) -> RatMatrix:
    """The (2m+3)-square slack submatrix of the stable set polytope of an odd cycle.

    Rows: the empty set, the singletons {1}..{2m+1}, then {1,3}. Columns:
    x1+x2 <= 1, x_i >= 0 for each i, and x_1+...+x_{2m+1} <= m.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    size = 2 * m + 3
    rows = []
    for r in range(size):
        row = [Fraction(0)] * size
        if r == 0:
            row[0], row[-1] = Fraction(1), Fraction(m)
        elif r in (1, 2):
            row[r], row[-1] = Fraction(1), Fraction(m - 1)
        elif r < size - 1:
            row[0], row[r], row[-1] = Fraction(1), Fraction(1), Fraction(m - 1)
        else:
            row[1], row[3], row[-1] = Fraction(1), Fraction(1), Fraction(m - 2)
        rows.append(row)
    return RatMatrix(rows)


@dataclass(frozen=True)
class StabReport:
    n: int
    perfect: bool
    minimal_psd_rank: bool | None
    agree: bool
    method: str
    face_vertices: tuple[int, ...] = ()
    certificate_size: int = 0
    certificate_sqrt_rank: int = 0


def _labelled_slack(p: Polytope, g: Graph) -> tuple[RatMatrix, list[tuple[int, ...]], list[tuple[tuple[int, ...], Fraction]]]:
    s = slack_matrix(p).matrix
    row_labels = [tuple(i + 1 for i, x in enumerate(v) if x == 1) for v in p.vertices]
    col_labels = [(f.normal, f.offset) for f in p.facets]
    return s, row_labels, col_labels


def _face_refutation(h: Graph, budget: int) -> tuple[int, int] | None:
    """Find a square slack submatrix of STAB(h) with Hadamard square-root rank above n+1.

    Rows are the empty set, all singletons and one further stable set;
    columns are the nonnegativity facets, the facet with all-ones normal
    and one further facet. Returns (size, sqrt rank) of the first success.
    """
    n = h.n
    p = stab_polytope(h)
    s, rows, cols = _labelled_slack(p, h)
    base_rows = [rows.index(()), *(rows.index((v,)) for v in range(1, n + 1))]
    nonneg = [k for k, (a, _) in enumerate(cols) if sum(abs(x) for x in a) == 1 and min(a) < 0]
    total = [k for k, (a, _) in enumerate(cols) if all(x == 1 for x in a)]
    if len(nonneg) != n or len(total) != 1:
        return None
    base_cols = nonneg + total
    extra_rows = [k for k in range(len(rows)) if k not in base_rows]
    extra_cols = [k for k in range(len(cols)) if k not in base_cols]
    for er in extra_rows:
        for ec in extra_cols:
            sub = s.submatrix(base_rows + [er], base_cols + [ec])
            res = sqrt_rank(sub, budget=budget, n_jobs=1)
            if res.certified and res.min_rank > n + 1:
                return n + 2, res.min_rank
    return None


def stab_minimal_check(g: Graph, budget: int = DEFAULT_BUDGET) -> StabReport:
    """Compare perfectness with minimality of the psd rank of STAB(g).

    Minimality is established when the slack matrix is 2-level. It is
    refuted by an induced odd cycle or odd anti-cycle ``h`` whose stable set
    polytope (a face of STAB(g)) has a slack submatrix of size ``|h|+2``
    with no Hadamard square root of rank ``|h|+1``. Otherwise a direct
    sign search on the full slack matrix decides, when affordable.
    """
    from .classify import is_two_level

    perfect = is_perfect(g)
    p = stab_polytope(g)
    s = slack_matrix(p).matrix
    if is_two_level(s) is not None:
        return StabReport(g.n, perfect, True, perfect is True, "two-level")
    for kind, graph in (("odd hole", g), ("odd antihole", g.complement())):
        hole = find_odd_hole(graph)
        if hole is None:
            continue
        h = graph.induced(hole)
        if kind == "odd antihole":
            h = h.complement()
        ref = _face_refutation(h, budget)
        if ref is not None:
            return StabReport(g.n, perfect, False, perfect is False, kind, tuple(hole), ref[0], ref[1])
    res = sqrt_rank(s, budget=budget, n_jobs=1)
    if res.certified:
        minimal = res.min_rank == g.n + 1
        return StabReport(g.n, perfect, minimal, perfect == minimal, "sign search", (), s.nrows, res.min_rank)
    return StabReport(g.n, perfect, None, False, "undecided")


def odd_hole_in_slack(m: int) -> bool:
    """Whether odd_hole_submatrix(m) is, up to scaling, the labelled submatrix of the cycle's slack."""
    c = cycle_graph(2 * m + 1)
    p = stab_polytope(c)
    s, rows, cols = _labelled_slack(p, c)
    n = 2 * m + 1
    want_rows = [(), *((v,) for v in range(1, n + 1)), (1, 3)]
    r_idx = [rows.index(r) for r in want_rows]
    edge = tuple([1, 1] + [0] * (n - 2))
    c_idx = [next(k for k, (a, _) in enumerate(cols) if a == edge)]
    for v in range(n):
        unit = tuple(-1 if k == v else 0 for k in range(n))
        c_idx.append(next(k for k, (a, _) in enumerate(cols) if a == unit))
    c_idx.append(next(k for k, (a, _) in enumerate(cols) if all(x == 1 for x in a)))
    return equivalent_up_to_scaling(s.submatrix(r_idx, c_idx), odd_hole_submatrix(m))


# ---------------------------------------------------------------------------
# graph enumeration


def canonical_form(g: Graph) -> tuple[Edge, ...]:
    best: tuple[Edge, ...] | None = None
    for perm in itertools.permutations(range(1, g.n + 1)):
        pos = {v: perm[v - 1] for v in range(1, g.n + 1)}
        key = tuple(sorted((min(pos[i], pos[j]), max(pos[i], pos[j])) for i, j in g.edges))
        if best is None or key < best:
            best = key
    return best or ()


def nonisomorphic_graphs(n: int) -> list[Graph]:
    """One representative per isomorphism class of graphs on ``n`` vertices (small n)."""
    if n > 6:
        raise TooLarge("isomorphism classes are enumerated by brute force only up to 6 vertices")
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    seen: dict[tuple[Edge, ...], Graph] = {}
    for mask in range(1 << len(pairs)):
        g = Graph(n, [e for k, e in enumerate(pairs) if mask >> k & 1])
        key = canonical_form(g)
        if key not in seen:
            seen[key] = Graph(n, key)
    return [seen[k] for k in sorted(seen, key=lambda k: (len(k), k))]
