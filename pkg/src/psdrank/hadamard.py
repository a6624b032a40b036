"""Minimum rank over Hadamard square roots.

Every Hadamard square root of a nonnegative matrix ``M`` has entries
``+-sqrt(M_ij)``, so minimizing rank is a finite search over sign patterns.
Negating a row or column never changes rank; fixing the signs on a spanning
forest of the bipartite support graph picks one representative per
row/column flip class. The remaining free signs are searched depth first,
column by column, pruning any prefix whose column block already has rank at
least the incumbent. Ranks are screened in floating point and every
improving candidate is re-ranked exactly.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
import scipy.linalg

from .errors import BudgetExceeded, NegativeEntry
from .exactnum import RatMatrix, Surd, SurdMatrix, surd_rank

DEFAULT_BUDGET = 1 << 24
DEFAULT_FLOAT_TOL = 1e-9
PARALLEL_MIN_FREE_BITS = 12
STRUCTURAL_NODE_LIMIT = 50_000

Position = tuple[int, int]


@dataclass(frozen=True)
class SignPattern:
    """Signs on the support of a matrix; ``1`` in ``signs`` means negative."""

    support: tuple[Position, ...]
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.support) != len(self.signs):
            raise ValueError("one sign per support position")
        if list(self.support) != sorted(self.support):
            raise ValueError("support positions must be sorted row-major")

    def apply(self, root: SurdMatrix) -> SurdMatrix:
        rows = [list(r) for r in root.rows]
        for (i, j), s in zip(self.support, self.signs):
            rows[i][j] = -abs(rows[i][j]) if s else abs(rows[i][j])
        return SurdMatrix(rows)

    @classmethod
    def of(cls, root: SurdMatrix) -> SignPattern:
        support = tuple((i, j) for i, r in enumerate(root.rows) for j, x in enumerate(r) if not x.is_zero())
        return cls(support, tuple(int(root[p].sign() < 0) for p in support))


@dataclass(frozen=True)
class SignClass:
    """A sign pattern normalized to ``+`` on every spanning-forest position."""

    pattern: SignPattern
    forest: frozenset[Position]

    @classmethod
    def of(cls, root: SurdMatrix) -> SignClass:
        plan = _SearchPlan.build(root.square())
        pattern = SignPattern.of(root)
        sign = dict(zip(pattern.support, pattern.signs))
        row_flip: dict[int, int] = {}
        col_flip: dict[int, int] = {}
        # walk the forest: each forest edge decides the flip of its newly reached endpoint
        adj: dict[tuple[str, int], list[tuple[tuple[str, int], Position]]] = {}
        for i, j in plan.forest:
            adj.setdefault(("r", i), []).append((("c", j), (i, j)))
            adj.setdefault(("c", j), []).append((("r", i), (i, j)))
        for start in sorted(adj):
            key = start
            flips = row_flip if key[0] == "r" else col_flip
            if key[1] in flips:
                continue
            flips[key[1]] = 0
            stack = [key]
            while stack:
                node = stack.pop()
                node_flip = (row_flip if node[0] == "r" else col_flip)[node[1]]
                for other, (i, j) in adj.get(node, []):
                    target = row_flip if other[0] == "r" else col_flip
                    if other[1] not in target:
                        target[other[1]] = sign[(i, j)] ^ node_flip
                        stack.append(other)
        signs = tuple(
            sign[(i, j)] ^ row_flip.get(i, 0) ^ col_flip.get(j, 0) for i, j in pattern.support
        )
        return cls(SignPattern(pattern.support, signs), frozenset(plan.forest))


@dataclass(frozen=True)
class SqrtRankResult:
    min_rank: int
    witness: SurdMatrix
    classes_searched: int
    pruned: int
    certified: bool = True
    total_classes: int = 1
    lower_bound: int = 0


# ---------------------------------------------------------------------------
# helpers


def positive_sqrt(M: RatMatrix | Sequence[Sequence[Any]]) -> SurdMatrix:
    """The all-nonnegative Hadamard square root."""
    if not isinstance(M, RatMatrix):
        M = RatMatrix(M)
    for r in M.rows:
        for x in r:
            if x < 0:
                raise NegativeEntry(f"entry {x} is negative")
    return SurdMatrix([[Surd.sqrt(x) for x in r] for r in M.rows])


def hadamard_square(A: RatMatrix | SurdMatrix) -> RatMatrix:
    if isinstance(A, SurdMatrix):
        return A.square()
    if not isinstance(A, RatMatrix):
        A = RatMatrix(A)
    return RatMatrix([[x * x for x in r] for r in A.rows])


def float_rank(A: np.ndarray, tol: float = DEFAULT_FLOAT_TOL) -> int:
    """Rank by column-pivoted QR, counting diagonal entries above ``tol`` times the largest."""
    if A.size == 0:
        return 0
    R = scipy.linalg.qr(A, mode="r", pivoting=True, check_finite=False)[0]
    diag = np.abs(np.diagonal(R))
    if diag.size == 0 or diag[0] == 0.0:
        return 0
    return int(np.count_nonzero(diag > tol * diag[0]))


def structural_lower_bound(M: RatMatrix, node_limit: int = STRUCTURAL_NODE_LIMIT) -> int:
    """Size of the largest triangular nonzero pattern found in ``M``.

    A square submatrix that is lower triangular with nonzero diagonal after
    permuting rows and columns stays nonsingular under every sign choice, so
    its size bounds the rank of every Hadamard square root from below. The
    search is exhaustive up to ``node_limit`` nodes, then returns the best
    found, which is still a valid bound.
    """
    best = 0
    pats = [[[x != 0 for x in r] for r in M.rows]]
    pats.append([list(c) for c in zip(*pats[0])] if pats[0] else [])
    for pat in pats:
        if not pat or not pat[0]:
            continue
        nr, nc = len(pat), len(pat[0])
        zero_rows = [sum(1 << i for i in range(nr) if not pat[i][c]) for c in range(nc)]
        nz_rows = [sum(1 << i for i in range(nr) if pat[i][c]) for c in range(nc)]
        seen: dict[tuple[int, int], int] = {}
        nodes = 0

        def go(R: int, C: int, depth: int) -> None:
            nonlocal best, nodes
            if depth > best:
                best = depth
            if nodes >= node_limit:
                return
            nodes += 1
            if seen.get((R, C), -1) >= depth:
                return
            seen[(R, C)] = depth
            cands = [c for c in range(nc) if C >> c & 1 and nz_rows[c] & R]
            live_rows = 0
            for c in cands:
                live_rows |= nz_rows[c] & R
            if depth + min(bin(live_rows).count("1"), len(cands)) <= best:
                return
            cands.sort(key=lambda c: -bin(zero_rows[c] & R).count("1"))
            for c in cands:
                go(R & zero_rows[c], C & ~(1 << c), depth + 1)

        go((1 << nr) - 1, (1 << nc) - 1, 0)
    return best


# ---------------------------------------------------------------------------
# search


@dataclass
class _SearchPlan:
    shape: tuple[int, int]
    roots: list[list[Surd]]
    mags: np.ndarray
    col_order: list[int]
    forest: list[Position]
    free: list[Position]
    checkpoints: list[list[int]]  # columns completed right after assigning free bit k (index k+1); [0] before any bit

    @classmethod
    def build(cls, M: RatMatrix) -> _SearchPlan:
        nr, nc = M.shape
        roots = [[Surd.sqrt(x) for x in r] for r in M.rows]
        mags = np.array([[float(s) for s in r] for r in roots], dtype=float).reshape(nr, nc)
        nnz = [sum(1 for i in range(nr) if M.rows[i][j] != 0) for j in range(nc)]
        col_order = sorted((j for j in range(nc) if nnz[j]), key=lambda j: (nnz[j], j))
        parent = list(range(nr + nc))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        forest: list[Position] = []
        free: list[Position] = []
        for j in col_order:
            for i in range(nr):
                if M.rows[i][j] == 0:
                    continue
                a, b = find(i), find(nr + j)
                if a != b:
                    parent[a] = b
                    forest.append((i, j))
                else:
                    free.append((i, j))
        # columns whose free positions are all assigned once bit k is set
        col_last: dict[int, int] = {}
        for k, (_, j) in enumerate(free):
            col_last[j] = k
        checkpoints: list[list[int]] = [[] for _ in range(len(free) + 1)]
        done_upto = -1
        for j in col_order:
            done_upto = max(done_upto, col_last.get(j, -1))
            checkpoints[done_upto + 1].append(j)
        return cls((nr, nc), roots, mags, col_order, forest, free, checkpoints)

    @property
    def n_free(self) -> int:
        return len(self.free)

    def root_for(self, bits: Sequence[int]) -> SurdMatrix:
        rows = [list(r) for r in self.roots]
        for (i, j), b in zip(self.free, bits):
            if b:
                rows[i][j] = -rows[i][j]
        return SurdMatrix(rows)


class _Stop(Exception):
    pass


class _Searcher:
    def __init__(self, plan: _SearchPlan, tol: float, lower_bound: int, leaf_budget: int | None):
        self.plan = plan
        self.tol = tol
        self.lower_bound = lower_bound
        self.leaf_budget = leaf_budget
        self.best = math.inf
        self.best_bits: tuple[int, ...] | None = None
        self.searched = 0
        self.pruned = 0
        self.exhausted = True
        self.values = plan.mags.copy()
        self.bits = [0] * plan.n_free
        self.done_cols: list[int] = []

    def run(self, prefix: Sequence[int] = ()) -> None:
        plan = self.plan
        self.done_cols = list(plan.checkpoints[0])
        for k, b in enumerate(prefix):
            self._assign(k, b)
            self.done_cols.extend(plan.checkpoints[k + 1])
        try:
            self._dfs(len(prefix))
        except _Stop:
            pass

    def _assign(self, k: int, b: int) -> None:
        i, j = self.plan.free[k]
        self.bits[k] = b
        self.values[i, j] = -self.plan.mags[i, j] if b else self.plan.mags[i, j]

    def _dfs(self, k: int) -> None:
        plan = self.plan
        n = plan.n_free
        if k == n:
            self._leaf()
            return
        new_cols = plan.checkpoints[k + 1]
        remaining = n - k - 1
        for b in (0, 1):
            self._assign(k, b)
            if new_cols and remaining:
                cols = self.done_cols + new_cols
                r = float_rank(self.values[:, cols], self.tol)
                if r >= self.best:
                    self.pruned += 1 << remaining
                    continue
            mark = len(self.done_cols)
            self.done_cols.extend(new_cols)
            self._dfs(k + 1)
            del self.done_cols[mark:]

    def _leaf(self) -> None:
        self.searched += 1
        r = float_rank(self.values, self.tol)
        if r < self.best:
            exact = surd_rank(self.plan.root_for(self.bits))
            if exact < self.best:
                self.best = exact
                self.best_bits = tuple(self.bits)
        if self.best <= self.lower_bound:
            raise _Stop
        if self.leaf_budget is not None and self.searched >= self.leaf_budget:
            self.exhausted = False
            raise _Stop


def _search_block(rows: list[list[str]], tol: float, prefix: tuple[int, ...], lower_bound: int):
    plan = _SearchPlan.build(RatMatrix(rows))
    s = _Searcher(plan, tol, lower_bound, None)
    s.run(prefix)
    return s.best, s.best_bits, s.searched, s.pruned


def sqrt_rank(
    M: RatMatrix | Sequence[Sequence[Any]],
    budget: int = DEFAULT_BUDGET,
    float_tol: float = DEFAULT_FLOAT_TOL,
    n_jobs: int | None = 1,
    strict: bool = False,
) -> SqrtRankResult:
    """Exact minimum rank over all Hadamard square roots of ``M``.

    ``budget`` caps the number of sign classes ranked. When the class count
    exceeds it, the search still runs lazily in lexicographic order and is
    certified if it finishes (by exhaustion or by reaching the structural
    lower bound) within the budget; otherwise the best rank found so far is
    returned with ``certified=False``, or :class:`BudgetExceeded` is raised
    when ``strict`` is set. ``n_jobs`` greater than one splits the free signs
    into contiguous blocks searched in worker processes; the result does not
    depend on the split.
    """
    if not isinstance(M, RatMatrix):
        M = RatMatrix(M)
    for r in M.rows:
        for x in r:
            if x < 0:
                raise NegativeEntry(f"entry {x} is negative")
    if not M.support():
        return SqrtRankResult(0, positive_sqrt(M), 1, 0, True, 1, 0)
    plan = _SearchPlan.build(M)
    lb = structural_lower_bound(M)
    n = plan.n_free
    total = 1 << n
    jobs = (os.cpu_count() or 1) if n_jobs is None else n_jobs
    if jobs > 1 and n >= PARALLEL_MIN_FREE_BITS and total <= budget:
        h = min(n, max(1, math.ceil(math.log2(jobs * 4))))
        prefixes = list(itertools.product((0, 1), repeat=h))
        rows = [[str(x) for x in r] for r in M.rows]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            outs = list(ex.map(_search_block, [rows] * len(prefixes), [float_tol] * len(prefixes),
                               prefixes, [lb] * len(prefixes)))
        best, best_bits, searched, pruned = math.inf, None, 0, 0
        for b, bits, s, p in outs:
            searched += s
            pruned += p
            if b < best:
                best, best_bits = b, bits
        certified = True
    else:
        s = _Searcher(plan, float_tol, lb, None if total <= budget else budget)
        s.run()
        best, best_bits, searched, pruned = s.best, s.best_bits, s.searched, s.pruned
        certified = s.exhausted or best <= lb
        if not certified and strict:
            raise BudgetExceeded(
                f"{total} sign classes exceed the budget of {budget}; best rank found {best}"
            )
    assert best_bits is not None
    witness = plan.root_for(best_bits)
    return SqrtRankResult(int(best), witness, searched, pruned, certified, total, lb)


def sqrt_rank_lower_bound(
    M: RatMatrix | Sequence[Sequence[Any]],
    submatrix_size: int,
    max_submatrices: int = 256,
    seed: int = 20130601,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """Largest certified ``sqrt_rank`` over ``k x k`` submatrices.

    Every root of ``M`` restricts to a root of each submatrix, so each value
    found is a lower bound for ``sqrt_rank(M)``. All submatrices are tried
    when there are at most ``max_submatrices``; otherwise a seeded sample.
    """
    if not isinstance(M, RatMatrix):
        M = RatMatrix(M)
    k = submatrix_size
    if k > 7:
        raise ValueError("submatrix size is capped at 7")
    if k > min(M.shape):
        raise ValueError("submatrix larger than the matrix")
    row_sets = list(itertools.combinations(range(M.nrows), k))
    col_sets = list(itertools.combinations(range(M.ncols), k))
    count = len(row_sets) * len(col_sets)
    if count <= max_submatrices:
        picks = list(itertools.product(row_sets, col_sets))
    else:
        rng = random.Random(seed)
        picks = sorted(
            {(rng.choice(row_sets), rng.choice(col_sets)) for _ in range(max_submatrices)}
        )
    best = 0
    for rs, cs in picks:
        res = sqrt_rank(M.submatrix(rs, cs), budget=budget, n_jobs=1)
        if res.certified:
            best = max(best, res.min_rank)
            if best == k:
                break
    return best
