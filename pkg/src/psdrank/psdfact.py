"""psd factorizations and certified bounds on psd rank.

A psd factorization of size ``k`` of a nonnegative matrix ``M`` assigns a
``k x k`` psd matrix ``A_i`` to each row and ``B_j`` to each column with
``Tr(A_i B_j) = M_ij``. Factorizations are checked exactly, entry by entry.
The bounds engine combines the applicable lower and upper bounds into an
interval and records which rule produced each end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Sequence

from .errors import (
    DimensionMismatch,
    InvalidCertificate,
    IrrationalFactor,
    NonPositiveAlpha,
    TooLarge,
    WrongDimension,
)
from .exactnum import (
    FieldElem,
    FieldMatrix,
    RatMatrix,
    Surd,
    SurdMatrix,
    as_rational,
    is_psd,
    normalize_surd_matrix,
    rat_rank,
    sym_rank,
    trace_inner,
)
from .hadamard import DEFAULT_BUDGET, DEFAULT_FLOAT_TOL, SqrtRankResult, sqrt_rank
from .polytope import Polytope, facet_as_polytope, slack_matrix

Factor = RatMatrix | FieldMatrix


@dataclass(frozen=True)
class PsdFactorization:
    k: int
    row_factors: tuple[Factor, ...]
    col_factors: tuple[Factor, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "row_factors", tuple(self.row_factors))
        object.__setattr__(self, "col_factors", tuple(self.col_factors))
        for f in self.row_factors + self.col_factors:
            if f.shape != (self.k, self.k):
                raise DimensionMismatch(f"factor of shape {f.shape} in a size-{self.k} factorization")

    @property
    def is_rational(self) -> bool:
        return all(isinstance(f, RatMatrix) for f in self.row_factors + self.col_factors)


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    k: int
    max_row_factor_rank: int
    max_col_factor_rank: int
    row_factor_ranks: tuple[int, ...] = ()
    col_factor_ranks: tuple[int, ...] = ()
    problems: tuple[str, ...] = ()


def verify_factorization(M: RatMatrix, F: PsdFactorization) -> VerificationReport:
    """Check symmetry, psd-ness and every trace inner product exactly."""
    if not isinstance(M, RatMatrix):
        M = RatMatrix(M)
    if len(F.row_factors) != M.nrows or len(F.col_factors) != M.ncols:
        raise DimensionMismatch(
            f"{len(F.row_factors)}x{len(F.col_factors)} factors for a {M.nrows}x{M.ncols} matrix"
        )
    problems: list[str] = []
    ranks: dict[str, list[int]] = {"row": [], "column": []}
    for kind, factors in (("row", F.row_factors), ("column", F.col_factors)):
        for idx, f in enumerate(factors):
            if not f.is_symmetric():
                problems.append(f"{kind} factor {idx} is not symmetric")
                ranks[kind].append(0)
                continue
            if not is_psd(f):
                problems.append(f"{kind} factor {idx} is not positive semidefinite")
            ranks[kind].append(sym_rank(f))
    if not problems:
        for i, a in enumerate(F.row_factors):
            for j, b in enumerate(F.col_factors):
                if trace_inner(a, b) != M[i, j]:
                    problems.append(f"inner product ({i},{j}) differs from the matrix entry")
    return VerificationReport(
        valid=not problems,
        k=F.k,
        max_row_factor_rank=max(ranks["row"], default=0),
        max_col_factor_rank=max(ranks["column"], default=0),
        row_factor_ranks=tuple(ranks["row"]),
        col_factor_ranks=tuple(ranks["column"]),
        problems=tuple(problems),
    )


# ---------------------------------------------------------------------------
# rank-one factorizations from Hadamard square roots


def _solve_rows(B: list[list[Any]], rows: list[list[Any]], one: Any) -> list[list[Any]]:
    """Coefficients expressing each of ``rows`` in the row space of ``B`` (full row rank)."""
    r = len(B)
    ncols = len(B[0])
    # pivot columns of B by elimination
    work = [list(b) for b in B]
    pivcols: list[int] = []
    row = 0
    for c in range(ncols):
        piv = next((i for i in range(row, r) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[row], work[piv] = work[piv], work[row]
        p = work[row][c]
        for i in range(row + 1, r):
            f = work[i][c] / p
            if f != 0:
                work[i] = [x - f * y for x, y in zip(work[i], work[row])]
        pivcols.append(c)
        row += 1
        if row == r:
            break
    # Gauss-Jordan inverse of the square block B[:, pivcols]
    sq = [[B[i][c] for c in pivcols] + [one if k == i else one * 0 for k in range(r)] for i in range(r)]
    for c in range(r):
        piv = next(i for i in range(c, r) if sq[i][c] != 0)
        sq[c], sq[piv] = sq[piv], sq[c]
        p = sq[c][c]
        sq[c] = [x / p for x in sq[c]]
        for i in range(r):
            if i != c and sq[i][c] != 0:
                f = sq[i][c]
                sq[i] = [x - f * y for x, y in zip(sq[i], sq[c])]
    inv = [s[r:] for s in sq]
    out = []
    for v in rows:
        w = [v[c] for c in pivcols]
        out.append([sum((w[t] * inv[t][s] for t in range(r)), one * 0) for s in range(r)])
    return out


def _outer(v: Sequence[Any], scale: Fraction) -> list[list[Any]]:
    return [[x * y * scale for y in v] for x in v]


def rank_one_factorization(R: SurdMatrix, require_rational: bool = False) -> PsdFactorization:
    """All-rank-one psd factorization of the entrywise square of ``R``.

    ``R`` is factored as ``a_i . b_j`` with vectors of length ``rank(R)``;
    the factors are ``a_i a_i^T`` and ``b_j b_j^T``. Factors are rational
    matrices when possible and otherwise matrices over the field of ``R``
    (after its diagonal square-root rescaling), unless ``require_rational``
    is set, in which case :class:`IrrationalFactor` is raised.
    """
    if not isinstance(R, SurdMatrix):
        R = SurdMatrix(R)
    nr, nc = R.shape
    fm, rs, cs = normalize_surd_matrix(R)
    rows = [list(r) for r in fm.rows]
    fld = fm.field
    one = fld.one()
    basis: list[int] = []
    for i in range(nr):
        cand = [rows[b] for b in basis] + [rows[i]]
        if _row_rank(cand) > len(basis):
            basis.append(i)
    k = len(basis)
    if k == 0:
        zero = RatMatrix.zeros(1, 1)
        return PsdFactorization(1, (zero,) * nr, (zero,) * nc)
    B = [rows[b] for b in basis]
    C = _solve_rows(B, rows, one)
    # a_i = C_i / sqrt(rs_i), b_j = B[:, j] / sqrt(cs_j)
    row_f = [_outer(C[i], Fraction(1, rs[i])) for i in range(nr)]
    col_f = [_outer([B[t][j] for t in range(k)], Fraction(1, cs[j])) for j in range(nc)]
    allf = row_f + col_f
    if all(x.is_rational() for f in allf for r in f for x in r):
        conv = [RatMatrix([[x.rational_value() for x in r] for r in f]) for f in allf]
    elif require_rational:
        raise IrrationalFactor("some rank-one factor has irrational entries")
    else:
        conv = [FieldMatrix(f) for f in allf]
    return PsdFactorization(k, tuple(conv[:nr]), tuple(conv[nr:]))


def _row_rank(rows: list[list[FieldElem]]) -> int:
    from .exactnum import field_rank

    return field_rank(rows)


def rank_one_root(M: RatMatrix, F: PsdFactorization) -> SurdMatrix:
    """Hadamard square root of ``M`` of rank at most ``F.k`` from an all-rank-one factorization.

    Writing ``A_i = a_i a_i^T`` and ``B_j = b_j b_j^T``, the matrix with
    entries ``a_i . b_j`` squares entrywise to ``M`` and has rank at most
    ``k``. Requires rational factors of rank at most one.
    """
    if not F.is_rational:
        raise IrrationalFactor("rank_one_root needs rational factors")
    report = verify_factorization(M, F)
    if not report.valid:
        raise InvalidCertificate("; ".join(report.problems))
    if report.max_row_factor_rank > 1 or report.max_col_factor_rank > 1:
        raise InvalidCertificate("factors must all have rank at most one")

    def vec(A: RatMatrix) -> tuple[list[Fraction], Fraction]:
        # a = A[:, c] / sqrt(A_cc) for any c with A_cc > 0
        c = next((c for c in range(A.nrows) if A[c, c] != 0), None)
        if c is None:
            return [Fraction(0)] * A.nrows, Fraction(1)
        return [A[t, c] for t in range(A.nrows)], A[c, c]

    av = [vec(a) for a in F.row_factors]
    bv = [vec(b) for b in F.col_factors]
    rows = []
    for a, da in av:
        row = []
        for b, db in bv:
            dot = sum((x * y for x, y in zip(a, b)), Fraction(0))
            row.append(Surd(dot) * Surd.sqrt(1 / (da * db)))
        rows.append(row)
    return SurdMatrix(rows)


def extend_matrix(M: RatMatrix, w: Sequence[Any], alpha: Any) -> RatMatrix:
    """The block matrix ``[[M, 0], [w, alpha]]``."""
    if not isinstance(M, RatMatrix):
        M = RatMatrix(M)
    a = as_rational(alpha)
    if a <= 0:
        raise NonPositiveAlpha("alpha must be positive")
    w = [as_rational(x) for x in w]
    if len(w) != M.ncols:
        raise DimensionMismatch(f"w has length {len(w)}, matrix has {M.ncols} columns")
    if any(x < 0 for x in w):
        raise ValueError("w must be nonnegative")
    rows = [list(r) + [Fraction(0)] for r in M.rows]
    rows.append(w + [a])
    return RatMatrix(rows)


# ---------------------------------------------------------------------------
# bounds engine


class Rule(str, Enum):
    QUAD = "QUAD"
    DIM_PLUS_1 = "DIM_PLUS_1"
    SQRT_GAP = "SQRT_GAP"
    FACET_RECURSION = "FACET_RECURSION"
    SQRT_UPPER = "SQRT_UPPER"
    CERT_UPPER = "CERT_UPPER"
    TWO_LEVEL = "TWO_LEVEL"


CITATIONS = {
    Rule.QUAD: "rank M <= k(k+1)/2 for a size-k psd factorization",
    Rule.DIM_PLUS_1: "an n-polytope has psd rank at least n+1",
    Rule.SQRT_GAP: "psd rank n+1 forces a Hadamard square root of rank n+1",
    Rule.FACET_RECURSION: "a facet of psd rank k forces psd rank at least k+1",
    Rule.SQRT_UPPER: "psd rank is at most the rank of any Hadamard square root",
    Rule.CERT_UPPER: "verified psd factorization",
    Rule.TWO_LEVEL: "2-level polytopes have psd rank n+1",
}


@dataclass(frozen=True)
class Reason:
    value: int
    rule: Rule
    citation: str


@dataclass(frozen=True)
class RankInterval:
    lo: int
    hi: int
    lo_reasons: tuple[Reason, ...] = ()
    hi_reasons: tuple[Reason, ...] = ()
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise InvalidCertificate(f"inconsistent bounds [{self.lo}, {self.hi}]")

    @property
    def exact(self) -> bool:
        return self.lo == self.hi


def quadratic_lower_bound(rank: int) -> int:
    """Smallest ``k`` with ``k(k+1)/2 >= rank``."""
    k = (math.isqrt(1 + 8 * rank) - 1) // 2
    while k * (k + 1) // 2 < rank:
        k += 1
    return k


def psd_rank_bounds(
    M: RatMatrix,
    dim: int | None = None,
    certs: Sequence[PsdFactorization] = (),
    polytope: Polytope | None = None,
    budget: int = DEFAULT_BUDGET,
    float_tol: float = DEFAULT_FLOAT_TOL,
    n_jobs: int | None = 1,
    sqrt_result: SqrtRankResult | None = None,
) -> RankInterval:
    """Certified interval for the psd rank of ``M``.

    ``dim`` declares ``M`` to be a slack matrix of a ``dim``-polytope, which
    enables the polytope rules; ``polytope`` additionally enables the facet
    recursion. Every certificate must verify against ``M``.
    """
    from .classify import is_two_level

    if not isinstance(M, RatMatrix):
        M = RatMatrix(M)
    if polytope is not None:
        if dim is None:
            dim = polytope.dim
        elif dim != polytope.dim:
            raise WrongDimension("dim does not match the polytope")
    r = rat_rank(M)
    if dim is not None and r != dim + 1:
        raise WrongDimension(f"a slack matrix of a {dim}-polytope has rank {dim + 1}, got {r}")
    lo: list[Reason] = []
    hi: list[Reason] = []
    notes: list[str] = []

    def add(target: list[Reason], value: int, rule: Rule) -> None:
        target.append(Reason(value, rule, CITATIONS[rule]))

    add(lo, quadratic_lower_bound(r), Rule.QUAD)
    if dim is not None:
        add(lo, dim + 1, Rule.DIM_PLUS_1)

    res = sqrt_result if sqrt_result is not None else sqrt_rank(
        M, budget=budget, float_tol=float_tol, n_jobs=n_jobs
    )
    add(hi, res.min_rank, Rule.SQRT_UPPER)
    if not res.certified:
        notes.append(f"sign search stopped at the budget; rank {res.min_rank} is an upper bound only")
    elif dim is not None and res.min_rank > dim + 1:
        add(lo, dim + 2, Rule.SQRT_GAP)

    if dim is not None and is_two_level(M) is not None:
        add(hi, dim + 1, Rule.TWO_LEVEL)

    if polytope is not None and 2 <= polytope.dim <= 4:
        add(lo, facet_recursive_lower_bound(polytope, budget=budget), Rule.FACET_RECURSION)

    for idx, cert in enumerate(certs):
        report = verify_factorization(M, cert)
        if not report.valid:
            raise InvalidCertificate(f"certificate {idx}: " + "; ".join(report.problems))
        add(hi, cert.k, Rule.CERT_UPPER)

    lo_v = max(x.value for x in lo)
    hi_v = min(x.value for x in hi)
    return RankInterval(
        lo_v,
        hi_v,
        tuple(x for x in lo if x.value == lo_v),
        tuple(x for x in hi if x.value == hi_v),
        tuple(notes),
    )


def facet_recursive_lower_bound(p: Polytope, budget: int = DEFAULT_BUDGET) -> int:
    """Lower bound from the polytope itself and, recursively, its facets.

    A polytope's own bound is ``dim+2`` when a certified sign search shows
    no Hadamard square root of its slack matrix has rank ``dim+1``, else
    ``dim+1``. Each facet's bound plus one is also a bound.
    """
    if p.dim > 4:
        raise TooLarge("facet recursion is capped at dimension 4")
    return _facet_bound(p, budget)


def _facet_bound(p: Polytope, budget: int) -> int:
    n = p.dim
    if n <= 1:
        return n + 1
    res = sqrt_rank(slack_matrix(p).matrix, budget=budget, n_jobs=1)
    best = n + 2 if res.certified and res.min_rank > n + 1 else n + 1
    for idx in range(len(p.facets)):
        best = max(best, _facet_bound(facet_as_polytope(p, idx), budget) + 1)
    return best
