"""Exact arithmetic kernel.

Rationals are :class:`fractions.Fraction`. Square roots of rationals are
:class:`Surd` values ``c*sqrt(d)`` with ``d`` squarefree, and matrices of
surds are ranked exactly over a multiquadratic field
``Q(sqrt(g_1), ..., sqrt(g_m))`` whose generators are chosen per matrix.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import (
    FieldTooLarge,
    NegativeEntry,
    NotSymmetric,
    ParseError,
    RadicandTooLarge,
    TooLarge,
)

Rational = Fraction

MAX_GENERATORS = 8
TRIAL_DIVISION_LIMIT = 10**6
PSD_MAX_SIZE = 8


def as_rational(x: Any) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational string: {x!r}") from exc
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a rational string or Fraction")
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def format_rational(q: Fraction) -> str:
    return str(q)


# ---------------------------------------------------------------------------
# squarefree decomposition


@lru_cache(maxsize=1 << 14)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of a positive integer as ``((p, e), ...)``.

    Trial division runs up to ``TRIAL_DIVISION_LIMIT``. A cofactor left over
    beyond that is accepted only when it is provably prime or a perfect
    square of something already prime-tested; otherwise it may hide a square
    factor and :class:`RadicandTooLarge` is raised.
    """
    if n <= 0:
        raise ValueError("factorize expects a positive integer")
    out: list[tuple[int, int]] = []
    m = n
    p = 2
    while p * p <= m:
        if p > TRIAL_DIVISION_LIMIT:
            r = math.isqrt(m)
            if r * r == m and r <= TRIAL_DIVISION_LIMIT**2:
                out.append((r, 2))
                return tuple(out)
            raise RadicandTooLarge(f"cannot certify squarefree part of {n}")
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(k, s)`` with ``n == k*k*s`` and ``s`` squarefree."""
    k, s = 1, 1
    for p, e in factorize(n):
        k *= p ** (e // 2)
        if e % 2:
            s *= p
    return k, s


def squarefree_part(n: int) -> int:
    return squarefree_decompose(n)[1]


# ---------------------------------------------------------------------------
# surds


@dataclass(frozen=True)
class Surd:
    """The real number ``coeff * sqrt(radicand)``."""

    coeff: Fraction
    radicand: int = 1

    def __post_init__(self) -> None:
        c = as_rational(self.coeff)
        d = int(self.radicand)
        if d <= 0:
            raise ValueError("radicand must be positive")
        if c == 0:
            d = 1
        else:
            k, d = squarefree_decompose(d)
            c *= k
        object.__setattr__(self, "coeff", c)
        object.__setattr__(self, "radicand", d)

    @classmethod
    def sqrt(cls, q: Any) -> Surd:
        """Nonnegative square root of a nonnegative rational."""
        q = as_rational(q)
        if q < 0:
            raise NegativeEntry(f"negative entry {q} has no real square root")
        if q == 0:
            return cls(Fraction(0))
        return cls(Fraction(1, q.denominator), q.numerator * q.denominator)

    @classmethod
    def parse(cls, text: str) -> Surd:
        s = text.replace(" ", "")
        if "sqrt(" not in s:
            return cls(as_rational(s))
        head, _, tail = s.partition("sqrt(")
        if not tail.endswith(")"):
            raise ParseError(f"bad surd {text!r}")
        d = int(tail[:-1])
        head = head.rstrip("*")
        if head in ("", "+"):
            c = Fraction(1)
        elif head == "-":
            c = Fraction(-1)
        else:
            c = as_rational(head)
        return cls(c, d)

    def square(self) -> Fraction:
        return self.coeff * self.coeff * self.radicand

    def is_zero(self) -> bool:
        return self.coeff == 0

    def sign(self) -> int:
        return (self.coeff > 0) - (self.coeff < 0)

    def __neg__(self) -> Surd:
        return Surd(-self.coeff, self.radicand)

    def __abs__(self) -> Surd:
        return Surd(abs(self.coeff), self.radicand)

    def __mul__(self, other: Any) -> Surd:
        if isinstance(other, Surd):
            return Surd(self.coeff * other.coeff, self.radicand * other.radicand)
        return Surd(self.coeff * as_rational(other), self.radicand)

    __rmul__ = __mul__

    def __float__(self) -> float:
        return float(self.coeff) * math.sqrt(self.radicand)

    def __str__(self) -> str:
        if self.radicand == 1:
            return str(self.coeff)
        if self.coeff == 1:
            return f"sqrt({self.radicand})"
        if self.coeff == -1:
            return f"-sqrt({self.radicand})"
        return f"{self.coeff}*sqrt({self.radicand})"


# ---------------------------------------------------------------------------
# multiquadratic fields


class Multiquadratic:
    """The field ``Q(sqrt(g_1), ..., sqrt(g_m))``.

    Elements are stored on the subset-product basis: bit ``i`` of a mask
    selects ``sqrt(g_i)``. Generators must be squarefree, pairwise distinct
    and multiplicatively independent modulo squares, which makes the basis
    linearly independent over Q.
    """

    def __init__(self, gens: Sequence[int] = ()):
        gens = tuple(int(g) for g in gens)
        if len(gens) > MAX_GENERATORS:
            raise FieldTooLarge(f"{len(gens)} generators exceeds the cap of {MAX_GENERATORS}")
        self.gens = gens
        prod = [1] * (1 << len(gens))
        for mask in range(1, len(prod)):
            low = mask & -mask
            prod[mask] = prod[mask ^ low] * gens[low.bit_length() - 1]
        self._prod = prod
        self._sqrt = [math.sqrt(v) for v in prod]

    @property
    def degree(self) -> int:
        return len(self._prod)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Multiquadratic) and self.gens == other.gens

    def __hash__(self) -> int:
        return hash(self.gens)

    def __repr__(self) -> str:
        return f"Multiquadratic({list(self.gens)})"

    def zero(self) -> FieldElem:
        return FieldElem(self, {})

    def one(self) -> FieldElem:
        return FieldElem(self, {0: Fraction(1)})

    def rational(self, q: Any) -> FieldElem:
        return FieldElem(self, {0: as_rational(q)})


class _F2Span:
    """Squarefree integers modulo squares, reduced by Gaussian elimination over GF(2)."""

    def __init__(self) -> None:
        self.pivots: dict[int, tuple[frozenset[int], int]] = {}
        self.gens: list[int] = []

    @staticmethod
    def primes(s: int) -> frozenset[int]:
        return frozenset(p for p, e in factorize(s) if e % 2)

    def reduce(self, s: int) -> tuple[frozenset[int], int]:
        vec = self.primes(s)
        comb = 0
        while vec:
            p = max(vec)
            if p not in self.pivots:
                break
            pvec, pcomb = self.pivots[p]
            vec = vec ^ pvec
            comb ^= pcomb
        return vec, comb

    def add(self, s: int) -> None:
        vec, comb = self.reduce(s)
        if vec:
            idx = len(self.gens)
            self.gens.append(s)
            self.pivots[max(vec)] = (vec, comb ^ (1 << idx))


def field_for_radicands(radicands: Iterable[int]) -> tuple[Multiquadratic, dict[int, tuple[int, int]]]:
    """Smallest multiquadratic field containing ``sqrt(d)`` for every ``d``.

    Returns the field and an embedding table ``d -> (mask, k)`` meaning
    ``sqrt(d) == basis[mask] / k``.
    """
    span = _F2Span()
    rads = sorted(set(int(d) for d in radicands if d != 1))
    for d in rads:
        span.add(d)
    if len(span.gens) > MAX_GENERATORS:
        raise FieldTooLarge(
            f"entries need {len(span.gens)} independent square roots (cap {MAX_GENERATORS})"
        )
    field = Multiquadratic(span.gens)
    table: dict[int, tuple[int, int]] = {1: (0, 1)}
    for d in rads:
        vec, comb = span.reduce(d)
        assert not vec
        k2, rem = divmod(field._prod[comb], d)
        k = math.isqrt(k2)
        assert rem == 0 and k * k == k2
        table[d] = (comb, k)
    return field, table


def embed_surd(s: Surd, field: Multiquadratic, table: dict[int, tuple[int, int]]) -> FieldElem:
    if s.coeff == 0:
        return field.zero()
    mask, k = table[s.radicand]
    return FieldElem(field, {mask: s.coeff / k})


class FieldElem:
    """An element of a :class:`Multiquadratic` field."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Multiquadratic, terms: dict[int, Fraction]):
        self.field = field
        self.terms = {m: c for m, c in terms.items() if c != 0}

    def _coerce(self, other: Any) -> FieldElem:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("field elements from different fields")
            return other
        if isinstance(other, Surd):
            raise TypeError("embed surds with embed_surd before mixing with field elements")
        return FieldElem(self.field, {0: as_rational(other)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(m == 0 for m in self.terms)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is irrational")
        return self.terms.get(0, Fraction(0))

    def __add__(self, other: Any) -> FieldElem:
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return FieldElem(self.field, out)

    __radd__ = __add__

    def __neg__(self) -> FieldElem:
        return FieldElem(self.field, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Any) -> FieldElem:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> FieldElem:
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> FieldElem:
        if not isinstance(other, FieldElem):
            q = as_rational(other)
            return FieldElem(self.field, {m: c * q for m, c in self.terms.items()})
        other = self._coerce(other)
        prod = self.field._prod
        out: dict[int, Fraction] = {}
        for s, a in self.terms.items():
            for t, b in other.terms.items():
                m = s ^ t
                v = a * b
                if s & t:
                    v *= prod[s & t]
                out[m] = out.get(m, 0) + v
        return FieldElem(self.field, out)

    __rmul__ = __mul__

    def conjugate(self, i: int) -> FieldElem:
        """Apply the automorphism ``sqrt(g_i) -> -sqrt(g_i)``."""
        bit = 1 << i
        return FieldElem(self.field, {m: (-c if m & bit else c) for m, c in self.terms.items()})

    def inverse(self) -> FieldElem:
        if not self.terms:
            raise ZeroDivisionError("inverse of zero")
        num = self.field.one()
        y = self
        for i in range(len(self.field.gens)):
            if all(not (m >> i) & 1 for m in y.terms):
                continue
            c = y.conjugate(i)
            num = num * c
            y = y * c
        norm = y.rational_value()
        return num * (1 / norm)

    def __truediv__(self, other: Any) -> FieldElem:
        if isinstance(other, FieldElem):
            return self * other.inverse()
        return self * (1 / as_rational(other))

    def __rtruediv__(self, other: Any) -> FieldElem:
        return self._coerce(other) * self.inverse()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElem):
            return self.field == other.field and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({0: Fraction(other)} if other != 0 else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, frozenset(self.terms.items())))

    def __float__(self) -> float:
        sq = self.field._sqrt
        return float(sum(float(c) * sq[m] for m, c in self.terms.items()))

    def sign(self) -> int:
        """Exact sign, by splitting off one generator at a time.

        For ``x = a + b*sqrt(g)`` with ``a, b`` in the smaller field, opposite
        signs of ``a`` and ``b`` are resolved by comparing ``a^2`` with
        ``b^2 g``.
        """
        return _sign_terms(self.terms, self.field)

    def __repr__(self) -> str:
        return f"FieldElem({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            if m == 0:
                parts.append(str(c))
            else:
                parts.append(f"{c}*sqrt({self.field._prod[m]})")
        return " + ".join(parts)


def _sign_terms(terms: dict[int, Fraction], field: Multiquadratic) -> int:
    if not terms:
        return 0
    top = max(terms).bit_length() - 1
    if top < 0:
        c = terms[0]
        return (c > 0) - (c < 0)
    bit = 1 << top
    a = {m: c for m, c in terms.items() if not m & bit}
    b = {m ^ bit: c for m, c in terms.items() if m & bit}
    sa = _sign_terms(a, field)
    sb = _sign_terms(b, field)
    if sa == 0 or sa == sb:
        return sb
    if sb == 0:
        return sa
    ea = FieldElem(field, a)
    eb = FieldElem(field, b)
    diff = ea * ea - eb * eb * field.gens[top]
    return sa * _sign_terms(diff.terms, field)


# ---------------------------------------------------------------------------
# matrices


class _Matrix:
    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable[Any]]):
        data = tuple(tuple(self._coerce(x) for x in r) for r in rows)
        if data and any(len(r) != len(data[0]) for r in data):
            raise ValueError("matrix rows must all have the same length")
        self._rows = data

    @staticmethod
    def _coerce(x: Any) -> Any:
        return x

    @property
    def rows(self) -> tuple[tuple[Any, ...], ...]:
        return self._rows

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return len(self._rows[0]) if self._rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> Any:
        i, j = ij
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def T(self):
        return type(self)(zip(*self._rows)) if self._rows else type(self)(())

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]):
        return type(self)([[self._rows[i][j] for j in cols] for i in rows])

    def is_symmetric(self) -> bool:
        n = self.nrows
        return n == self.ncols and all(
            self._rows[i][j] == self._rows[j][i] for i in range(n) for j in range(i + 1, n)
        )

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self._rows], dtype=float).reshape(self.shape)

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self._rows)
        return f"{type(self).__name__}([{body}])"


class RatMatrix(_Matrix):
    """Dense matrix of rationals."""

    __slots__ = ()
    _coerce = staticmethod(as_rational)

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, values: Sequence[Any]) -> RatMatrix:
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> RatMatrix:
        return cls([[0] * c for _ in range(r)])

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        cols = list(zip(*other.rows))
        return RatMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows])

    def scale(self, row_scale: Sequence[Any] | None = None, col_scale: Sequence[Any] | None = None) -> RatMatrix:
        rs = [as_rational(x) for x in row_scale] if row_scale is not None else [Fraction(1)] * self.nrows
        cs = [as_rational(x) for x in col_scale] if col_scale is not None else [Fraction(1)] * self.ncols
        return RatMatrix([[rs[i] * x * cs[j] for j, x in enumerate(r)] for i, r in enumerate(self.rows)])

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for r in self.rows for x in r)

    def support(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.rows) for j, x in enumerate(r) if x != 0]


def _coerce_surd(x: Any) -> Surd:
    if isinstance(x, Surd):
        return x
    if isinstance(x, str):
        return Surd.parse(x)
    return Surd(as_rational(x))


class SurdMatrix(_Matrix):
    """Dense matrix whose entries are single surds ``c*sqrt(d)``."""

    __slots__ = ()
    _coerce = staticmethod(_coerce_surd)

    def square(self) -> RatMatrix:
        return RatMatrix([[x.square() for x in r] for r in self.rows])

    def signs(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(x.sign() for x in r) for r in self.rows)

    def flip_row(self, i: int) -> SurdMatrix:
        return SurdMatrix([[-x for x in r] if k == i else r for k, r in enumerate(self.rows)])

    def flip_col(self, j: int) -> SurdMatrix:
        return SurdMatrix([[(-x if k == j else x) for k, x in enumerate(r)] for r in self.rows])


class FieldMatrix(_Matrix):
    """Dense matrix over a single multiquadratic field."""

    __slots__ = ()

    @property
    def field(self) -> Multiquadratic | None:
        for r in self.rows:
            for x in r:
                return x.field
        return None

    def is_rational(self) -> bool:
        return all(x.is_rational() for r in self.rows for x in r)

    def to_rational(self) -> RatMatrix:
        return RatMatrix([[x.rational_value() for x in r] for r in self.rows])


# ---------------------------------------------------------------------------
# rank and determinants


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], Fraction]:
    """Clear denominators row by row; returns integer rows and the product of multipliers."""
    out = []
    scale = Fraction(1)
    for r in rows:
        lcm = 1
        for x in r:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        out.append([int(x * lcm) for x in r])
        scale *= lcm
    return out, scale


def _bareiss(a: list[list[int]]) -> tuple[int, int, int]:
    """Fraction-free echelon reduction in place.

    Returns ``(rank, last_pivot, swaps)``; for a square full-rank input
    ``last_pivot`` is the determinant up to the sign ``(-1)**swaps``.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    rank = 0
    prev = 1
    swaps = 0
    for col in range(n):
        piv = next((i for i in range(rank, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        if piv != rank:
            a[rank], a[piv] = a[piv], a[rank]
            swaps += 1
        p = a[rank][col]
        prow = a[rank]
        for i in range(rank + 1, m):
            row = a[i]
            f = row[col]
            for j in range(col + 1, n):
                row[j] = (p * row[j] - f * prow[j]) // prev
            row[col] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank, prev, swaps


def rat_rank(M: RatMatrix | Sequence[Sequence[Any]]) -> int:
    """Exact rank over Q by fraction-free Gaussian elimination."""
    if not isinstance(M, RatMatrix):
        M = RatMatrix(M)
    if M.nrows == 0 or M.ncols == 0:
        return 0
    a, _ = _integer_rows(M.rows)
    return _bareiss(a)[0]


def rat_det(M: RatMatrix) -> Fraction:
    n = M.nrows
    if n != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    a, scale = _integer_rows(M.rows)
    rank, last, swaps = _bareiss(a)
    if rank < n:
        return Fraction(0)
    return Fraction((-1) ** swaps * last) / scale


def _field_eliminate(rows: list[list[FieldElem]], det: bool = False) -> tuple[int, Any]:
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [list(r) for r in rows]
    rank = 0
    d: Any = 1
    for col in range(n):
        piv = next((i for i in range(rank, m) if not a[i][col].is_zero()), None)
        if piv is None:
            if det:
                return rank, 0
            continue
        if piv != rank:
            a[rank], a[piv] = a[piv], a[rank]
            d = -d
        p = a[rank][col]
        d = p * d
        pinv = p.inverse()
        prow = a[rank]
        for i in range(rank + 1, m):
            f = a[i][col]
            if f.is_zero():
                continue
            f = f * pinv
            row = a[i]
            for j in range(col + 1, n):
                if not prow[j].is_zero():
                    row[j] = row[j] - f * prow[j]
            row[col] = f.field.zero()
        rank += 1
        if rank == m:
            break
    return rank, d


def field_rank(M: FieldMatrix | Sequence[Sequence[FieldElem]]) -> int:
    rows = [list(r) for r in (M.rows if isinstance(M, FieldMatrix) else M)]
    if not rows or not rows[0]:
        return 0
    return _field_eliminate(rows)[0]


def field_det(M: FieldMatrix) -> FieldElem:
    n = M.nrows
    if n != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    field = M.field
    if n == 0 or field is None:
        return Multiquadratic().one()
    _, d = _field_eliminate([list(r) for r in M.rows], det=True)
    return d if isinstance(d, FieldElem) else field.rational(d)


def normalize_surd_matrix(A: SurdMatrix) -> tuple[FieldMatrix, list[int], list[int]]:
    """Embed ``D1 A D2`` into the smallest field, with ``D1, D2`` diagonal square roots.

    Row ``i`` is multiplied by ``sqrt(r_i)`` and column ``j`` by
    ``sqrt(c_j)`` (squarefree integers) chosen along a spanning forest of the
    support so that forest entries become rational. Rank is unchanged and
    the field usually shrinks considerably.
    """
    nr, nc = A.shape
    adj_r: list[list[int]] = [[] for _ in range(nr)]
    adj_c: list[list[int]] = [[] for _ in range(nc)]
    for i, r in enumerate(A.rows):
        for j, x in enumerate(r):
            if not x.is_zero():
                adj_r[i].append(j)
                adj_c[j].append(i)
    rs: list[int | None] = [None] * nr
    cs: list[int | None] = [None] * nc
    for start in range(nr):
        if rs[start] is not None:
            continue
        rs[start] = 1
        stack = [("r", start)]
        while stack:
            kind, k = stack.pop()
            if kind == "r":
                for j in adj_r[k]:
                    if cs[j] is None:
                        cs[j] = squarefree_part(rs[k] * A.rows[k][j].radicand)
                        stack.append(("c", j))
            else:
                for i in adj_c[k]:
                    if rs[i] is None:
                        rs[i] = squarefree_part(cs[k] * A.rows[i][k].radicand)
                        stack.append(("r", i))
    rscale = [x if x is not None else 1 for x in rs]
    cscale = [x if x is not None else 1 for x in cs]
    scaled = [
        [x * Surd(1, rscale[i] * cscale[j]) for j, x in enumerate(r)] for i, r in enumerate(A.rows)
    ]
    field, table = field_for_radicands(x.radicand for r in scaled for x in r if not x.is_zero())
    fm = FieldMatrix([[embed_surd(x, field, table) for x in r] for r in scaled])
    return fm, rscale, cscale


def surd_rank(A: SurdMatrix | Sequence[Sequence[Any]]) -> int:
    """Exact rank of a surd matrix over its multiquadratic field."""
    if not isinstance(A, SurdMatrix):
        A = SurdMatrix(A)
    if A.nrows == 0 or A.ncols == 0:
        return 0
    fm, _, _ = normalize_surd_matrix(A)
    if fm.field is None or not fm.field.gens:
        return rat_rank(RatMatrix([[x.rational_value() for x in r] for r in fm.rows]))
    return field_rank(fm)


def embed_field_matrix(A: SurdMatrix) -> FieldMatrix:
    """Embed a surd matrix verbatim (no rescaling) into the field of its radicands."""
    field, table = field_for_radicands(x.radicand for r in A.rows for x in r if not x.is_zero())
    return FieldMatrix([[embed_surd(x, field, table) for x in r] for r in A.rows])


def _check_square_symmetric(A: _Matrix) -> None:
    if A.nrows != A.ncols or not A.is_symmetric():
        raise NotSymmetric("matrix is not symmetric")


def _minor_sign(A: _Matrix, idx: Sequence[int]) -> int:
    sub = A.submatrix(idx, idx)
    if isinstance(sub, RatMatrix):
        d = rat_det(sub)
        return (d > 0) - (d < 0)
    return field_det(sub).sign()


def is_psd(A: RatMatrix | FieldMatrix) -> bool:
    """Exact positive semidefiniteness: every principal minor is nonnegative."""
    if not isinstance(A, (RatMatrix, FieldMatrix)):
        A = RatMatrix(A)
    _check_square_symmetric(A)
    k = A.nrows
    if k > PSD_MAX_SIZE:
        raise TooLarge(f"psd test by principal minors is capped at {PSD_MAX_SIZE}x{PSD_MAX_SIZE}")
    for size in range(1, k + 1):
        for idx in itertools.combinations(range(k), size):
            if _minor_sign(A, idx) < 0:
                return False
    return True


def matrix_rank(A: RatMatrix | SurdMatrix | FieldMatrix) -> int:
    if isinstance(A, RatMatrix):
        return rat_rank(A)
    if isinstance(A, SurdMatrix):
        return surd_rank(A)
    return field_rank(A)


def sym_rank(A: RatMatrix | FieldMatrix) -> int:
    if not isinstance(A, (RatMatrix, FieldMatrix)):
        A = RatMatrix(A)
    _check_square_symmetric(A)
    return matrix_rank(A)


def trace_inner(A: _Matrix, B: _Matrix) -> Any:
    """Trace inner product ``Tr(A B)`` of two symmetric matrices."""
    if A.shape != B.shape:
        raise ValueError("shape mismatch in trace inner product")
    total: Any = Fraction(0)
    for ra, rb in zip(A.rows, B.rows):
        for x, y in zip(ra, rb):
            total = x * y + total
    return total


def rat_nullspace(M: RatMatrix | Sequence[Sequence[Any]]) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel ``{x : M x = 0}`` from the reduced row echelon form."""
    if not isinstance(M, RatMatrix):
        M = RatMatrix(M)
    a = [list(r) for r in M.rows]
    m, n = M.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        p = a[row][col]
        a[row] = [x / p for x in a[row]]
        for i in range(m):
            if i != row and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][free]
        basis.append(tuple(v))
    return basis
