"""JSON file formats and packaged fixtures.

Numbers are always strings: rationals as "p/q" or "p", square roots as
"c*sqrt(d)", and field elements as sums of such terms. Floats are rejected.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

from .errors import GeometryError, ParseError
from .exactnum import (
    FieldElem,
    FieldMatrix,
    RatMatrix,
    Surd,
    SurdMatrix,
    as_rational,
    embed_surd,
    field_for_radicands,
)
from .polytope import Facet, Polytope
from .psdfact import PsdFactorization
from .stab import Graph
from .classify import OctahedronParams

FIXTURE_PREFIX = "fixture:"


# ---------------------------------------------------------------------------
# scalars


def parse_rational(x: Any) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise ParseError(f"expected a rational string, got {x!r}")
    if isinstance(x, (int, str)):
        try:
            return as_rational(x)
        except (TypeError, ValueError) as exc:
            raise ParseError(str(exc)) from exc
    raise ParseError(f"expected a rational string, got {x!r}")


_TERM = re.compile(r"([+-]*)([^+-]+)")


def parse_surd_sum(text: Any) -> list[Surd]:
    """Terms of a string like "1/2 - 3*sqrt(6) + sqrt(2)"."""
    if not isinstance(text, (str, int)) or isinstance(text, bool):
        raise ParseError(f"expected a numeric string, got {text!r}")
    s = str(text).replace(" ", "")
    if not s:
        raise ParseError("empty numeric string")
    terms = []
    pos = 0
    for m in _TERM.finditer(s):
        if m.start() != pos:
            raise ParseError(f"bad numeric string {text!r}")
        pos = m.end()
        neg = m.group(1).count("-") % 2 == 1
        try:
            t = Surd.parse(m.group(2))
        except (ValueError, TypeError) as exc:
            raise ParseError(f"bad numeric string {text!r}") from exc
        terms.append(-t if neg else t)
    if pos != len(s):
        raise ParseError(f"bad numeric string {text!r}")
    return terms


def format_field_elem(x: FieldElem | Fraction) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if x.is_zero():
        return "0"
    parts = []
    for mask in sorted(x.terms):
        parts.append(str(Surd(x.terms[mask], x.field._prod[mask])))
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


# ---------------------------------------------------------------------------
# matrices


def _rows_of(obj: Any, what: str = "matrix") -> list[list[Any]]:
    if isinstance(obj, dict):
        obj = obj.get("rows")
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise ParseError(f"{what} must be a list of rows")
    if obj and any(len(r) != len(obj[0]) for r in obj):
        raise ParseError(f"{what} rows have different lengths")
    return obj


def matrix_from_json(obj: Any) -> RatMatrix:
    return RatMatrix([[parse_rational(x) for x in r] for r in _rows_of(obj)])


def surd_matrix_from_json(obj: Any) -> SurdMatrix:
    rows = []
    for r in _rows_of(obj):
        row = []
        for x in r:
            terms = parse_surd_sum(x)
            if len(terms) != 1:
                raise ParseError(f"entry {x!r} is not a single square root")
            row.append(terms[0])
        rows.append(row)
    return SurdMatrix(rows)


def any_matrix_from_json(obj: Any) -> RatMatrix | SurdMatrix:
    rows = _rows_of(obj)
    if any(isinstance(x, str) and "sqrt" in x for r in rows for x in r):
        return surd_matrix_from_json(obj)
    return matrix_from_json(obj)


def matrix_to_json(M: RatMatrix | SurdMatrix) -> dict[str, Any]:
    return {"rows": [[str(x) for x in r] for r in M.rows]}


def field_matrices_from_json(mats: Iterable[Any]) -> list[RatMatrix | FieldMatrix]:
    """Parse several matrices; irrational entries put all of them in one common field."""
    parsed = [[[parse_surd_sum(x) for x in r] for r in _rows_of(m, "factor")] for m in mats]
    rads = {t.radicand for m in parsed for r in m for terms in r for t in terms}
    if rads <= {1}:
        return [
            RatMatrix([[sum((t.coeff for t in terms), Fraction(0)) for terms in r] for r in m])
            for m in parsed
        ]
    field, table = field_for_radicands(rads)
    out: list[RatMatrix | FieldMatrix] = []
    for m in parsed:
        rows = []
        for r in m:
            row = []
            for terms in r:
                e = field.zero()
                for t in terms:
                    e = e + embed_surd(t, field, table)
                row.append(e)
            rows.append(row)
        out.append(FieldMatrix(rows))
    return out


def factor_to_json(F: RatMatrix | FieldMatrix) -> list[list[str]]:
    return [[format_field_elem(x) for x in r] for r in F.rows]


# ---------------------------------------------------------------------------
# certificates, polytopes, graphs, octahedron parameters


def certificate_from_json(obj: Any) -> PsdFactorization:
    if not isinstance(obj, dict) or not {"k", "row_factors", "col_factors"} <= obj.keys():
        raise ParseError("certificate needs keys k, row_factors, col_factors")
    k = obj["k"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ParseError("k must be a positive integer")
    rf, cf = obj["row_factors"], obj["col_factors"]
    if not isinstance(rf, list) or not isinstance(cf, list):
        raise ParseError("factor lists must be lists")
    mats = field_matrices_from_json(rf + cf)
    return PsdFactorization(k, tuple(mats[: len(rf)]), tuple(mats[len(rf):]))


def certificate_to_json(F: PsdFactorization) -> dict[str, Any]:
    return {
        "k": F.k,
        "row_factors": [factor_to_json(f) for f in F.row_factors],
        "col_factors": [factor_to_json(f) for f in F.col_factors],
    }


def _facet_from_json(obj: Any) -> Facet:
    if not isinstance(obj, dict) or "normal" not in obj or "offset" not in obj:
        raise ParseError("facet entries need normal and offset")
    a = [parse_rational(x) for x in obj["normal"]]
    b = parse_rational(obj["offset"])
    if not any(a):
        raise ParseError("facet normal must be nonzero")
    den = 1
    for x in a:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in a]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return Facet(tuple(x // g for x in ints), b * den / g)


def polytope_from_json(obj: Any) -> Polytope:
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise ParseError("polytope needs a vertices list")
    verts = obj["vertices"]
    if not isinstance(verts, list) or not verts:
        raise ParseError("vertices must be a nonempty list")
    pts = [[parse_rational(x) for x in _as_list(v)] for v in verts]
    dim = obj.get("dim")
    if dim is not None and (not isinstance(dim, int) or any(len(p) != dim for p in pts)):
        raise ParseError("vertex coordinates do not match dim")
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise ParseError("name must be a string")
    p = Polytope.from_vertices(pts, name=name)
    if "facets" in obj:
        given = {_facet_from_json(f) for f in _as_list(obj["facets"])}
        if given != set(p.facets):
            raise GeometryError("listed facets do not match the facets of the vertex hull")
    return p


def _as_list(x: Any) -> list[Any]:
    if not isinstance(x, list):
        raise ParseError(f"expected a list, got {x!r}")
    return x


def polytope_to_json(p: Polytope, with_facets: bool = False) -> dict[str, Any]:
    out: dict[str, Any] = {
        "name": p.name,
        "dim": p.dim,
        "vertices": [[str(x) for x in v] for v in p.vertices],
    }
    if with_facets:
        out["facets"] = [
            {"normal": [str(a) for a in f.normal], "offset": str(f.offset)} for f in p.facets
        ]
    return out


def graph_from_json(obj: Any) -> Graph:
    if not isinstance(obj, dict) or "n" not in obj:
        raise ParseError("graph needs n and edges")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError("n must be an integer")
    edges = _as_list(obj.get("edges", []))
    for e in edges:
        if not isinstance(e, list) or len(e) != 2 or not all(isinstance(x, int) for x in e):
            raise ParseError(f"bad edge {e!r}")
    try:
        return Graph(n, edges)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def graph_to_json(g: Graph) -> dict[str, Any]:
    return {"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}


def params_from_json(obj: Any) -> OctahedronParams:
    if not isinstance(obj, dict) or not {"a", "b", "z", "w"} <= obj.keys():
        raise ParseError("octahedron parameters need a, b, z, w")
    return OctahedronParams(
        parse_rational(obj["a"]),
        parse_rational(obj["b"]),
        tuple(parse_rational(x) for x in _as_list(obj["z"])),
        tuple(parse_rational(x) for x in _as_list(obj["w"])),
    )


def params_to_json(q: OctahedronParams) -> dict[str, Any]:
    return {"a": str(q.a), "b": str(q.b), "z": [str(x) for x in q.z], "w": [str(x) for x in q.w]}


# ---------------------------------------------------------------------------
# files and fixtures


def dumps(obj: Any) -> str:
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _fixture_root():
    return resources.files("psdrank") / "fixtures"


def fixture_manifest() -> dict[str, Any]:
    return json.loads((_fixture_root() / "manifest.json").read_text())


def fixture_text(name: str) -> str:
    entry = fixture_manifest().get(name)
    if entry is None:
        raise ParseError(f"unknown fixture {name!r}")
    return (_fixture_root() / entry["file"]).read_text()


def read_text(ref: str | Path) -> str:
    """Contents of a file path, or of a packaged fixture given as ``fixture:NAME``."""
    s = str(ref)
    if s.startswith(FIXTURE_PREFIX):
        return fixture_text(s[len(FIXTURE_PREFIX):])
    try:
        return Path(s).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {s}: {exc.strerror}") from exc


def read_json(ref: str | Path) -> tuple[Any, str]:
    """Parsed JSON and the sha256 hex digest of the raw bytes."""
    text = read_text(ref)
    digest = hashlib.sha256(text.encode()).hexdigest()
    try:
        return json.loads(text), digest
    except json.JSONDecodeError as exc:
        raise ParseError(f"{ref}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def load_fixture(name: str) -> Any:
    """Parse a packaged fixture into its library type according to the manifest kind."""
    entry = fixture_manifest().get(name)
    if entry is None:
        raise ParseError(f"unknown fixture {name!r}")
    obj = json.loads(fixture_text(name))
    return LOADERS[entry["kind"]](obj)


LOADERS = {
    "matrix": any_matrix_from_json,
    "certificate": certificate_from_json,
    "polytope": polytope_from_json,
    "graph": graph_from_json,
    "octahedron": params_from_json,
}
