"""Command line front end: ``psdrank <command> [options]``.

Every command builds a report dictionary. With ``--json`` it is printed as
stable JSON (sorted keys, no timing) so identical inputs give identical
bytes; otherwise a short text rendering is printed, followed by the elapsed
time. Inputs are file paths or packaged fixtures written ``fixture:NAME``.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import time
from typing import Any, Callable, Sequence

from . import __version__
from .classify import (
    DEFAULT_SEED,
    classify_3d,
    is_biplanar_octahedron,
    is_octahedron,
    is_two_level,
    polygon_minimal,
    scaling_to_01,
)
from .errors import PsdRankError, WrongDimension
from .exactnum import SurdMatrix, rat_rank, surd_rank
from .hadamard import DEFAULT_BUDGET, DEFAULT_FLOAT_TOL, positive_sqrt, sqrt_rank
from .io import (
    any_matrix_from_json,
    certificate_from_json,
    dumps,
    fixture_manifest,
    graph_from_json,
    matrix_from_json,
    matrix_to_json,
    polytope_from_json,
    read_json,
)
from .polytope import slack_matrix
from .psdfact import RankInterval, psd_rank_bounds, verify_factorization
from .stab import stab_minimal_check

EXIT_OK = 0
EXIT_BUDGET = 4
EXIT_INVALID_CERT = 5


class Context:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.inputs: dict[str, str] = {}

    def load(self, ref: str, parse: Callable[[Any], Any]) -> Any:
        obj, digest = read_json(ref)
        self.inputs[ref] = digest
        return parse(obj)

    @property
    def n_jobs(self) -> int:
        return 1 if self.args.serial else (os.cpu_count() or 1)


def _interval_json(iv: RankInterval) -> dict[str, Any]:
    def reasons(rs):
        return [{"value": r.value, "rule": r.rule.value, "citation": r.citation} for r in rs]

    return {
        "lo": iv.lo,
        "hi": iv.hi,
        "exact": iv.exact,
        "lo_reasons": reasons(iv.lo_reasons),
        "hi_reasons": reasons(iv.hi_reasons),
        "notes": list(iv.notes),
    }


# ---------------------------------------------------------------------------
# commands; each returns (results, provenance, exit code)


def cmd_slack(ctx: Context) -> tuple[dict[str, Any], list[str], int]:
    p = ctx.load(ctx.args.polytope, polytope_from_json)
    s = slack_matrix(p)
    facets = [{"normal": [str(a) for a in f.normal], "offset": str(f.offset)} for f in p.facets]
    res = {
        "dim": p.dim,
        "shape": list(s.shape),
        "rank": rat_rank(s.matrix),
        "slack": matrix_to_json(s.matrix)["rows"],
        "facets": facets,
    }
    return res, ["slack entries are offset - <normal, vertex> over the enumerated facets"], EXIT_OK


def cmd_sqrt_rank(ctx: Context) -> tuple[dict[str, Any], list[str], int]:
    M = ctx.load(ctx.args.matrix, matrix_from_json)
    r = sqrt_rank(M, budget=ctx.args.budget, float_tol=ctx.args.float_tol, n_jobs=ctx.n_jobs)
    res = {
        "shape": list(M.shape),
        "sqrt_rank": r.min_rank,
        "certified": r.certified,
        "witness": matrix_to_json(r.witness)["rows"],
        "classes_total": r.total_classes,
        "classes_searched": r.classes_searched,
        "classes_pruned": r.pruned,
        "structural_lower_bound": r.lower_bound,
        "positive_root_rank": surd_rank(positive_sqrt(M)),
    }
    prov = ["minimum over sign classes of Hadamard square roots, verified exactly"]
    if not r.certified:
        prov.append("budget exhausted: value is an upper bound only")
    return res, prov, EXIT_OK if r.certified else EXIT_BUDGET


def cmd_bounds(ctx: Context) -> tuple[dict[str, Any], list[str], int]:
    M = ctx.load(ctx.args.matrix, matrix_from_json)
    certs = [ctx.load(c, certificate_from_json) for c in ctx.args.cert]
    poly = ctx.load(ctx.args.polytope, polytope_from_json) if ctx.args.polytope else None
    iv = psd_rank_bounds(
        M,
        dim=ctx.args.dim,
        certs=certs,
        polytope=poly,
        budget=ctx.args.budget,
        float_tol=ctx.args.float_tol,
        n_jobs=ctx.n_jobs,
    )
    prov = [f"{r.rule.value}: {r.citation}" for r in iv.lo_reasons + iv.hi_reasons]
    return {"interval": _interval_json(iv)}, prov, EXIT_OK


def cmd_classify(ctx: Context) -> tuple[dict[str, Any], list[str], int]:
    p = ctx.load(ctx.args.polytope, polytope_from_json)
    if p.dim == 2:
        res = {"dim": 2, "vertices": len(p.vertices), "minimal": polygon_minimal(p)}
        return res, ["polygons have psd rank 3 iff they have at most four vertices"], EXIT_OK
    if p.dim != 3:
        raise WrongDimension("classify handles polygons and 3-polytopes only")
    c = classify_3d(p)
    res: dict[str, Any] = {
        "dim": 3,
        "tag": c.tag.value,
        "counts": {"v_t": c.counts[0], "v_q": c.counts[1], "f_t": c.counts[2], "f_q": c.counts[3]},
        "minimal": c.minimal,
    }
    if is_octahedron(p):
        res["biplanar"] = is_biplanar_octahedron(p)
    return res, ["3-polytopes of psd rank 4 are classified by combinatorial type and biplanarity"], EXIT_OK


def cmd_two_level(ctx: Context) -> tuple[dict[str, Any], list[str], int]:
    M = ctx.load(ctx.args.matrix, matrix_from_json)
    tl = is_two_level(M)
    sc = scaling_to_01(M)
    res: dict[str, Any] = {
        "two_level": tl is not None,
        "scaled": matrix_to_json(tl)["rows"] if tl is not None else None,
        "scaling_to_01": None
        if sc is None
        else {"rows": [str(x) for x in sc[0]], "cols": [str(x) for x in sc[1]]},
    }
    return res, ["0/1 scalings give a Hadamard square root of rank equal to the matrix rank"], EXIT_OK


def cmd_stab(ctx: Context) -> tuple[dict[str, Any], list[str], int]:
    g = ctx.load(ctx.args.graph, graph_from_json)
    r = stab_minimal_check(g, budget=ctx.args.budget)
    res = {
        "n": r.n,
        "perfect": r.perfect,
        "minimal_psd_rank": r.minimal_psd_rank,
        "agree": r.agree,
        "method": r.method,
        "face_vertices": list(r.face_vertices),
        "certificate_size": r.certificate_size,
        "certificate_sqrt_rank": r.certificate_sqrt_rank,
    }
    return res, [f"minimality decided by {r.method}"], EXIT_OK


def cmd_verify(ctx: Context) -> tuple[dict[str, Any], list[str], int]:
    M = ctx.load(ctx.args.matrix, matrix_from_json)
    F = ctx.load(ctx.args.cert, certificate_from_json)
    rep = verify_factorization(M, F)
    res = {
        "valid": rep.valid,
        "k": rep.k,
        "max_row_factor_rank": rep.max_row_factor_rank,
        "max_col_factor_rank": rep.max_col_factor_rank,
        "row_factor_ranks": list(rep.row_factor_ranks),
        "col_factor_ranks": list(rep.col_factor_ranks),
        "problems": list(rep.problems),
    }
    return res, ["every factor psd by principal minors; every trace product compared exactly"], (
        EXIT_OK if rep.valid else EXIT_INVALID_CERT
    )


def cmd_rank(ctx: Context) -> tuple[dict[str, Any], list[str], int]:
    A = ctx.load(ctx.args.matrix, any_matrix_from_json)
    rank = surd_rank(A) if isinstance(A, SurdMatrix) else rat_rank(A)
    res = {"shape": list(A.shape), "rank": rank, "surd": isinstance(A, SurdMatrix)}
    if isinstance(A, SurdMatrix):
        res["square"] = matrix_to_json(A.square())["rows"]
    return res, ["exact rank over the field generated by the entries"], EXIT_OK


def cmd_fixtures(ctx: Context) -> tuple[dict[str, Any], list[str], int]:
    man = fixture_manifest()
    return {"fixtures": {k: {"kind": v["kind"], "description": v["description"]} for k, v in man.items()}}, [], EXIT_OK


COMMANDS: dict[str, Callable[[Context], tuple[dict[str, Any], list[str], int]]] = {
    "slack": cmd_slack,
    "sqrt-rank": cmd_sqrt_rank,
    "bounds": cmd_bounds,
    "classify": cmd_classify,
    "two-level": cmd_two_level,
    "stab": cmd_stab,
    "verify": cmd_verify,
    "rank": cmd_rank,
    "fixtures": cmd_fixtures,
}


# ---------------------------------------------------------------------------
# argument parsing and output


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="sign class limit (default 2^24)")
    common.add_argument("--float-tol", type=float, default=DEFAULT_FLOAT_TOL, help="float rank prefilter tolerance")
    common.add_argument("--serial", action="store_true", help="disable parallel search")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed recorded in the report")
    common.add_argument("--json", action="store_true", help="print the machine-readable report")

    parser = argparse.ArgumentParser(prog="psdrank", description="Certified psd rank bounds for polytopes and nonnegative matrices.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("slack", parents=[common], help="slack matrix of a polytope")
    p.add_argument("--polytope", required=True)
    p = sub.add_parser("sqrt-rank", parents=[common], help="minimum rank of a Hadamard square root")
    p.add_argument("--matrix", required=True)
    p = sub.add_parser("bounds", parents=[common], help="certified psd rank interval")
    p.add_argument("--matrix", required=True)
    p.add_argument("--dim", type=int, default=None, help="the matrix is a slack matrix of a DIM-polytope")
    p.add_argument("--cert", action="append", default=[], help="psd factorization certificate (repeatable)")
    p.add_argument("--polytope", default=None, help="polytope for the facet recursion")
    p = sub.add_parser("classify", parents=[common], help="minimality of polygons and 3-polytopes")
    p.add_argument("--polytope", required=True)
    p = sub.add_parser("two-level", parents=[common], help="2-level and 0/1 scaling tests")
    p.add_argument("--matrix", required=True)
    p = sub.add_parser("stab", parents=[common], help="perfectness versus minimal psd rank of STAB(G)")
    p.add_argument("--graph", required=True)
    p = sub.add_parser("verify", parents=[common], help="check a psd factorization certificate")
    p.add_argument("--matrix", required=True)
    p.add_argument("--cert", required=True)
    p = sub.add_parser("rank", parents=[common], help="exact rank of a rational or surd matrix")
    p.add_argument("--matrix", required=True)
    sub.add_parser("fixtures", parents=[common], help="list packaged fixtures")
    return parser


def _render_text(report: dict[str, Any], elapsed: float) -> str:
    lines = [f"psdrank {report['command']}"]
    for ref, digest in report["inputs"].items():
        lines.append(f"  input {ref} sha256:{digest[:16]}")

    def show(key: str, value: Any, indent: int) -> None:
        pad = " " * indent
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            for k, v in value.items():
                show(k, v, indent + 2)
        elif isinstance(value, list) and value and isinstance(value[0], list):
            lines.append(f"{pad}{key}:")
            for row in value:
                lines.append(f"{pad}  [" + ", ".join(str(x) for x in row) + "]")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  - " + ", ".join(f"{k}={v}" for k, v in item.items()))
        else:
            lines.append(f"{pad}{key}: {value}")

    for k, v in report["results"].items():
        show(k, v, 2)
    for p in report["provenance"]:
        lines.append(f"  provenance: {p}")
    lines.append(f"  seed: {report['seed']}")
    lines.append(f"  time: {elapsed:.3f}s")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    random.seed(args.seed)
    ctx = Context(args)
    start = time.perf_counter()
    try:
        results, provenance, code = COMMANDS[args.command](ctx)
    except PsdRankError as exc:
        print(f"psdrank: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    elapsed = time.perf_counter() - start
    report = {
        "command": args.command,
        "flags": {
            "budget": args.budget,
            "float_tol": args.float_tol,
            "serial": args.serial,
        },
        "inputs": dict(sorted(ctx.inputs.items())),
        "results": results,
        "provenance": provenance,
        "seed": args.seed,
    }
    if args.json:
        sys.stdout.write(dumps(report))
    else:
        print(_render_text(report, elapsed))
    return code


if __name__ == "__main__":
    sys.exit(main())
