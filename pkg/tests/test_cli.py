from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from psdrank.cli import main


def run(capsys, *argv):
    code = main([*argv, "--json"])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out else None), out


def test_slack(capsys):
    code, rep, _ = run(capsys, "slack", "--polytope", "fixture:pentagon")
    assert code == 0
    assert rep["results"]["shape"] == [5, 5] and rep["results"]["rank"] == 3
    code, rep, _ = run(capsys, "slack", "--polytope", "fixture:cube")
    assert rep["results"]["shape"] == [8, 6] and rep["results"]["rank"] == 4
    code, rep, _ = run(capsys, "slack", "--polytope", "fixture:segment")
    assert rep["results"]["shape"] == [2, 2]


def test_sqrt_rank(capsys):
    code, rep, _ = run(capsys, "sqrt-rank", "--matrix", "fixture:pentagon_slack")
    assert code == 0 and rep["results"]["sqrt_rank"] == 5
    code, rep, _ = run(capsys, "sqrt-rank", "--matrix", "fixture:derangement")
    assert rep["results"]["sqrt_rank"] == 2
    assert rep["results"]["witness"] == [["0", "1", "1"], ["1", "0", "-1"], ["1", "1", "0"]]
    code, rep, _ = run(capsys, "sqrt-rank", "--matrix", "fixture:one_by_one")
    assert rep["results"]["sqrt_rank"] == 1


def test_sqrt_rank_budget_exit_code(capsys):
    code, rep, _ = run(capsys, "sqrt-rank", "--matrix", "fixture:pentagon_slack", "--budget", "2")
    assert code == 4
    assert rep["results"]["certified"] is False


def test_bounds(capsys):
    code, rep, _ = run(capsys, "bounds", "--matrix", "fixture:octahedron_slack", "--dim", "3")
    iv = rep["results"]["interval"]
    assert code == 0 and (iv["lo"], iv["hi"]) == (5, 5)
    code, rep, _ = run(capsys, "bounds", "--matrix", "fixture:pentagon_slack", "--dim", "2",
                       "--cert", "fixture:pentagon_k4")
    iv = rep["results"]["interval"]
    assert (iv["lo"], iv["hi"]) == (4, 4)
    assert "CERT_UPPER" in {r["rule"] for r in iv["hi_reasons"]}
    code, rep, _ = run(capsys, "bounds", "--matrix", "fixture:identity4", "--dim", "3")
    iv = rep["results"]["interval"]
    assert (iv["lo"], iv["hi"]) == (4, 4)


def test_classify_two_level_stab_verify(capsys):
    code, rep, _ = run(capsys, "classify", "--polytope", "fixture:octahedron_example")
    assert rep["results"]["tag"] == "Octahedron" and rep["results"]["minimal"] is False
    code, rep, _ = run(capsys, "classify", "--polytope", "fixture:pentagon")
    assert rep["results"]["minimal"] is False
    code, rep, _ = run(capsys, "two-level", "--matrix", "fixture:prism_slack")
    assert rep["results"]["scaling_to_01"] is None
    code, rep, _ = run(capsys, "stab", "--graph", "fixture:c5")
    assert rep["results"]["agree"] is True
    code, rep, _ = run(capsys, "verify", "--matrix", "fixture:hexagon_slack", "--cert", "fixture:hexagon_k4")
    assert code == 0 and rep["results"]["valid"] and rep["results"]["max_col_factor_rank"] == 2
    code, rep, _ = run(capsys, "rank", "--matrix", "fixture:hexagon_root4")
    assert rep["results"]["rank"] == 4
    code, rep, _ = run(capsys, "fixtures")
    assert "pentagon_slack" in rep["results"]["fixtures"]


def test_classify_rejects_other_dimensions(capsys):
    code, _, out = run(capsys, "classify", "--polytope", "fixture:segment")
    assert code == 3 and "WrongDimension" in out.err


def test_verify_invalid_certificate(capsys, tmp_path):
    cert = json.loads(open_fixture("derangement_k2"))
    cert["row_factors"][0] = [["2", "0"], ["0", "0"]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cert))
    code, rep, _ = run(capsys, "verify", "--matrix", "fixture:derangement", "--cert", str(path))
    assert code == 5 and rep["results"]["valid"] is False


def test_bounds_invalid_certificate_exit_code(capsys):
    code, _, out = run(capsys, "bounds", "--matrix", "fixture:pentagon_slack", "--cert", "fixture:hexagon_k4")
    assert code == 5


def test_parse_and_geometry_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rows": [[0.5]]}')
    assert run(capsys, "sqrt-rank", "--matrix", str(bad))[0] == 2
    assert run(capsys, "sqrt-rank", "--matrix", str(tmp_path / "missing.json"))[0] == 2
    flat = tmp_path / "flat.json"
    flat.write_text('{"vertices": [["0","0"],["1","1"],["2","2"]]}')
    assert run(capsys, "slack", "--polytope", str(flat))[0] == 3
    assert run(capsys, "bounds", "--matrix", "fixture:pentagon_slack", "--dim", "3")[0] == 3


def test_json_is_byte_identical(capsys):
    outs = []
    for _ in range(2):
        main(["bounds", "--matrix", "fixture:pentagon_slack", "--dim", "2", "--json"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    rep = json.loads(outs[0])
    assert set(rep) == {"command", "flags", "inputs", "provenance", "results", "seed"}
    assert rep["seed"] == 20130601
    assert rep["flags"]["budget"] == 1 << 24


def test_text_output_has_timing(capsys):
    assert main(["sqrt-rank", "--matrix", "fixture:derangement"]) == 0
    out = capsys.readouterr().out
    assert "sqrt_rank: 2" in out and "time:" in out


def open_fixture(name):
    from psdrank.io import fixture_text

    return fixture_text(name)


@pytest.mark.skipif(shutil.which("psdrank") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["psdrank", "sqrt-rank", "--matrix", "fixture:derangement", "--json", "--serial"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["results"]["sqrt_rank"] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "psdrank.cli", "fixtures", "--json"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
