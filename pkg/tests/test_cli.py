import json
import subprocess
import sys

import pytest

from fdeletion import cli
from fdeletion.exact import solve_exact
from fdeletion.exhaustive import exhaustive_family
from fdeletion.graph import complete_graph, disjoint_union, dump_graph, read_graph
from fdeletion.minors import preset
from fdeletion.separations import build_hitting_family
from fdeletion.solvers import approx_deletion, fpt_k_optimal


@pytest.fixture
def tri(tmp_path):
    p = tmp_path / "tri.el"
    p.write_text("p 3 3\nw 1 1\nw 2 1\nw 3 1\ne 1 2\ne 2 3\ne 1 3\n")
    return str(p)


@pytest.fixture
def two(tmp_path):
    p = tmp_path / "two.json"
    p.write_text(dump_graph(disjoint_union(complete_graph(3), complete_graph(3)), "json"))
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_exact(capsys, tri):
    code, out, _ = run(capsys, "exact", "--family", "k3", "--graph", tri)
    assert code == 0
    assert json.loads(out) == {"solution": [1], "status": "ok", "weight": 1}


def test_exact_infeasible(capsys, two):
    code, out, err = run(capsys, "exact", "--graph", two, "--k", "1")
    assert code == 2 and json.loads(out)["status"] == "infeasible"
    assert "no hitting set" in err


def test_approx_is_deterministic(capsys, tri):
    args = ("approx", "--family", "k3", "--eta", "1", "--seed", "7", "--graph", tri)
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first == second and first[0] == 0


def test_approx_matches_library(capsys, two):
    code, out, _ = run(capsys, "approx", "--graph", two, "--seed", "3")
    g = read_graph(two)
    assert json.loads(out) == approx_deletion(g, preset("k3"), 3).to_json_obj(g)


def test_modulator_only(capsys, tri):
    code, out, _ = run(capsys, "approx", "--graph", tri, "--seed", "1", "--modulator-only")
    assert code == 0 and json.loads(out)["iterations"] == 1


def test_generated_seed_is_printed(capsys, tri):
    code, out, err = run(capsys, "approx", "--graph", tri)
    seed = int(err.split("seed:")[1].split()[0])
    assert json.loads(out)["seed"] == seed


def test_fpt_zero_budget_fails(capsys, tri):
    code, out, err = run(capsys, "fpt", "--family", "k3", "--k", "0", "--graph", tri, "--seed", "1")
    assert code == 2 and json.loads(out)["status"] == "failed"


def test_fpt_matches_library(capsys, tri):
    code, out, _ = run(capsys, "fpt", "--graph", tri, "--k", "1", "--seed", "5", "--reps", "4")
    g = read_graph(tri)
    assert code == 0
    assert json.loads(out) == fpt_k_optimal(g, preset("k3"), 1, 5, 4).to_json_obj(g)


def test_family_and_exhaust_match_library(capsys, tri):
    g = read_graph(tri)
    code, out, _ = run(capsys, "family", "--graph", tri)
    assert code == 0 and json.loads(out) == build_hitting_family(g, 1).to_json_obj(g)
    code, out, _ = run(capsys, "exhaust", "--graph", tri, "--protrusion", "1,2,3")
    assert code == 0 and json.loads(out) == exhaustive_family(g, {1, 2, 3}, preset("k3")).to_json_obj(g)
    code, out, _ = run(capsys, "exhaust", "--graph", tri, "--protrusion", "1,2,3", "--ell", "0")
    assert json.loads(out)["candidates"] == [{"set": [], "weight": 0}]


def test_exact_matches_library(capsys, two):
    g = read_graph(two)
    code, out, _ = run(capsys, "exact", "--graph", two, "--family", "outerplanar")
    xs, w = solve_exact(g, preset("outerplanar"))
    assert json.loads(out) == {"solution": list(g.sort(xs)), "status": "ok", "weight": w}


def test_json_out(capsys, tri, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "exact", "--graph", tri, "--json-out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["weight"] == 1


def test_gen_roundtrip(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--generator", "grid_plus_noise", "--seed", "3", "--index", "2")
    assert code == 0 and out.startswith("p ")
    again = run(capsys, "gen", "--generator", "grid_plus_noise", "--seed", "3", "--index", "2")[1]
    assert out == again
    code, out, _ = run(capsys, "gen", "--format", "json", "--seed", "3")
    assert "vertices" in json.loads(out)


def test_verify(capsys, tmp_path):
    csv_path = tmp_path / "r.csv"
    args = ("verify", "--count", "3", "--seed", "1", "--checks", "hitting_family,lca_closure", "--csv-out", str(csv_path))
    code, out, err = run(capsys, *args)
    assert code == 0
    assert json.loads(out)["passed"] is True
    assert "PASS hitting_family" in err
    assert csv_path.read_text().startswith("check,passed")
    assert run(capsys, *args)[1] == out


@pytest.mark.parametrize(
    "argv, msg",
    [
        ([], "usage"),
        (["bogus"], "invalid choice"),
        (["exact"], "--graph is required"),
        (["exact", "--graph", "/nonexistent/g.el"], "No such file"),
        (["exact", "--graph", "{tri}", "--family", "nope"], "unknown family"),
        (["exact", "--graph", "{tri}", "--family", "k5k33"], "no planar graph"),
        (["approx", "--graph", "{tri}", "--family", "k3", "--eta", "2", "--seed", "1"], "eta=1"),
        (["fpt", "--graph", "{tri}"], "--k is required"),
        (["exhaust", "--graph", "{tri}"], "--protrusion is required"),
        (["exhaust", "--graph", "{tri}", "--protrusion", "9"], "unknown vertex"),
        (["exact", "--graph", "{tri}", "--tw-cap", "0"], "must be positive"),
        (["verify", "--checks", "nope", "--count", "1"], "unknown checks"),
        (["family", "--graph", "{path}"], "treewidth at most"),
    ],
)
def test_errors_exit_one(capsys, tri, tmp_path, argv, msg):
    path = tmp_path / "path.el"
    path.write_text("p 3 2\ne 1 2\ne 2 3\n")
    argv = [a.format(tri=tri, path=path) for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert msg in err


def test_malformed_graph(capsys, tmp_path):
    bad = tmp_path / "bad.el"
    bad.write_text("p 2 1\ne 1 1\n")
    code, _, err = run(capsys, "exact", "--graph", str(bad))
    assert code == 1 and "line 2" in err and "self-loop" in err


def test_exact_cap_flag(capsys, tmp_path):
    p = tmp_path / "k5.el"
    p.write_text(dump_graph(complete_graph(5)))
    code, _, err = run(capsys, "exact", "--graph", str(p), "--exact-cap", "3")
    assert code == 1 and "cap" in err


def test_console_script_entry(tri):
    proc = subprocess.run(
        [sys.executable, "-m", "fdeletion.cli", "exact", "--graph", tri], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["weight"] == 1
