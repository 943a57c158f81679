import csv
import io
import json
import math
import subprocess
import sys
from fractions import Fraction

import pytest

from krgraph import Graph, from_graph6, to_native
from krgraph.cli import main, render_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def graph_file(tmp_path):
    def _write(G: Graph, name="g.txt"):
        p = tmp_path / name
        p.write_text(to_native(G) + "\n")
        return str(p)
    return _write


# -- gen --------------------------------------------------------------------

def test_gen_is_byte_identical(capsys):
    a = run(capsys, "gen", "--nodes", "3", "--seed", "1")
    b = run(capsys, "gen", "--nodes", "3", "--seed", "1")
    assert a == b and a[0] == 0
    for fmt in ("json", "graph6"):
        assert run(capsys, "gen", "--nodes", "12", "--seed", "4", "--format", fmt) == \
            run(capsys, "gen", "--nodes", "12", "--seed", "4", "--format", fmt)


def test_gen_usage_errors(capsys):
    assert run(capsys, "gen", "--nodes", "0")[0] == 1
    assert run(capsys, "gen")[0] == 1
    assert run(capsys, "gen", "--nodes", "x")[0] == 1
    assert run(capsys, "nonsense")[0] == 1


def test_gen_graph6_parses(capsys):
    code, out, _ = run(capsys, "gen", "--nodes", "5", "--format", "graph6", "--seed", "9")
    G = from_graph6(out.strip())
    assert code == 0 and G.n == 5
    code, out, _ = run(capsys, "gen", "--nodes", "5", "--format", "json", "--seed", "9")
    doc = json.loads(out)
    assert doc["graph"]["graph6"] == to_graph6_str(G)
    assert doc["config"]["seed"] == 9 and doc["rng"]["generator"]


def to_graph6_str(G):
    from krgraph import to_graph6
    return to_graph6(G)


def test_gen_to_file(capsys, tmp_path):
    out = tmp_path / "g.txt"
    assert run(capsys, "gen", "--nodes", "6", "--out", str(out))[1] == ""
    assert out.read_text().startswith("6:")


# -- analyze ----------------------------------------------------------------

def test_analyze_complete_graph(capsys, graph_file):
    code, out, _ = run(capsys, "analyze", graph_file(Graph.complete(5)))
    doc = json.loads(out)
    assert code == 0
    assert doc["diameter"] == 1 and doc["max_clique"] == 5
    assert doc["automorphisms"]["aut_size"] == 120
    for key in ("config", "deficiency", "degrees", "two_paths", "connectivity", "rigidity"):
        assert key in doc


def test_analyze_empty_and_cycle(capsys, graph_file):
    doc = json.loads(run(capsys, "analyze", graph_file(Graph.empty(4)))[1])
    assert doc["diameter"] == "disconnected"
    doc = json.loads(run(capsys, "analyze", graph_file(Graph.cycle(5)))[1])
    assert doc["connectivity"] == 2 and doc["max_clique"] == 2


def test_analyze_accepts_graph6_and_large_graphs(capsys, tmp_path):
    p = tmp_path / "g.g6"
    p.write_text(">>graph6<<" + to_graph6_str(Graph.cycle(12)) + "\n")
    doc = json.loads(run(capsys, "analyze", str(p), "--compressor", "bz2")[1])
    assert doc["diameter"] == 6 and doc["automorphisms"] is None
    assert doc["deficiency"]["compressor_id"].startswith("bz2")


def test_analyze_errors(capsys, tmp_path, graph_file):
    bad = tmp_path / "bad.txt"
    bad.write_text("not a graph")
    assert run(capsys, "analyze", str(bad))[0] == 2
    assert run(capsys, "analyze", str(tmp_path / "missing"))[0] == 2
    assert run(capsys, "analyze", graph_file(Graph.cycle(5)), "--compressor", "nope")[0] == 1


# -- census -----------------------------------------------------------------

def test_census_single_cover(capsys):
    code, out, _ = run(capsys, "census", "--nodes", "3", "--k", "3", "--seed", "2")
    doc = json.loads(out)
    assert code == 0 and doc["summary"]["h"] == 1 and len(doc["rows"]) == 8
    assert sum(r["total"] for r in doc["rows"]) == 1


def test_census_complete_graph(capsys, graph_file):
    code, out, _ = run(capsys, "census", "--graph", graph_file(Graph.complete(6)), "--k", "2")
    rows = {r["pattern"]: r for r in json.loads(out)["rows"]}
    assert rows["1"]["total"] == math.comb(6, 2) and rows["0"]["total"] == 0


def test_census_monte_carlo_within_fraction(capsys):
    code, out, _ = run(capsys, "census", "--nodes", "24", "--k", "3", "--samples", "100")
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 800
    assert 0 <= doc["summary"]["within_fraction"] <= 1
    for r in doc["rows"]:
        assert r["c_const"] == 0 and r["variant"] == "theorem" and "bound" in r


def test_census_csv_and_no_covers(capsys):
    code, out, _ = run(capsys, "census", "--nodes", "10", "--k", "3", "--no-covers", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 8
    assert sum(int(r["total"]) for r in rows) == math.comb(10, 3)
    assert run(capsys, "census", "--nodes", "10", "--k", "3")[0] == 2
    assert run(capsys, "census", "--k", "3")[0] == 1


# -- covers, enumerate, bounds ---------------------------------------------

def test_covers(capsys):
    doc = json.loads(run(capsys, "covers", "--nodes", "4", "--k", "2")[1])
    assert len(doc["covers"]) == 3
    assert run(capsys, "covers", "--nodes", "5", "--k", "2")[0] == 2


def test_enumerate_rows(capsys):
    code, out, _ = run(capsys, "enumerate", "--nodes", "4")
    rows = json.loads(out)["rows"]
    assert code == 0 and [r["n"] for r in rows] == [1, 2, 3, 4]
    assert rows[0]["g_enum"] == 1 and rows[0]["E_n"] == "1"
    r4 = rows[3]
    assert r4["g_enum"] == 11
    assert Fraction(r4["E_n"]) == Fraction(11 * 24, 64)
    assert Fraction(r4["lower"]) == Fraction(64, 24)
    assert Fraction(r4["upper"]) == Fraction(64, 24) * (1 + Fraction(4 * 256, 16))
    assert all(r["agree"] and r["within_bounds"] for r in rows)


def test_enumerate_limit_and_csv(capsys):
    assert run(capsys, "enumerate", "--nodes", "8")[0] == 2
    assert run(capsys, "enumerate", "--nodes", "3", "--limit-enum", "2")[0] == 2
    out = run(capsys, "enumerate", "--nodes", "5", "--format", "csv")[1]
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["g_burnside"] for r in rows] == ["1", "2", "4", "11", "34"]


def test_bounds(capsys):
    doc = json.loads(run(capsys, "bounds", "--nodes", "16", "--k", "2", "--c-const", "0")[1])
    assert doc["frequency"]["theorem"] == pytest.approx(frequency_ref(), rel=1e-12)
    assert doc["k_threshold"]["k"] == 2
    assert doc["config"]["c_const"] == 0
    assert run(capsys, "bounds", "--nodes", "16", "--delta", "-1")[0] == 1


def frequency_ref():
    from krgraph import frequency_bound
    return frequency_bound(16, 2, 1 + 0)


# -- rendering ---------------------------------------------------------------

def test_render_json_is_deterministic_and_valid():
    obj = {"b": 0.1, "a": [1, None, True, "x\"y"], "f": Fraction(1, 3), "z": 1e-300}
    text = render_json(obj)
    assert text == render_json(obj)
    doc = json.loads(text)
    assert doc["b"] == 0.1 and doc["f"] == "1/3" and doc["a"][3] == 'x"y'


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "krgraph", "gen", "--nodes", "4", "--seed", "3"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.startswith("4:")
