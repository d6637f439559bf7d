import json

import pytest

from raagspace.cli import main

GAMMA0 = {"vertices": ["a", "b", "c", "d"], "edges": [["a", "b"], ["b", "c"]]}
Q, R, W = 3, 4, 14


@pytest.fixture
def gfile(tmp_path):
    def write(data, name="g.json"):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_graph_info(capsys, gfile):
    code, out, _ = run(capsys, "graph-info", "-i", gfile(GAMMA0))
    assert code == 0
    assert "twist-dominant: b" in out.splitlines()
    assert "total order: d a c b" in out


def test_empty_graph(capsys, gfile):
    code, out, _ = run(capsys, "graph-info", "-i", gfile({"vertices": [], "edges": []}), "--format", "json")
    assert code == 0 and json.loads(out)["twistDominant"] == []


@pytest.mark.parametrize("text", ['{"vertices": ["a"], "edges": [["a", "a"]]}', "{not json", '{"vertices": ["a"], "edges": ["ab"]}'])
def test_unparseable_graphs(capsys, gfile, text):
    code, _, err = run(capsys, "graph-info", "-i", gfile(text))
    assert code == 2 and err.startswith("error:")


@pytest.mark.parametrize("graph, count", [
    ({"vertices": ["a", "b"], "edges": []}, 2),
    ({"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"], ["a", "c"]]}, 0),
    (GAMMA0, 22),
])
def test_partition_counts(capsys, gfile, graph, count):
    code, out, _ = run(capsys, "partitions", "-i", gfile(graph), "--format", "json")
    assert code == 0 and len(json.loads(out)["partitions"]) == count


def test_documented_partition_indices(capsys, gfile):
    _, out, _ = run(capsys, "partitions", "-i", gfile(GAMMA0), "--format", "json")
    rows = json.loads(out)["partitions"]

    def side(text):
        return frozenset((t.rstrip("-"), "-" if t.endswith("-") else "+") for t in text.split())

    def sides(row):
        return {frozenset(map(tuple, row["sideA"])), frozenset(map(tuple, row["sideB"]))}

    assert sides(rows[Q]) == {side("a d"), side("a- d- c c-")}
    assert sides(rows[R]) == {side("a c d"), side("a- c- d-")}
    assert sides(rows[W]) == {side("b d"), side("b- d-")}


def test_blowup_text(capsys, gfile):
    code, out, _ = run(capsys, "blowup", "-i", gfile(GAMMA0), "-p", str(Q))
    assert (code, out) == (0, "vertices=2 edges=6 squares=3 euler=-1\n")
    _, out, _ = run(capsys, "blowup", "-i", gfile(GAMMA0), "-p", f"Q{W},Q{Q}")
    assert out.startswith("vertices=4 ")


def test_incompatible_selection_names_pair(capsys, gfile):
    path = gfile(GAMMA0)
    _, out, _ = run(capsys, "partitions", "-i", path, "--format", "json")
    comp = json.loads(out)["compatible"]
    i, j = next((i, j) for i in range(len(comp)) for j in range(i) if not comp[i][j])
    code, _, err = run(capsys, "blowup", "-i", path, "-p", f"{i},{j}")
    assert code == 3 and "not compatible" in err


def test_bad_selectors(capsys, gfile):
    path = gfile(GAMMA0)
    assert run(capsys, "blowup", "-i", path, "-p", "99")[0] == 3
    assert run(capsys, "blowup", "-i", path, "-p", "x1")[0] == 2
    assert run(capsys, "blowup", "-i", path, "-p", '[{"sideA": [["a", "+"]], "sideB": [["a", "-"]]}]')[0] == 3


def test_inline_and_file_selectors_agree(capsys, gfile, tmp_path):
    path = gfile(GAMMA0)
    q = json.dumps({"sideA": [["a", "+"], ["d", "+"]], "sideB": [["a", "-"], ["c", "+"], ["c", "-"], ["d", "-"]]})
    (tmp_path / "q.json").write_text(q)
    outs = {run(capsys, "blowup", "-i", path, "-p", sel, "--format", "json")[1]
            for sel in (str(Q), q, "@" + str(tmp_path / "q.json"))}
    assert len(outs) == 1


def test_region_cap(capsys, gfile):
    assert run(capsys, "blowup", "-i", gfile(GAMMA0), "-p", f"{W},{Q}", "--cap", "3")[0] == 4
    assert run(capsys, "blowup", "-i", gfile(GAMMA0), "--cap", "0")[0] == 2


def test_dot_export(capsys, gfile):
    code, out, _ = run(capsys, "blowup", "-i", gfile(GAMMA0), "-p", str(Q), "--format", "dot")
    assert code == 0 and out.startswith("digraph") and "blue" in out
    assert run(capsys, "classify", "-i", gfile(GAMMA0), "--format", "dot")[0] == 3


def test_collapse(capsys, gfile):
    code, out, _ = run(capsys, "collapse", "-i", gfile(GAMMA0), "-p", f"{W},{Q}", "--index", "1")
    assert code == 0 and out.strip().endswith("isomorphic=true")
    assert run(capsys, "collapse", "-i", gfile(GAMMA0))[0] == 3


def test_classify(capsys, gfile):
    _, out, _ = run(capsys, "classify", "-i", gfile(GAMMA0), "--format", "json")
    rows = {r["label"]: r for r in json.loads(out)}
    assert rows["b"]["class"] == "TwistDominant" and rows["d"]["class"] == "TwistMinimal"


def test_fiber(capsys, gfile):
    code, out, _ = run(capsys, "fiber", "-i", gfile(GAMMA0), "-p", str(Q))
    lines = out.splitlines()
    assert code == 0 and lines[0] == "fiberDim=1"
    assert lines[2] == "kernel: -1 1 0"


def test_straighten_standard_is_constant(capsys, gfile):
    code, out, _ = run(capsys, "straighten", "-i", gfile(GAMMA0), "-p", str(Q), "--format", "json")
    samples = json.loads(out)["samples"]
    assert code == 0 and len(samples) == 5
    assert all(s["maxOffDiagonal"] == 0 and s["allowable"] for s in samples)
    assert len({json.dumps(s["metric"]) for s in samples}) == 1


def test_straighten_metric_round_trip(capsys, gfile, tmp_path):
    path = gfile(GAMMA0)
    _, out, _ = run(capsys, "straighten", "-i", path, "--samples", "1", "--format", "json")
    metric = json.loads(out)["samples"][0]["metric"]
    for row in metric["angles"]:
        if {row["a"], row["b"]} == {"a", "b"}:
            row["radians"] = 1.0
    mfile = tmp_path / "m.json"
    mfile.write_text(json.dumps(metric))
    code, out, _ = run(capsys, "straighten", "-i", path, "--metric", str(mfile), "--samples", "3")
    assert code == 0
    first, mid, last = out.splitlines()
    assert float(first.split()[1].split("=")[1]) < 1e-9
    assert "maxOffDiagonal=5.403e-01" in last
    mfile.write_text("{")
    assert run(capsys, "straighten", "-i", path, "--metric", str(mfile))[0] == 2


def test_output_is_deterministic(capsys, gfile, tmp_path):
    path = gfile(GAMMA0)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run(capsys, "blowup", "-i", path, "-p", f"{W},{Q}", "--format", "json", "--out", str(out))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_graph_round_trip(capsys, gfile):
    _, out, _ = run(capsys, "graph-info", "-i", gfile(GAMMA0), "--format", "json")
    again = gfile(json.loads(out)["graph"], "again.json")
    _, out2, _ = run(capsys, "graph-info", "-i", again, "--format", "json")
    assert out == out2


@pytest.mark.parametrize("command", ["blowup", "fiber", "straighten"])
def test_plots_written(capsys, gfile, tmp_path, command):
    png = tmp_path / "fig" / f"{command}.png"
    code, _, _ = run(capsys, command, "-i", gfile(GAMMA0), "-p", str(Q), "--plot", str(png))
    assert code == 0 and png.read_bytes()[:4] == b"\x89PNG"
