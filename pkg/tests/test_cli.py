import json

import pytest

from naewidth import serialize
from naewidth.cli import run
from naewidth.formula import parse_nae_dimacs
from naewidth.wgraph import WeightedGraph

FOUR_COPIES = "p cnf 3 4\n" + "1 2 3 0\n" * 4


@pytest.fixture
def cnf_file(tmp_path):
    path = tmp_path / "f.cnf"
    path.write_text(FOUR_COPIES)
    return str(path)


def write_graph_doc(tmp_path, g, name="g.json"):
    path = tmp_path / name
    path.write_text(serialize.canonical_json(serialize.weighted_graph_doc(g)))
    return str(path)


def k4_file(tmp_path):
    g = WeightedGraph()
    for i in range(4):
        g.add_vertex(str(i))
    for u in range(4):
        for v in range(u + 1, 4):
            g.add_edge(u, v, 1)
    return write_graph_doc(tmp_path, g, "k4.json")


def test_nae_check_and_solve(cnf_file, capsys):
    assert run(["nae", "check", cnf_file]) == 0
    assert run(["nae", "solve", cnf_file]) == 0
    out = json.loads(capsys.readouterr().out.splitlines()[-1])
    assert out == {"satisfiable": True, "assignment": "FFT"}


def test_nae_check_invalid_exits_3(tmp_path, capsys):
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf 2 1\n1 -2 2 0\n")
    assert run(["nae", "check", str(bad)]) == 3
    err = capsys.readouterr().err
    assert json.loads(err)["type"] == "validation"


def test_nae_solve_unsat_exits_1(tmp_path):
    fano = ["p cnf 7 7"] + ["1 2 3 0", "1 4 5 0", "1 6 7 0", "2 4 6 0",
                            "2 5 7 0", "3 4 7 0", "3 5 6 0"]
    path = tmp_path / "fano.cnf"
    path.write_text("\n".join(fano) + "\n")
    assert run(["nae", "solve", str(path), "--lax"]) == 1


def test_nae_gen_deterministic(capsys):
    assert run(["nae", "gen", "-n", "6", "--seed", "3", "--count", "2", "--sat-only"]) == 0
    first = capsys.readouterr().out
    assert run(["nae", "gen", "-n", "6", "--seed", "3", "--count", "2", "--sat-only"]) == 0
    assert capsys.readouterr().out == first
    # each emitted document is a header plus eight clauses
    lines = first.splitlines()
    assert len(lines) == 18
    parse_nae_dimacs("\n".join(lines[:9]) + "\n", strict=True)


def test_usage_error_exits_2():
    assert run(["nonsense"]) == 2
    assert run(["reduce"]) == 2


def test_reduce_witness_balance_flow(cnf_file, tmp_path, capsys):
    h_path = str(tmp_path / "H.json")
    assert run(["reduce", "step1", "--profile", "small", "-i", cnf_file, "-o", h_path]) == 0
    order_path = str(tmp_path / "order.json")
    assert run(["witness", "order", "-i", h_path, "--cnf", cnf_file, "-o", order_path]) == 0
    assert run(["balance", "check", "-i", h_path, "--order", order_path,
                "--threshold", "36"]) == 0
    out = json.loads(capsys.readouterr().out.splitlines()[-1])
    assert out["balanced"] is True
    # a too-small threshold is a clean negative answer
    assert run(["balance", "check", "-i", h_path, "--order", order_path,
                "--threshold", "35"]) == 1


def test_witness_decode_round_trip(cnf_file, tmp_path, capsys):
    h_path = str(tmp_path / "H.json")
    run(["reduce", "step1", "--profile", "small", "-i", cnf_file, "-o", h_path])
    order_path = str(tmp_path / "order.json")
    run(["witness", "order", "-i", h_path, "--cnf", cnf_file,
         "--assignment", "TFF", "-o", order_path])
    capsys.readouterr()
    assert run(["witness", "decode", "-i", h_path, "--cnf", cnf_file,
                "--order", order_path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["nae_satisfies"] is True


def test_reduce_all_byte_identical(cnf_file, tmp_path):
    prefix1 = str(tmp_path / "run1")
    prefix2 = str(tmp_path / "run2")
    assert run(["reduce", "all", "--profile", "small", "-i", cnf_file, "-o", prefix1]) == 0
    assert run(["reduce", "all", "--profile", "small", "-i", cnf_file, "-o", prefix2]) == 0
    for suffix in ("step1", "step2", "step3"):
        a = (tmp_path / f"run1.{suffix}.json").read_bytes()
        b = (tmp_path / f"run2.{suffix}.json").read_bytes()
        assert a == b


def test_custom_profile_parsing(cnf_file, tmp_path):
    h_path = str(tmp_path / "H.json")
    assert run(["reduce", "step1", "--profile", "custom:36,3,6,3,3",
                "-i", cnf_file, "-o", h_path]) == 0
    assert run(["reduce", "step1", "--profile", "custom:1,2,3",
                "-i", cnf_file, "-o", h_path]) == 3
    assert run(["reduce", "step1", "--profile", "bogus",
                "-i", cnf_file, "-o", h_path]) == 3


def test_width_exact_and_cap_guard(tmp_path, capsys):
    k4 = k4_file(tmp_path)
    assert run(["width", "exact", "--kind", "mim", "-i", k4]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["value"] == 1
    assert run(["width", "exact", "--kind", "mim", "--cap", "3", "-i", k4]) == 3


def test_cutval_and_budget(tmp_path, capsys):
    k4 = k4_file(tmp_path)
    cut = tmp_path / "cut.json"
    cut.write_text(json.dumps({"A": [0, 1], "B": [2, 3]}))
    assert run(["cutval", "--kind", "mim", "-i", k4, "--cut", str(cut)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"exact": True, "kind": "mim", "value": 1}
    assert run(["cutval", "--kind", "sim", "-i", k4, "--cut", str(cut),
                "--budget", "0"]) == 4


def test_balance_solve(tmp_path, capsys):
    g = WeightedGraph()
    for i in range(3):
        g.add_vertex(str(i))
    g.add_edge(0, 1, 4)
    g.add_edge(1, 2, 3)
    path = write_graph_doc(tmp_path, g)
    out_path = str(tmp_path / "order.json")
    assert run(["balance", "solve", "-i", path, "--threshold", "5",
                "-o", out_path]) == 0
    order = serialize.order_from_doc(json.loads(open(out_path).read()))
    assert order.index(1) == 1
    assert run(["balance", "solve", "-i", path, "--threshold", "3"]) == 1


def test_layout_group_project_flow(cnf_file, tmp_path, capsys):
    # tiny 2-gadget instance driven end to end through the layout commands
    h = WeightedGraph()
    h.add_vertex("u")
    h.add_vertex("v")
    h.add_edge(0, 1, 3)
    h_path = write_graph_doc(tmp_path, h, "h.json")
    g_path = str(tmp_path / "g.json")
    assert run(["reduce", "step2", "-i", h_path, "-o", g_path]) == 0
    gstar_path = str(tmp_path / "gstar.json")
    assert run(["reduce", "step3", "--profile", "small", "-i", g_path,
                "-o", gstar_path]) == 0
    order_path = str(tmp_path / "horder.json")
    open(order_path, "w").write(serialize.canonical_json(serialize.order_doc([0, 1])))
    layout_path = str(tmp_path / "layout.json")
    assert run(["witness", "caterpillar", "-i", gstar_path, "--order", order_path,
                "-o", layout_path]) == 0
    grouped_path = str(tmp_path / "grouped.json")
    assert run(["layout", "group", "-i", gstar_path, "--hybrid", layout_path,
                "-o", grouped_path]) == 0
    mapping_path = str(tmp_path / "mapping.json")
    assert run(["layout", "to-mapping", "-i", gstar_path, "--hybrid", grouped_path,
                "-o", mapping_path]) == 0
    assert run(["layout", "project", "-i", gstar_path, "--mapping", mapping_path]) == 0
    out = capsys.readouterr().out
    doc = json.loads(out)
    assert doc["kind"] == "tree_mapping"
    assert sorted(part for _, part in doc["parts"]) == [0, 1]


def test_witness_path_mapping(cnf_file, tmp_path, capsys):
    h = WeightedGraph()
    for i in range(3):
        h.add_vertex(str(i))
    h.add_edge(0, 1, 2)
    h.add_edge(1, 2, 3)
    h_path = write_graph_doc(tmp_path, h, "h.json")
    g_path = str(tmp_path / "g.json")
    run(["reduce", "step2", "-i", h_path, "-o", g_path])
    order_path = str(tmp_path / "horder.json")
    open(order_path, "w").write(serialize.canonical_json(serialize.order_doc([2, 1, 0])))
    capsys.readouterr()
    assert run(["witness", "path-mapping", "-i", g_path, "--order", order_path]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "tree_mapping" and doc["is_path"]
