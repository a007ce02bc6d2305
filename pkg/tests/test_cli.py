import io
import subprocess
import sys

import pytest

from hhroute.cli import EXIT_IO, EXIT_NO_PATH, EXIT_OK, EXIT_USAGE, main, parse_path_file
from hhroute.graph import write_graph
from hhroute.overlay import read_weights
from hhroute.synth import grid_road_network

from conftest import DATA

EX1 = str(DATA / "example1.txt")


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def kv(text, prefix):
    line = next(ln for ln in text.splitlines() if ln.startswith(prefix))
    return dict(p.split("=", 1) for p in line.split())


@pytest.fixture
def ex1_hh(tmp_path):
    path = tmp_path / "ex1.hh"
    code, _ = run("preprocess", "--graph", EX1, "--hh-H", 3, "--levels", 1, "--out", path)
    assert code == EXIT_OK
    return path


def test_preprocess_table(tmp_path):
    code, text = run("preprocess", "--graph", EX1, "--hh-H", 3, "--levels", 1, "--out", tmp_path / "h")
    assert code == EXIT_OK
    assert text.splitlines()[0].split()[:3] == ["level", "nodes", "arcs"]
    assert kv(text, "level=0")["nodes"] == "7" and kv(text, "level=0")["arcs"] == "14"
    assert kv(text, "level=1")["nodes"] == "5" and kv(text, "level=1")["arcs"] == "3"


def test_preprocess_zero_levels(tmp_path):
    code, text = run("preprocess", "--graph", EX1, "--hh-H", 3, "--levels", 0, "--out", tmp_path / "h")
    assert code == EXIT_OK
    rows = [ln for ln in text.splitlines() if ln.startswith("level=")]
    assert rows == ["level=0 nodes=7 arcs=14 shortcuts=0 core_nodes=7 core_arcs=14"]


def test_preprocess_is_deterministic(tmp_path):
    g = tmp_path / "g.txt"
    write_graph(grid_road_network(15, 15, 1), g)
    for name in ("a", "b"):
        assert run("preprocess", "--graph", g, "--hh-H", 6, "--levels", 3, "--out", tmp_path / name)[0] == 0
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()


@pytest.mark.parametrize("mode", ["oracle", "heuristic", "naive"])
def test_query_modes_static(ex1_hh, mode):
    code, text = run("query", "--hh", ex1_hh, "--source", 0, "--target", 5, "--mode", mode)
    assert code == EXIT_OK
    assert kv(text, "mode=")["cost"] == "10"
    assert "path: 0 2 4 5" in text


def test_query_with_generated_weights(ex1_hh, tmp_path):
    w = tmp_path / "w.txt"
    assert run("gen-weights", "--graph", EX1, "--seed", 4, "--min-factor", 1, "--max-factor", 15,
               "--out", w)[0] == EXIT_OK
    costs = {}
    for mode in ("oracle", "heuristic", "naive"):
        code, text = run("query", "--hh", ex1_hh, "--source", 1, "--target", 5, "--weights", w, "--mode", mode)
        assert code == EXIT_OK
        costs[mode] = int(kv(text, "mode=")["cost"])
    assert costs["heuristic"] >= costs["oracle"] and costs["naive"] >= costs["oracle"]


def test_gen_weights_deterministic_and_exclude(tmp_path):
    ex = tmp_path / "ex.txt"
    ex.write_text("# keep these\n0\n3\n")
    outs = []
    for name in ("a", "b"):
        p = tmp_path / name
        assert run("gen-weights", "--graph", EX1, "--seed", 9, "--min-factor", 2, "--max-factor", 5,
                   "--exclude", ex, "--out", p)[0] == EXIT_OK
        outs.append(p.read_text())
    assert outs[0] == outs[1]
    batch = read_weights(tmp_path / "a")
    assert 0 not in batch.arcs and 3 not in batch.arcs and len(batch) == 12


def test_no_path_exit_code(ex1_hh, tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("3 1\n0 1 5\n")
    hh = tmp_path / "g.hh"
    run("preprocess", "--graph", g, "--hh-H", 1, "--levels", 1, "--out", hh)
    code, text = run("query", "--hh", hh, "--source", 1, "--target", 0)
    assert code == EXIT_NO_PATH
    assert kv(text, "mode=")["reachable"] == "0"


def test_usage_errors(ex1_hh):
    assert run("query", "--hh", ex1_hh, "--source", 0, "--target", 99)[0] == EXIT_USAGE
    assert run("preprocess", "--graph", EX1, "--hh-H", 0, "--levels", 1, "--out", "x")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["query", "--hh", str(ex1_hh)])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == EXIT_USAGE


def test_io_and_format_errors(tmp_path, capsys):
    assert run("query", "--hh", tmp_path / "missing", "--source", 0, "--target", 1)[0] == EXIT_IO
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n0 0 1\n")
    assert run("preprocess", "--graph", bad, "--hh-H", 2, "--levels", 1, "--out", tmp_path / "o")[0] == EXIT_IO
    assert "bad.txt:2" in capsys.readouterr().err
    junk = tmp_path / "junk.hh"
    junk.write_bytes(b"NOPE" + bytes(40))
    assert run("query", "--hh", junk, "--source", 0, "--target", 1)[0] == EXIT_IO


def test_export_path_round_trip(ex1_hh, tmp_path):
    out = tmp_path / "p.txt"
    assert run("export-path", "--hh", ex1_hh, "--source", 0, "--target", 5, "--out", out)[0] == EXIT_OK
    assert out.read_text() == "0\n2\n4\n5\n"
    assert parse_path_file(out.read_text()) == [0, 2, 4, 5]
    csv = tmp_path / "p.csv"
    run("export-path", "--hh", ex1_hh, "--source", 0, "--target", 5, "--out", csv, "--format", "csv")
    assert parse_path_file(csv.read_text()) == [0, 2, 4, 5]
    single = tmp_path / "s.txt"
    run("export-path", "--hh", ex1_hh, "--source", 3, "--target", 3, "--out", single)
    assert parse_path_file(single.read_text()) == [3]


def test_oracle_subcommand():
    code, text = run("oracle", "--graph", EX1, "--source", 0, "--target", 5)
    assert code == EXIT_OK and kv(text, "mode=")["cost"] == "10"
    code, text = run("oracle", "--graph", EX1, "--source", 0)
    assert "node=5 dist=10" in text


def test_bench_static_single_query(ex1_hh):
    code, text = run("bench", "--hh", ex1_hh, "--queries", 1, "--seed", 2,
                     "--min-factor", 1, "--max-factor", 1)
    assert code == EXIT_OK
    for algo in ("oracle", "hh-heuristic", "hh-naive"):
        rec = kv(text, f"algo={algo}")
        assert float(rec["error_mean_pct"]) == 0 and float(rec["error_max_pct"]) == 0


def test_bench_report_reproducible(tmp_path):
    g = tmp_path / "g.txt"
    write_graph(grid_road_network(12, 12, 2), g)
    hh = tmp_path / "g.hh"
    run("preprocess", "--graph", g, "--hh-H", 6, "--levels", 2, "--out", hh)
    reports = []
    for name in ("r1", "r2"):
        assert run("bench", "--hh", hh, "--queries", 30, "--seed", 5, "--report", tmp_path / name)[0] == 0
        reports.append((tmp_path / name).read_bytes())
    assert reports[0] == reports[1]
    assert b"algo=hh-naive" in reports[0]


def test_console_entry_point(ex1_hh):
    proc = subprocess.run([sys.executable, "-m", "hhroute", "query", "--hh", str(ex1_hh),
                           "--source", "0", "--target", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "cost=10" in proc.stdout
