import io
import json
import subprocess
import sys

import pytest

from pflab.cli import main, render_table
from pflab.families import complete_bipartite, cycle, petersen
from pflab.graph_core import format_graph


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def k33_file(tmp_path):
    p = tmp_path / "k33.txt"
    p.write_text(format_graph(complete_bipartite(3, 3)))
    return str(p)


def test_matchings(capsys, k33_file):
    code, rep = run_json(capsys, "matchings", k33_file)
    assert code == 0 and rep["result"]["count"] == 6
    code, rep = run_json(capsys, "matchings", "family:petersen:", "--list")
    assert rep["result"]["count"] == 6 and len(rep["result"]["matchings"]) == 6


def test_matchings_not_matchable(capsys, tmp_path):
    p = tmp_path / "p.txt"
    p.write_text("4 2\n1 2\n1 3\n")
    code, rep = run_json(capsys, "matchings", str(p))
    assert code == 0 and rep["result"] == {"count": 0, "matchable": False}
    code, rep = run_json(capsys, "matchings", "family:complete:3")
    assert rep["result"]["matchable"] is False


def test_parse_error_exit_code(capsys, tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("3 1\n1 1\n")
    code, rep = run_json(capsys, "matchings", str(p))
    assert code == 1 and rep["error"]["type"] == "ParseError"
    code, _ = run(capsys, "matchings", str(tmp_path / "missing.txt"))
    assert code == 1


def test_pfnum(capsys, k33_file, tmp_path):
    code, rep = run_json(capsys, "pfnum", k33_file)
    assert code == 0
    res = rep["result"]
    assert res["k"] == 4 and res["status"] == "exact" and len(res["witness"]) == 4
    code, rep = run_json(capsys, "pfnum", "family:cycle:4")
    assert rep["result"]["k"] == 1


def test_pfnum_budget(capsys, k33_file):
    code, rep = run_json(capsys, "pfnum", k33_file, "--k-budget", "2")
    assert code == 2 and rep["result"]["status"] == "lower_bound_only" and rep["result"]["k"] == 3


def test_pfnum_resource_limit(capsys, monkeypatch):
    monkeypatch.setenv("PFLAB_LIMITS", "cyclomatic=2")
    code, rep = run_json(capsys, "pfnum", "family:complete-bipartite:3,3")
    assert code == 2 and rep["error"]["type"] == "ResourceError"


def test_symbolic_count_from_pfnum_report(capsys, k33_file, tmp_path):
    _, out = run(capsys, "pfnum", k33_file)
    report = tmp_path / "k33.json"
    report.write_text(out)
    code, rep = run_json(capsys, "symbolic-count", k33_file, str(report))
    assert code == 0
    assert rep["result"]["count"] == 6 and rep["result"]["d"] == 3 and rep["result"]["agrees"]


def test_symbolic_count_c4(capsys, tmp_path):
    kd = tmp_path / "c4.json"
    kd.write_text('["0010"]')
    code, rep = run_json(capsys, "symbolic-count", "family:cycle:4", str(kd))
    assert code == 0 and rep["result"]["count"] == 2 and rep["result"]["d"] == 0


def test_symbolic_count_refuses(capsys, k33_file, tmp_path):
    kd = tmp_path / "bad.json"
    kd.write_text('{"korientation": ["000000000", "000000001"]}')
    code, rep = run_json(capsys, "symbolic-count", k33_file, str(kd))
    assert code == 1 and rep["result"]["pfaffian"] is False
    m, n = rep["result"]["obstruction"]
    assert m != n


def test_bad_korientation_file(capsys, k33_file, tmp_path):
    kd = tmp_path / "bad.json"
    kd.write_text('{"x": 1}')
    code, _ = run(capsys, "symbolic-count", k33_file, str(kd))
    assert code == 1
    kd.write_text("not json")
    code, _ = run(capsys, "symbolic-count", k33_file, str(kd))
    assert code == 1


def test_split(capsys, tmp_path):
    g = tmp_path / "p.txt"
    g.write_text(format_graph(petersen()))
    _, out = run(capsys, "pfnum", str(g))
    kd = tmp_path / "p.json"
    kd.write_text(out)
    code, rep = run_json(capsys, "split", str(g), "--shore", "1,2,3,4,5", str(kd))
    assert code == 0 and rep["result"]["verified"]
    assert len(rep["result"]["reversal_shores"]) == 4


def test_split_c6_tight(capsys, tmp_path):
    kd = tmp_path / "c6.json"
    kd.write_text('["000001"]')
    code, rep = run_json(capsys, "split", "family:cycle:6", "--shore", "1,2,3", str(kd))
    assert code == 0 and len(rep["result"]["korientation"]) == 1


def test_split_refuses_non_separating(capsys, tmp_path):
    kd = tmp_path / "c4.json"
    kd.write_text('["0010"]')
    code, rep = run_json(capsys, "split", "family:cycle:4", "--shore", "1,2", str(kd))
    assert code == 1 and rep["error"]["message"] == "cut not separating"


def test_decompose(capsys):
    code, rep = run_json(capsys, "decompose", "family:cycle:6", "--seed", "3")
    assert code == 0 and rep["result"]["braces"] == 2 and rep["result"]["bricks"] == 0


def test_generate(capsys):
    code, out = run(capsys, "generate", "cycle", "4")
    assert code == 0 and out == format_graph(cycle(4))


def test_verify_suites(capsys):
    code, rep = run_json(capsys, "verify", "signs", "--seed", "1")
    assert code == 0 and rep["result"]["passed"]
    code, rep = run_json(capsys, "verify", "khatri-rao", "--seed", "7")
    checks = rep["result"]["suites"][0]["checks"]
    assert code == 0 and checks[0]["trials"] == 100


def test_conjecture_scan_is_report_only(capsys):
    code, rep = run_json(capsys, "verify", "conjecture-scan")
    assert code == 0
    assert all("status" in inst for inst in rep["result"]["suites"][0]["instances"])


def test_reports_are_byte_identical(capsys):
    _, first = run(capsys, "verify", "cuts", "--seed", "5")
    _, second = run(capsys, "verify", "cuts", "--seed", "5")
    assert first == second
    _, a = run(capsys, "pfnum", "family:petersen:")
    _, b = run(capsys, "pfnum", "family:petersen:")
    assert a == b


def test_timings_flag(capsys):
    _, rep = run_json(capsys, "--timings", "matchings", "family:cycle:4")
    assert "timings" in rep
    _, rep = run_json(capsys, "matchings", "family:cycle:4")
    assert "timings" not in rep


def test_table_rendering(capsys):
    code, out = run(capsys, "matchings", "family:cycle:4", "--format", "table")
    assert code == 0 and "result.count\t2" in out.splitlines()
    assert render_table({"a": {"b": [1, 2]}}) == "a.b\t[1, 2]\n"


def test_stdin_graph(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO(format_graph(cycle(6))))
    code, rep = run_json(capsys, "matchings", "-")
    assert rep["result"]["count"] == 2


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "pflab.cli", "generate", "complete-bipartite", "1", "1"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout == "2 1\n1 2\n"
