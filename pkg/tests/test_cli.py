import json
import subprocess
import sys

import pytest
from conftest import netrail

from failover.cli import ERROR, FOUND, OK, main
from failover.graph import complete, complete_bipartite, edge_list, format_edge_text


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, g in {
        "k5": complete(5),
        "k8": complete(8),
        "k33": complete_bipartite(3, 3),
        "netrail": netrail(),
        "c6": edge_list([(i, (i + 1) % 6) for i in range(6)]),
    }.items():
        p = tmp_path / f"{name}.txt"
        p.write_text(format_edge_text(g))
        paths[name] = p
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_help_and_version(capsys):
    assert run(capsys, "--version")[0] == OK
    assert run(capsys, "--help")[0] == OK
    assert run(capsys, "no-such-command")[0] == ERROR


def test_classify_netrail(files, capsys):
    code, out, _ = run(capsys, "classify", files["netrail"], "--json")
    assert code == OK
    row = json.loads(out)
    assert row["touring"] == "Impossible" and row["destination"] == "Sometimes"
    code, out, _ = run(capsys, "classify", files["netrail"])
    assert code == OK and out.splitlines()[0].startswith("name,n,m,")


def test_classify_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "classify", tmp_path / "nope.txt")
    assert code == ERROR and err.startswith("error:")


def test_pattern_gen_then_verify_holds(files, tmp_path, capsys):
    pat = tmp_path / "alg1.json"
    assert run(capsys, "pattern", "gen", "alg1-k5", files["k5"], "--s", 0, "--t", 4, "--out", pat)[0] == OK
    code, out, _ = run(capsys, "verify", files["k5"], pat, "--mode", "perfect")
    assert code == OK and json.loads(out)["kind"] == "holds"


def test_verify_finds_counterexample(files, tmp_path, capsys):
    pat = tmp_path / "rr.json"
    run(capsys, "pattern", "gen", "round-robin", files["k5"], "--s", 0, "--t", 4, "--out", pat)
    code, out, _ = run(capsys, "verify", files["k5"], pat, "--mode", "perfect")
    v = json.loads(out)
    assert code == FOUND and v["kind"] == "counterexample"


def test_verify_budget_is_inconclusive(files, tmp_path, capsys):
    pat = tmp_path / "alg1.json"
    run(capsys, "pattern", "gen", "alg1-k5", files["k5"], "--s", 0, "--t", 4, "--out", pat)
    code, out, _ = run(capsys, "verify", files["k5"], pat, "--mode", "perfect", "--budget", 5)
    assert code == OK and json.loads(out)["kind"] != "holds"


def test_verify_rejects_bad_mode_and_foreign_graph(files, tmp_path, capsys):
    pat = tmp_path / "alg1.json"
    run(capsys, "pattern", "gen", "alg1-k5", files["k5"], "--s", 0, "--t", 4, "--out", pat)
    assert run(capsys, "verify", files["k5"], pat, "--mode", "sideways")[0] == ERROR
    assert run(capsys, "verify", files["k33"], pat, "--mode", "perfect")[0] == ERROR


def test_pattern_gen_errors(files, capsys):
    assert run(capsys, "pattern", "gen", "alg1-k5", files["k5"])[0] == ERROR  # needs --s and --t
    assert run(capsys, "pattern", "gen", "alg1-k5", files["k33"], "--s", 0, "--t", 1)[0] == ERROR
    assert run(capsys, "pattern", "gen", "made-up", files["k5"])[0] == ERROR


def test_pattern_gen_prints_json(files, capsys):
    code, out, _ = run(capsys, "pattern", "gen", "outerplanar-tour", files["c6"])
    assert code == OK and json.loads(out)["model"] == "Touring"


def test_attack_gadget_k7(capsys):
    code, out, _ = run(capsys, "attack", "--gadget", "k7_source_dest")
    info = json.loads(out)
    assert code == FOUND
    assert len(info["survivors"]) == 7 and info["outcome"]["kind"] == "looped"


def test_attack_gadget_without_pattern_lists_failures(capsys):
    code, out, _ = run(capsys, "attack", "--gadget", "k44_F12")
    assert code == OK and json.loads(out)["failed"]


def test_attack_complete_r(capsys):
    code, out, _ = run(capsys, "attack", "--complete-r", 1, "--alg", "distance2", "--s", 0, "--t", 1)
    res = json.loads(out)
    assert code == FOUND and res["graph"] == "K8" and res["outcome"]["kind"] != "reached"


def test_attack_needs_a_target(capsys):
    assert run(capsys, "attack")[0] == ERROR
    assert run(capsys, "attack", "--complete-r", 0)[0] == ERROR


def test_tour_outerplanar_and_ham(files, capsys):
    code, out, _ = run(capsys, "tour", files["c6"])
    assert code == OK and json.loads(out)["kind"] == "holds"
    code, out, _ = run(capsys, "tour", files["k5"], "--k", 2)
    assert code == OK and json.loads(out)["kind"] == "holds"
    assert run(capsys, "tour", files["k5"], "--k", 3)[0] == ERROR
    assert run(capsys, "tour", files["k5"])[0] == ERROR  # not outerplanar


def test_ingest_and_report(files, tmp_path, capsys):
    norm = tmp_path / "norm"
    code, out, _ = run(capsys, "ingest", files["k5"].parent, "--out", norm)
    assert code == OK and "# 5 entries" in out
    assert sorted(p.name for p in norm.iterdir()) == ["K3,3.txt", "K5.txt", "K8.txt", "Netrail.txt", "c6.txt"]
    csv_path = tmp_path / "out" / "report.csv"
    code, out, _ = run(capsys, "report", norm, "--out", csv_path)
    assert code == OK and csv_path.exists() and "planar not outerplanar: 20.00%" in out
    first = csv_path.read_bytes()
    run(capsys, "report", norm, "--out", csv_path)
    assert csv_path.read_bytes() == first
    assert run(capsys, "report", norm, "--out", tmp_path / "bars.svg", "--format", "svg-bars")[0] == OK
    code, out, _ = run(capsys, "report", "-", "--out", tmp_path / "dots", "--format", "dot-gadgets")
    assert code == OK and "k7_source_dest.dot" in out


def test_report_on_empty_directory(tmp_path, capsys):
    assert run(capsys, "report", tmp_path, "--out", tmp_path / "r.csv")[0] == ERROR


def test_console_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "failover.cli", "classify", str(files["k5"]), "--json"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == OK and json.loads(res.stdout)["destination"] == "Impossible"
