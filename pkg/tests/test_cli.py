import json
import subprocess
import sys

import pytest

from monotone_infer.cli import bench
from monotone_infer.cli.main import main

COUNTER = """vars 3
init (and (not p0) (not p1) (not p2))
trans (and (iff p0' (not p0)) (iff p1' (xor p1 p0)) (iff p2' (xor p2 (and p0 p1))))
bad (and p0 p1 p2)
"""


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def fields(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line)


@pytest.fixture
def parity_file(tmp_path, capsys):
    path = tmp_path / "parity.sys"
    assert run(capsys, "gen", "parity", "--n", 5, "-o", path)[0] == 0
    return path


def test_gen_writes_metadata(parity_file):
    text = parity_file.read_text()
    assert "; family parity" in text and "; s 1" in text and "basis (and p0 p1 p2 p3 p4)" in text


def test_infer_parity_then_verify_round_trip(tmp_path, capsys, parity_file):
    code, out, _ = run(capsys, "infer", parity_file, "--json", tmp_path / "r.json")
    assert code == 0
    rep = fields(out)
    assert rep["outcome"] == "invariant"
    data = json.loads((tmp_path / "r.json").read_text())
    assert data["schema"] == "monotone-infer/report-v1" and data["queries"]["inductiveness"] >= 1
    inv = tmp_path / "inv.txt"
    inv.write_text(rep["invariant"] + "\n")
    code, out, _ = run(capsys, "verify", parity_file, inv)
    assert code == 0 and out.startswith("PASS")


@pytest.mark.parametrize("algo", ["cdnf-itp", "dual-itp"])
def test_infer_two_bits_round_trip(tmp_path, capsys, algo):
    sysf = tmp_path / "tb.sys"
    run(capsys, "gen", "two-bits", "--n", 6, "--seed", 2, "-o", sysf)
    code, out, _ = run(capsys, "infer", sysf, "--algo", algo, "--s", 3)
    assert code == 0
    inv = tmp_path / "inv.txt"
    inv.write_text(fields(out)["invariant"])
    assert run(capsys, "verify", sysf, inv)[0] == 0


def test_infer_unsafe_and_inconclusive(tmp_path, capsys):
    sysf = tmp_path / "c.sys"
    sysf.write_text(COUNTER)
    code, out, _ = run(capsys, "infer", sysf, "--s", 7)
    assert code == 1 and fields(out)["reached"] == "111"
    code, out, _ = run(capsys, "infer", sysf, "--max-restarts", 0)
    assert code == 2 and fields(out)["outcome"] == "inconclusive"


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.sys"
    bad.write_text("vars 2\ninit (and p0\n")
    code, _, err = run(capsys, "infer", bad)
    assert code == 3 and "error" in err
    assert run(capsys, "infer", tmp_path / "missing.sys")[0] == 3
    assert run(capsys, "infer")[0] == 3


def test_ai_parity_report(capsys, parity_file):
    code, out, _ = run(capsys, "ai", parity_file)
    rep = fields(out)
    assert code == 2 and rep["outcome"] == "inconclusive"
    assert rep["iterations"] == "2" and rep["lambda"] == "6" and rep["tr_factors"] == "5"
    assert rep["term_counts"] == "1 5 5" and rep["modes_agree"] == "True"


def test_ai_empty_basis_is_usage_error(tmp_path, capsys):
    sysf = tmp_path / "c.sys"
    sysf.write_text(COUNTER)
    assert run(capsys, "ai", sysf)[0] == 3
    empty = tmp_path / "basis.txt"
    empty.write_text("; nothing\n")
    assert run(capsys, "ai", sysf, "--basis", empty)[0] == 3


def test_ai_with_basis_file(tmp_path, capsys):
    sysf = tmp_path / "c.sys"
    sysf.write_text(COUNTER)
    basis = tmp_path / "basis.txt"
    basis.write_text("(and p0 p1 p2)\n(not p0)\n")
    code, out, _ = run(capsys, "ai", sysf, "--basis", basis, "--mode", "direct")
    assert code in (0, 2) and fields(out)["modes_agree"] == "True"


def test_learn_tree_and_formula(tmp_path, capsys):
    tree = tmp_path / "t.txt"
    tree.write_text("(node p0 (leaf false) (node p2 (leaf true) (leaf false)))")
    code, out, _ = run(capsys, "learn", tree, "--n", 3)
    assert code == 0 and fields(out)["outcome"] == "equivalent"
    f = tmp_path / "f.txt"
    f.write_text("true")
    code, out, _ = run(capsys, "learn", f, "--n", 4)
    assert code == 0 and fields(out)["eq_queries"] == "1"
    assert run(capsys, "learn", f, "--n", 99)[0] == 3


def test_verify_reports_failed_condition(tmp_path, capsys):
    sysf = tmp_path / "c.sys"
    sysf.write_text(COUNTER)
    inv = tmp_path / "inv.txt"
    inv.write_text("(and (not p0) (not p1) (not p2))")
    code, out, _ = run(capsys, "verify", sysf, inv)
    assert code == 1 and "FAIL consecution: 000 -> 100" in out


def test_gen_seed_from_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("MONOTONE_INFER_SEED", "7")
    _, a, _ = run(capsys, "gen", "fenced-random", "--n", 6)
    _, b, _ = run(capsys, "gen", "fenced-random", "--n", 6, "--seed", 7)
    assert a == b and "; seed 7" in a
    monkeypatch.setenv("MONOTONE_INFER_SEED", "x")
    assert run(capsys, "gen", "fenced-random", "--n", 6)[0] == 3


def test_gen_errors(capsys, monkeypatch):
    assert run(capsys, "gen", "parity", "--n", 4)[0] == 3
    from monotone_infer.cli import generators as G

    def broken(n, rng):
        raise G.CertificationError("never")

    monkeypatch.setattr(G, "fenced_tree", broken)
    assert run(capsys, "gen", "fenced-random", "--n", 6)[0] == 4


def test_reports_are_byte_identical(tmp_path, capsys, parity_file):
    a = run(capsys, "infer", parity_file)[1]
    b = run(capsys, "infer", parity_file)[1]
    assert a == b and "seconds" not in a
    assert "seconds" in run(capsys, "infer", parity_file, "--timing")[1]


def test_bench_suites(capsys):
    assert run(capsys, "bench", "--suite", "nope")[0] == 3
    code, out, _ = run(capsys, "bench", "--suite", "empty")
    assert code == 0 and out == ""
    assert bench.run_suite("empty") == []


def test_bench_smoke_passes(tmp_path, capsys):
    code, out, _ = run(capsys, "bench", "--suite", "smoke", "--json", tmp_path / "b.json")
    assert code == 0
    data = json.loads((tmp_path / "b.json").read_text())
    assert [c["id"] for c in data["criteria"]] == list(range(1, 13))
    assert all(c["passed"] for c in data["criteria"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "monotone_infer", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "0.1.0"
