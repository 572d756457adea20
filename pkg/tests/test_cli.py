import json
import subprocess
import sys
from pathlib import Path

import pytest

from grothcat.cli import run
from grothcat.problem import dumps, load, loads

from .shipped import SHIPPED, data_path

GOLDEN = Path(__file__).parent / "golden"
COMMANDS = ["quotient", "gr-pres", "gr-diag", "verify"]

EXIT_CODES = {
    "ex41.json": {"quotient": 0, "gr-pres": 1, "gr-diag": 0, "verify": 0},
    "ex42.json": {"quotient": 0, "gr-pres": 0, "gr-diag": 0, "verify": 0},
    "ex43.json": {"quotient": 0, "gr-pres": 0, "gr-diag": 0, "verify": 0},
    "ex43_bad_lift.json": {"quotient": 0, "gr-pres": 0, "gr-diag": 0, "verify": 4},
    "ex43_incoherent.json": {"quotient": 0, "gr-pres": 3, "gr-diag": 0, "verify": 3},
    "ex44_X.json": {"quotient": 0, "gr-pres": 0, "gr-diag": 0, "verify": 0},
    "ex44_Xprime.json": {"quotient": 0, "gr-pres": 0, "gr-diag": 0, "verify": 0},
    "free_loop.json": {"quotient": 2, "gr-pres": 2, "gr-diag": 0, "verify": 2},
}

GOLDEN_RUNS = {
    "ex41_gr_diag.txt": ["gr-diag", "--input", data_path("ex41.json")],
    "ex42_gr_pres.txt": ["gr-pres", "--input", data_path("ex42.json")],
    "ex43_gr_pres.txt": ["gr-pres", "--input", data_path("ex43.json")],
    "ex43_quotient.txt": ["quotient", "--input", data_path("ex43.json")],
    "ex44_X_simplified.txt": ["gr-pres", "--simplify", "--input", data_path("ex44_X.json")],
    "ex44_Xprime_simplified.txt": ["gr-pres", "--simplify", "--input", data_path("ex44_Xprime.json")],
}


def test_every_shipped_file_has_expectations():
    assert sorted(EXIT_CODES) == SHIPPED


@pytest.mark.parametrize("name", sorted(EXIT_CODES))
def test_exit_codes(name):
    for cmd in COMMANDS:
        out, err, code = run([cmd, "--input", data_path(name)])
        assert code == EXIT_CODES[name][cmd], (cmd, err)
        if code in (0, 4):
            assert err == ""
        else:
            assert err.startswith("grothcat: ")


@pytest.mark.parametrize("golden", sorted(GOLDEN_RUNS))
def test_golden_output(golden):
    out, err, code = run(GOLDEN_RUNS[golden])
    assert code == 0, err
    assert out == (GOLDEN / golden).read_text(encoding="utf-8")


@pytest.mark.parametrize("name", SHIPPED)
def test_output_is_deterministic(name):
    for cmd in COMMANDS:
        for fmt in ["text", "json", "dot"]:
            argv = [cmd, "--format", fmt, "--input", data_path(name)]
            assert run(argv) == run(argv)


@pytest.mark.parametrize("name", SHIPPED)
def test_json_round_trip(name):
    p = load(data_path(name))
    assert loads(dumps(p)) == p
    assert dumps(loads(dumps(p))) == dumps(p)


def test_parse_error_position(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "schema": "grothcat/1",\n  "index": {\n}}} \n')
    out, err, code = run(["quotient", "--input", str(bad)])
    assert code == 1 and out == ""
    assert "line 4, column" in err


def test_schema_errors_name_the_problem(tmp_path):
    doc = json.loads(Path(data_path("ex43.json")).read_text(encoding="utf-8"))
    doc["actions"]["g"]["vertex_map"]["1"] = "9"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    out, err, code = run(["verify", "--input", str(bad)])
    assert code in (1, 3)
    assert "9" in err


def test_missing_file():
    out, err, code = run(["quotient", "--input", "/nonexistent/problem.json"])
    assert code == 1 and "nonexistent" in err


def test_dot_marks_connecting_arrows():
    out, _, code = run(["gr-pres", "--format", "dot", "--input", data_path("ex43.json")])
    assert code == 0
    assert "digraph" in out
    dashed = [line for line in out.splitlines() if 'style="dashed"' in line]
    assert len(dashed) == 3
    assert all("(g," in line for line in dashed)
    assert out.count("//") == 5


def test_json_output_keeps_input():
    out, _, code = run(["gr-pres", "--format", "json", "--input", data_path("ex43.json")])
    doc = json.loads(out)
    assert code == 0
    assert doc["presentation"]["simplified"] is False
    assert len(doc["presentation"]["relations"]) == 5
    original = json.loads(dumps(load(data_path("ex43.json"))))
    assert {k: v for k, v in doc.items() if k != "presentation"} == original
    q, _, _ = run(["quotient", "--format", "json", "--input", data_path("ex43.json")])
    assert json.loads(q)["quotient"]["certified"] is True


def test_field_override():
    out, _, code = run(["verify", "--field", "fp:3", "--input", data_path("ex42.json")])
    assert code == 0 and "all checks passed" in out
    _, err, code = run(["verify", "--field", "fp:4", "--input", data_path("ex42.json")])
    assert code == 1 and "4" in err


def test_bound_option():
    out, _, code = run(["quotient", "--bound", "3", "--input", data_path("ex43.json")])
    assert code == 2
    assert "NOT certified" in out
    _, err, code = run(["quotient", "--bound", "0", "--input", data_path("ex43.json")])
    assert code == 1 and "--bound" in err


def test_partial_quotient_lists_classes():
    out, _, code = run(["quotient", "--input", data_path("free_loop.json")])
    assert code == 2
    assert "(13 classes)" in out


def test_acyclic_without_relations_counts_paths(tmp_path):
    doc = {
        "schema": "grothcat/1",
        "index": {
            "vertices": ["1", "2", "3"],
            "arrows": [
                {"id": "a", "tail": "1", "head": "2"},
                {"id": "b", "tail": "1", "head": "2"},
                {"id": "c", "tail": "2", "head": "3"},
            ],
        },
    }
    f = tmp_path / "free.json"
    f.write_text(json.dumps(doc))
    out, _, code = run(["quotient", "--input", str(f)])
    assert code == 0
    assert "I(1,3): ca, cb (2 classes)" in out
    assert "I(1,2): a, b (2 classes)" in out


def test_verify_failure_report():
    out, _, code = run(["verify", "--input", data_path("ex43_bad_lift.json")])
    assert code == 4
    assert "verification FAILED" in out
    assert "FAIL" in out


def test_incoherent_functor_lists_violations():
    _, err, code = run(["gr-pres", "--input", data_path("ex43_incoherent.json")])
    assert code == 3
    assert "coherence" in err


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "grothcat", "gr-diag", "--input", data_path("ex41.json")],
        capture_output=True,
        encoding="utf-8",
    )
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "ex41_gr_diag.txt").read_text(encoding="utf-8")
