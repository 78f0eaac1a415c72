import csv
import io
import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from ruminkit.cli import main
from ruminkit.io import validate_document

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_complex_heisenberg_table():
    code, out, _ = run("complex", "heisenberg(1)")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "heisenberg(1): n = 3, Q = 4, delta = 2"
    assert [ln.split()[:3] for ln in lines[2:]] == [["0", "1", "0"], ["1", "2", "1"], ["2", "2", "3"], ["3", "1", "4"]]


def test_complex_json_is_schema_valid_and_deterministic():
    code, a, _ = run("complex", "--algebra", "engel", "--format", "json")
    assert code == 0 and a == run("complex", "engel", "--format", "json")[1]
    doc = json.loads(a)
    validate_document(doc, "complex_report")
    assert [d["weights"] for d in doc["degrees"]] == [[0], [1], [3, 4], [6], [7]]
    assert doc["degrees"][1]["dc_orders"] == [2, 3]


def test_complex_csv():
    _, out, _ = run("complex", "heisenberg(1)", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["degree", "dim", "weights", "dc_orders"]
    assert rows[2] == ["1", "2", "1", "2"]


def test_dump_operators_lists_every_differential():
    _, out, _ = run("complex", "heisenberg(1)", "--format", "json", "--dump-operators")
    assert sorted(json.loads(out)["operators"]) == ["d_c^0", "d_c^1", "d_c^2"]


def test_verify_passes_and_flags_out_of_hypothesis():
    code, out, _ = run("verify", "heisenberg(2)")
    assert code == 0 and "all checks pass" in out
    code, out, _ = run("verify", "abelian(1)", "--format", "json")
    doc = json.loads(out)
    validate_document(doc, "verify_report")
    assert code == 0 and doc["checks"]["delta_bound"] == "out-of-hypothesis"


def test_verify_reports_broken_jacobi():
    code, out, _ = run("verify", str(ROOT / "tests" / "data" / "jacobi_broken.json"))
    assert code == 1
    assert "jacobi: fails on (X1, X2, X3)" in out


def test_unknown_algebra_is_input_error():
    code, _, err = run("complex", "sl(2)")
    assert code == 2 and err.startswith("error:")
    assert run("complex")[0] == 2


@pytest.mark.parametrize("mode", ["exact", "float"])
def test_flatnorm_sample_file(mode):
    code, out, _ = run("flatnorm", str(DATA / "heisenberg_current.json"), "--mode", mode, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    validate_document(doc, "flatnorm_report")
    if mode == "exact":
        assert (doc["mass"], doc["normal_mass"], doc["flat_primal"], doc["flat_dual"], doc["gap"]) == (
            "9/4", "9/2", "5/8", "5/8", "0")
    else:
        assert doc["flat_primal"] == pytest.approx(0.625, rel=1e-9)


def test_flatnorm_zero_and_edge_currents():
    code, out, _ = run("flatnorm", str(DATA / "zero_current.json"))
    assert code == 0 and "flat_primal  0" in out
    code, out, _ = run("flatnorm", str(DATA / "edge_current.json"))
    assert code == 2 and out.startswith("margin error")


def test_flatnorm_dumps_lp_to_stderr():
    code, _, err = run("flatnorm", str(DATA / "heisenberg_current.json"), "--dump-operators")
    assert code == 0 and err.startswith("Minimize") and err.rstrip().endswith("End")


def test_flatnorm_bad_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"algebra": "heisenberg(1)", "dimension": 1}')
    assert run("flatnorm", str(bad))[0] == 2
    assert run("flatnorm", str(tmp_path / "missing.json"))[0] == 2


def test_compactness_small_run_is_deterministic():
    argv = ["compactness", "--samples", "4", "--levels", "2", "--seed", "5", "--format", "json"]
    code, a, _ = run(*argv)
    assert code == 0 and a == run(*argv)[1]
    doc = json.loads(a)
    validate_document(doc, "probe_report")
    assert doc["config"]["mode"] == "float" and len(doc["levels"]) == 2


def test_compactness_bad_parameters():
    assert run("compactness", "--samples", "0")[0] == 2
    assert run("compactness", "--box", "0:1,0:1")[0] == 2


@pytest.mark.skipif(shutil.which("ruminkit") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["ruminkit", "complex", "abelian(2)", "--format", "csv"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.splitlines()[1] == "0,1,0,1"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ruminkit.cli", "verify", "engel"], capture_output=True, text=True)
    assert res.returncode == 0
