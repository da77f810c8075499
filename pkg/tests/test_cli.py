import json
import math
import subprocess
import sys
import time
from pathlib import Path

import pytest

from superprolong.cli.main import EXIT_COMPUTE, EXIT_INVALID, EXIT_OK, corpus_names, load_example, main, run_report
from superprolong.cli.schema import ProblemSpec, SpecError, validate_report, validate_spec

GOLDEN = Path(__file__).parent / "golden"
CORPUS = corpus_names()


def _close(a, b, path="$"):
    if isinstance(a, float) or isinstance(b, float):
        assert isinstance(a, (int, float)) and isinstance(b, (int, float)), path
        # residuals are noise-level; everything else must agree closely
        if "residual" in path or "imag" in path:
            assert abs(a - b) <= 1e-9, path
        else:
            assert math.isclose(a, b, rel_tol=1e-8, abs_tol=1e-9), path
    elif isinstance(a, dict):
        assert isinstance(b, dict) and a.keys() == b.keys(), path
        for k in a:
            _close(a[k], b[k], f"{path}/{k}")
    elif isinstance(a, list):
        assert isinstance(b, list) and len(a) == len(b), path
        for i, (x, y) in enumerate(zip(a, b)):
            _close(x, y, f"{path}/{i}")
    else:
        assert a == b, path


# --- corpus --------------------------------------------------------------

def test_corpus_covers_paper_examples():
    for name in ["osp_2_2_finite_type", "p_2_finite_type", "spin_w_2_0_finite_type",
                 "spin_w_3_0_finite_type", "spin_w_4_0_finite_type", "gl_1_prolong"]:
        assert name in CORPUS


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_matches_golden(name):
    t0 = time.perf_counter()
    rep, code = run_report(load_example(name))
    assert time.perf_counter() - t0 < 60
    validate_report(rep)
    rep["exit_code"] = code
    gold = json.loads((GOLDEN / f"{name}.json").read_text())
    _close(rep, gold)


@pytest.mark.parametrize("name", CORPUS)
def test_schema_roundtrip(name):
    data = load_example(name)
    assert ProblemSpec.parse(data).serialize() == data


@pytest.mark.parametrize("name", ["spin_w_3_0_admissible", "flow_linear", "killing_metric_2_2"])
def test_determinism(name, capsys):
    kind = load_example(name)["task"]["kind"]
    outs = []
    for _ in range(2):
        assert main([kind, "--example", name, "--json"]) == EXIT_OK
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    validate_report(json.loads(outs[0]))


# --- worked examples -----------------------------------------------------

def test_osp_finite_type():
    rep, code = run_report({"version": "1", "space": {"even": 2, "odd": 2},
                            "algebra": {"builtin": "osp"}, "task": {"kind": "finite-type"}})
    assert code == EXIT_OK and rep["result"]["verdict"] == "finite(1)"


def test_empty_custom_prolong():
    rep, code = run_report(load_example("custom_empty_prolong"))
    assert code == EXIT_OK
    assert all(lv["even"] == lv["odd"] == 0 for lv in rep["result"]["levels"])


def test_spin_w_admissible_report():
    rep, code = run_report(load_example("spin_w_3_0_admissible"))
    assert code == EXIT_OK
    r = rep["result"]
    assert r["verdict"] == "admissible"
    assert r["levels"][0]["real_even_dim"] == 3


def test_gl_mixed_is_inadmissible():
    rep, _ = run_report(load_example("gl_mixed_admissible"))
    assert rep["result"]["verdict"] == "inadmissible(0)"


def test_custom_close_flag():
    spec = {"version": "1", "space": {"even": 2, "odd": 0},
            "algebra": {"custom": [[["0", "1"], ["0", "0"]], [["0", "0"], ["1", "0"]]]},
            "task": {"kind": "prolong", "options": {"kmax": 1}}}
    rep, code = run_report(spec)
    assert code == EXIT_COMPUTE and "subalgebra" in rep["error"]
    spec["algebra"]["close"] = True
    rep, code = run_report(spec)
    assert code == EXIT_OK
    assert rep["result"]["levels"][0] == {"k": 0, "even": 3, "odd": 0}


# --- errors and exit codes -----------------------------------------------

def test_version_mismatch():
    rep, code = run_report({"version": "7", "task": {"kind": "prolong"}})
    assert code == EXIT_INVALID and "version" in rep["error"]


def test_unknown_field_rejected():
    with pytest.raises(SpecError, match="colour"):
        validate_spec({"version": "1", "task": {"kind": "prolong"}, "colour": "red"})
    with pytest.raises(SpecError, match="task/options"):
        validate_spec({"version": "1", "task": {"kind": "prolong", "options": {"kmaxx": 2}}})


def test_osp_with_odd_odd_dimension():
    rep, code = run_report({"version": "1", "space": {"even": 2, "odd": 1},
                            "algebra": {"builtin": "osp"}, "task": {"kind": "finite-type"}})
    assert code == EXIT_COMPUTE and "odd dimension" in rep["error"]


def test_expression_error_names_field_and_position():
    spec = load_example("flow_linear")
    spec["task"]["options"]["field"] = "x1*D[x1] + + "
    rep, code = run_report(spec)
    assert code == EXIT_INVALID
    assert "task/options/field" in rep["error"] and "position" in rep["error"]


def test_degenerate_frame_is_computation_error():
    spec = {"version": "1", "space": {"even": 1, "odd": 0},
            "task": {"kind": "killing", "options": {"frame": ["x1*D[x1]"]}}}
    rep, code = run_report(spec)
    assert code == EXIT_COMPUTE and "frame" in rep["error"]


def test_non_real_flow_field():
    spec = {"version": "1", "space": {"even": 1, "odd": 0},
            "task": {"kind": "flow", "options": {"field": "i*x1*D[x1]"}}}
    assert run_report(spec)[1] == EXIT_COMPUTE


def test_subcommand_must_match_task(capsys):
    assert main(["flow", "--example", "osp_2_2_finite_type"]) == EXIT_INVALID
    assert "task/kind" in capsys.readouterr().err


def test_bad_json_file(tmp_path, capsys):
    p = tmp_path / "spec.json"
    p.write_text("{not json")
    assert main(["prolong", "--spec", str(p)]) == EXIT_INVALID


def test_unknown_example(capsys):
    assert main(["prolong", "--example", "nope"]) == EXIT_INVALID


def test_kmax_flag(capsys):
    assert main(["prolong", "--example", "gl_1_prolong", "--kmax", "3", "--json"]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert len(rep["result"]["levels"]) == 4


def test_timing_flag(capsys):
    main(["finite-type", "--example", "p_2_finite_type", "--json", "--timing"])
    rep = json.loads(capsys.readouterr().out)
    assert rep["timing"]["seconds"] >= 0


def test_table_output(capsys):
    assert main(["finite-type", "--example", "spin_w_3_0_finite_type"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "verdict: finite(1)" in out


def test_spec_from_stdin():
    data = json.dumps(load_example("osp_2_2_finite_type"))
    proc = subprocess.run([sys.executable, "-m", "superprolong", "finite-type", "--json"],
                          input=data, capture_output=True, text=True)
    assert proc.returncode == EXIT_OK
    assert json.loads(proc.stdout)["result"]["verdict"] == "finite(1)"


def test_self_check(capsys):
    assert main(["check"]) == EXIT_OK
    assert "FAIL" not in capsys.readouterr().out
