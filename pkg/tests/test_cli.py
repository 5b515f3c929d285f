import json

import numpy as np
import pytest

from weakborn.cli import load_observable, run, to_jsonable


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_born_scan_json(capsys):
    code, out, _ = invoke(capsys, "invariance-scan", "--dim", "3", "--seed", "1", "--measure", "born",
                          "--n-contexts", "100", "--output", "json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"meta", "inputs", "results"}
    assert doc["results"]["ex_spread"] < 1e-10
    assert doc["meta"]["seed"] == 1 and doc["meta"]["version"]
    assert doc["inputs"]["n_contexts"] == 100
    assert doc["meta"]["tolerances"]["overlap_cutoff"] == 1e-12


def test_quartic_scan_not_a_failure(capsys):
    code, out, _ = invoke(capsys, "invariance-scan", "--dim", "3", "--seed", "1", "--measure", "quartic")
    assert code == 0
    assert json.loads(out)["results"]["ex_spread"] > 0


def test_param_scan(capsys):
    code, out, _ = invoke(capsys, "invariance-scan", "--dim", "3", "--measure", "param", "--mu", "1,0.1,0",
                          "--n-contexts", "10")
    assert code == 0
    assert json.loads(out)["results"]["measure"] == {"kind": "param", "mu": [1.0, 0.1, 0.0], "p0": 0.0}


def test_scan_csv(capsys):
    code, out, _ = invoke(capsys, "invariance-scan", "--n-contexts", "5", "--output", "csv")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "context_index,context_seed,ex_re,ex_im,var"
    assert len(lines) == 6


def test_zurek_json(capsys):
    code, out, _ = invoke(capsys, "zurek-demo", "--output", "json")
    res = json.loads(out)["results"]
    assert code == 0
    assert res["weak_values"] == [[1.0, 0.0], [-1.0, 0.0]]
    assert res["probabilities"] == [0.5, 0.5]


def test_zurek_csv_is_usage_error(capsys):
    code, _, err = invoke(capsys, "zurek-demo", "--output", "csv")
    assert code == 2 and "tabular" in err


def test_uniqueness_solve(capsys):
    code, out, _ = invoke(capsys, "uniqueness-solve", "--dim", "2", "--seed", "7")
    res = json.loads(out)["results"]
    assert code == 0 and res["converged"] and res["distance_to_born"] < 1e-4


def test_uniqueness_solve_budget_exhausted_exit_1(capsys):
    code, out, err = invoke(capsys, "uniqueness-solve", "--dim", "3", "--max-iter", "5")
    assert code == 1 and "contract" in err
    assert json.loads(out)["results"]["converged"] is False


def test_heisenberg_scan(capsys):
    code, out, _ = invoke(capsys, "heisenberg-scan", "--dim", "3", "--seed", "2", "--steps", "4")
    res = json.loads(out)["results"]
    assert code == 0 and res["endpoint_residual"] < 1e-10 and len(res["values"]) == 5


def test_weak_value_command(capsys):
    code, out, _ = invoke(capsys, "weak-value", "--dim", "3", "--seed", "4")
    res = json.loads(out)["results"]
    assert code == 0
    ex, ref = complex(*res["expectation"]), complex(*res["quantum_reference"])
    assert abs(ex - ref) < 1e-10


def test_observable_file(tmp_path, capsys):
    obs = {"dim": 2, "entries": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]}
    path = tmp_path / "sz.json"
    path.write_text(json.dumps(obs))
    np.testing.assert_array_equal(load_observable(str(path)).entries, np.diag([1, -1]))
    code, out, _ = invoke(capsys, "invariance-scan", "--dim", "2", "--observable-file", str(path), "--n-contexts", "5")
    assert code == 0
    assert json.loads(out)["results"]["observable"] == obs


def test_observable_dimension_mismatch(tmp_path, capsys):
    path = tmp_path / "o.json"
    path.write_text(json.dumps({"dim": 2, "entries": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}))
    code, _, _ = invoke(capsys, "invariance-scan", "--dim", "3", "--observable-file", str(path))
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["invariance-scan", "--bogus"],
    ["no-such-command"],
    ["invariance-scan", "--measure", "cubic"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        run(argv)
    assert exc.value.code == 2


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert run(["zurek-demo", "--out", str(path)]) == 0
    assert json.loads(path.read_text())["meta"]["command"] == "zurek-demo"


@pytest.mark.parametrize("argv", [
    ["invariance-scan", "--dim", "4", "--seed", "9", "--measure", "quartic", "--n-contexts", "20"],
    ["uniqueness-solve", "--dim", "3", "--seed", "2"],
    ["heisenberg-scan", "--seed", "3", "--output", "csv"],
])
def test_byte_identical_reruns(argv, capsys):
    _, first, _ = invoke(capsys, *argv)
    _, second, _ = invoke(capsys, *argv)
    assert first == second


def test_to_jsonable():
    assert to_jsonable({"z": 1 + 2j, "x": float("inf"), "a": np.arange(2)}) == {"z": [1.0, 2.0], "x": "inf", "a": [0, 1]}


def test_tolerance_override_recorded(capsys):
    _, out, _ = invoke(capsys, "zurek-demo", "--tolerance-overlap", "1e-9")
    assert json.loads(out)["meta"]["tolerances"]["overlap_cutoff"] == 1e-9
