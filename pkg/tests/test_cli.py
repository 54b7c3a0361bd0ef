import csv
import io
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from prepot.cli import EXIT_INPUT, EXIT_OK, EXIT_SOLVER, main

SQ2 = math.sqrt(2.0)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def energies(payload):
    return sorted((complex(*s["energy"]) for s in payload["solutions"]), key=lambda e: (e.real, e.imag))


def test_solve_sextic_example(capsys):
    code, out = run_json(capsys, "solve", "--preset", "sextic", "--a", "1", "--b", "1", "--N", "2")
    assert code == EXIT_OK
    assert out["found"] == out["expected"] == 3
    assert np.allclose(energies(out), [-3, 9 - 4 * SQ2, 9 + 4 * SQ2], atol=1e-9)
    assert out["spec"]["N"] == 2 and out["version"]


def test_solve_pt_broken_example(capsys):
    code, out = run_json(
        capsys, "solve", "--preset", "pt-quartic", "--alpha", "1", "--beta", "1", "--gamma", "-1", "--N", "1"
    )
    assert code == EXIT_OK
    assert out["pt_status"] == "PT broken"
    e1, e2 = energies(out)
    assert abs(e1 - e2.conjugate()) <= 1e-10 and abs(e1.imag) > 1e-3


def test_solve_pt_unbroken(capsys):
    _, out = run_json(capsys, "solve", "--preset", "pt-quartic", "--N", "1")
    assert out["pt_status"] == "PT unbroken"


def test_classify_inline_json(capsys):
    spec = '{"P":[[0,0],[1,0],[0,0]],"Q":[[1,0],[0,0],[0,0]],"N":5}'
    code, out = run_json(capsys, "classify", "--spec", spec)
    assert code == EXIT_OK
    assert out["solvability"] == "ExactlySolvable" and (out["m"], out["n"]) == (1, 0)


def test_classify_spec_file(capsys, tmp_path):
    path = tmp_path / "spec.json"
    path.write_text('{"P":[[0,0],[2,0],[2,0]],"Q":[[0,0],[4,0]],"N":1}')
    _, out = run_json(capsys, "classify", "--spec", str(path))
    assert out["solvability"] == "QuasiExactlySolvable"


def test_build_sextic(capsys):
    _, out = run_json(capsys, "build", "--preset", "sextic", "--N", "1")
    S = [complex(*c) for c in out["S"]]
    assert np.allclose(S, [-1, -2, 2, 1])
    assert out["poles"] == [] and out["coordinate_map"]["form"] == "quadratic"


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--preset", "nope"],
        ["solve", "--spec", "{not json"],
        ["solve"],
        ["solve", "--preset", "sextic", "--spec", "{}"],
        ["solve", "--preset", "harmonic", "--a", "2"],
        ["states", "--preset", "radial", "--grid", "-1:5:101"],
        ["states", "--preset", "harmonic", "--grid", "1:0:10"],
        ["extended", "--preset", "sextic"],
        ["solve", "--preset", "sextic", "--N", "-1"],
    ],
)
def test_input_errors_exit_1(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    assert code == EXIT_INPUT
    assert capsys.readouterr().err


def test_solver_failure_exit_3(capsys):
    # with no random starts the classical seeds alone miss some of the four sextic solutions
    code, out = run_json(capsys, "solve", "--preset", "sextic", "--N", "3", "--starts", "0")
    assert code == EXIT_SOLVER
    assert not out["complete"] and out["found"] < out["expected"] == 4


def test_verify_exit_codes(capsys):
    code, out = run_json(capsys, "verify", "--preset", "sextic", "--N", "2")
    assert code == EXIT_OK and out["passed"]
    code, out = run_json(capsys, "verify", "--preset", "x-laguerre")
    assert code == EXIT_OK and out["passed"]


def test_determinism_byte_identical(capsys):
    argv = ["solve", "--preset", "sextic", "--a", "2", "--b", "3", "--N", "3", "--rng-seed", "11"]
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert first == second


def test_entry_point_subprocess():
    cmd = [sys.executable, "-m", "prepot.cli", "classify", "--preset", "harmonic"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["solvability"] == "ExactlySolvable"


def test_states_csv_stdout(capsys):
    code, out = run(capsys, "states", "--preset", "harmonic", "--N", "0", "--grid=-8:8:1601")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].startswith("# state 0 E=1.0")
    rows = list(csv.reader(io.StringIO("\n".join(lines[1:]))))
    assert rows[0] == ["x", "V_re", "V_im", "phi_re", "phi_im"]
    table = np.array(rows[1:], dtype=float)
    assert table.shape == (1601, 5)
    x = table[:, 0]
    assert np.allclose(table[:, 1], x * x)
    assert np.allclose(table[:, 3], np.exp(-x * x / 2) / math.pi**0.25, atol=1e-12)
    # 17 significant digits round-trip doubles exactly
    assert float(rows[2][0]) == -8 + 0.01


def test_states_out_dir(capsys, tmp_path):
    code = main(["states", "--preset", "sextic", "--N", "1", "--out", str(tmp_path), "--magnify", "10"])
    capsys.readouterr()
    assert code == EXIT_OK
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert [s["nodes"] for s in summary["states"]] == [0, 1]
    assert all(abs(s["norm"] - 1) <= 1e-6 for s in summary["states"])
    assert sorted(os.listdir(tmp_path)) == ["state_0.csv", "state_1.csv", "summary.json"]


def test_states_json(capsys):
    _, out = run_json(capsys, "states", "--preset", "radial", "--N", "2", "--format", "json")
    assert [s["nodes"] for s in out["states"]] == [0, 1, 2]
    assert all(s["residual"] <= 1e-6 for s in out["states"])


def test_extended_command(capsys):
    code, out = run_json(capsys, "extended", "--preset", "x-laguerre", "--ell", "1", "--alpha=-2.5")
    assert code == EXIT_OK
    assert out["energies"] == [6.0, 10.0, 14.0, 18.0, 22.0]
    assert out["nodes"] == [0, 1, 2, 3, 4]
    assert out["orthogonality_offdiag"] <= 1e-6


def test_plot_data_out_dir(capsys, tmp_path):
    code = main(["plot-data", "--preset", "sextic", "--out", str(tmp_path)])
    out = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK and out["magnify"] == 10.0
    table = np.loadtxt(tmp_path / "plot_data.csv", delimiter=",", skiprows=1)
    assert set(table[:, 0]) == {1.0, 2.0}
    assert len({(n, s) for n, s in table[:, :2]}) == 5
