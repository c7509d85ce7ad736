import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from hardy.cli import Outcome, main

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_constant(capsys, tmp_path):
    csv_path = tmp_path / "phi.csv"
    code, rep, _ = run(["constant", "--config", str(CONFIGS / "critical_euclidean.yaml"), "--csv", str(csv_path)], capsys)
    assert code == 0
    assert set(rep) == {"version", "config", "results", "warnings", "timing_ms"}
    assert math.isclose(rep["results"]["constant"]["A"]["value"], 4 * math.pi, rel_tol=1e-6)
    assert csv_path.read_text().startswith("R,log_phi\n")


def test_verify_and_sharpness(capsys):
    code, rep, _ = run(["verify", "--config", str(CONFIGS / "critical_euclidean.yaml")], capsys)
    assert code == 0 and len(rep["results"]["rows"]) == 9
    assert all(r["passed"] for r in rep["results"]["rows"])
    code, rep, _ = run(["sharpness", "--config", str(CONFIGS / "critical_euclidean.yaml"),
                        "--set", "sharpness.ns=[10, 1000]"], capsys)
    assert code == 0 and rep["results"]["study"]["passed"]


def test_sharpness_refusal_is_a_warning(capsys):
    code, rep, err = run(["sharpness", "--config", str(CONFIGS / "critical_euclidean.yaml"),
                          "--set", "weights.v.exponent=-0.9"], capsys)
    assert code == 0 and rep["results"]["study"]["refused"] and "refused" in err


def test_p_problem_and_corollary(capsys):
    code, rep, _ = run(["constant", "--config", str(CONFIGS / "classical_halfline_p2.yaml")], capsys)
    assert code == 0 and math.isclose(rep["results"]["constant"]["A"]["value"], 1.0, rel_tol=1e-6)
    code, rep, _ = run(["corollary", "--config", str(CONFIGS / "corollary_heisenberg.yaml")], capsys)
    verdict = rep["results"]["corollary"]["classification"]
    assert code == 0 and verdict["finite"] and math.isclose(verdict["constant_over_sphere"], 2**-0.5)


def test_region_csv(capsys, tmp_path):
    out, csv_path = tmp_path / "r.json", tmp_path / "r.csv"
    argv = ["region", "--config", str(CONFIGS / "hyperbolic_region.yaml"), "--set", "region.alpha=[-1, 1, 3]",
            "--set", "region.beta=[0, 3, 4]", "--set", "region.workers=1", "--out", str(out), "--csv", str(csv_path)]
    assert main(argv) == 0
    rep = json.loads(out.read_text())
    assert rep["results"]["region"]["points"] == 3 * 4 * 2 * 2
    assert len(csv_path.read_text().splitlines()) == 1 + 48


def test_sphere_measure(capsys):
    code, rep, _ = run(["sphere-measure", "--set", "sphere_measure={norm: max, weights: [1, 1], samples: 100000}"], capsys)
    est = rep["results"]["sphere_measure"]
    assert code == 0 and abs(est["value"] - 8) <= 3 * est["std_error"]


def test_exit_codes(capsys, tmp_path):
    assert run(["constant", "--config", str(tmp_path / "nope.yaml")], capsys)[0] == 2
    assert run(["constant"], capsys)[0] == 2
    assert run(["corollary", "--set", "corollary={alpha: 1}"], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_inconsistency_exits_4(capsys):
    # v vanishes beyond its table, so f supported there has rhs = 0 but lhs > 0
    argv = ["verify", "--set", "geometry={kind: half_line}", "--set", "weights.u={family: power, exponent: 0}",
            "--set", "weights.v={family: tabulated, r: [1, 2], values: [1, 1], outside: zero}",
            "--set", "problem.q=1", "--set", "verify.functions=[{kind: indicator, a: 3, b: 4}]"]
    code, rep, err = run(argv, capsys)
    assert code == 4 and rep is None and "InconsistencyError" in err


def test_outcome_code_priority():
    out = Outcome()
    assert out.code == 0
    out.inconclusive = True
    assert out.code == 3
    out.violation = True
    assert out.code == 4


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "hardy.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip().endswith("0.1.0")
