import csv
import json
import subprocess
import sys

import numpy as np
import pytest
from click.testing import CliRunner

from dualcurve import DiscreteSphericalMeasure, dual_curvature
from dualcurve.body_core import body_from_dict
from dualcurve.cli import main

from conftest import cube

CUBE_ATOM_Q2 = 1.0578121617686904


@pytest.fixture
def runner():
    return CliRunner()


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def _cube_body(tmp_path):
    return _write(tmp_path, "cube.json", cube().to_dict())


def _cube_measure(tmp_path, q=2.0):
    mu = dual_curvature(cube(), q)
    return _write(tmp_path, "mu.json", mu.to_dict())


def test_compute_dual(runner, tmp_path):
    res = runner.invoke(main, ["compute", _cube_body(tmp_path), "--q", "2"])
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert data["dim"] == 3 and data["even"] is True
    ws = [a["weight"] for a in data["atoms"]]
    np.testing.assert_allclose(ws, CUBE_ATOM_Q2, rtol=1e-8)


def test_compute_other_kinds(runner, tmp_path):
    body = _cube_body(tmp_path)
    for kind, want in (("cone", 4.0 / 3.0), ("surface", 4.0), ("q0", 2 * np.pi / 9)):
        res = runner.invoke(main, ["compute", body, "--measure-kind", kind])
        assert res.exit_code == 0, (kind, res.output)
        ws = [a["weight"] for a in json.loads(res.output)["atoms"]]
        np.testing.assert_allclose(ws, want, rtol=1e-9)
    res = runner.invoke(main, ["compute", body, "--measure-kind", "lp", "--p", "0"])
    ws = [a["weight"] for a in json.loads(res.output)["atoms"]]
    np.testing.assert_allclose(ws, 4.0, rtol=1e-12)


def test_compute_out_file(runner, tmp_path):
    out = str(tmp_path / "measure.json")
    res = runner.invoke(main, ["compute", _cube_body(tmp_path), "--q", "1", "--out", out])
    assert res.exit_code == 0
    data = json.loads(open(out).read())
    assert len(data["atoms"]) == 6


def test_compute_requires_q_for_dual(runner, tmp_path):
    res = runner.invoke(main, ["compute", _cube_body(tmp_path)])
    assert res.exit_code == 2


def test_compute_rejects_bad_file(runner, tmp_path):
    missing = str(tmp_path / "nope.json")
    assert runner.invoke(main, ["compute", missing, "--q", "1"]).exit_code == 2
    garbled = tmp_path / "bad.json"
    garbled.write_text("{not json")
    assert runner.invoke(main, ["compute", str(garbled), "--q", "1"]).exit_code == 2


def test_compute_rejects_invalid_body(runner, tmp_path):
    bad = _write(tmp_path, "open.json", {
        "type": "hpolytope", "dim": 2,
        "normals": [[1.0, 0.0], [0.0, 1.0]], "offsets": [1.0, 1.0],
    })
    assert runner.invoke(main, ["compute", bad, "--q", "1"]).exit_code == 2


def test_solve_round_trip(runner, tmp_path):
    out = str(tmp_path / "body.json")
    trace = str(tmp_path / "trace.csv")
    res = runner.invoke(main, ["solve", _cube_measure(tmp_path), "--q", "2",
                               "--out", out, "--trace", trace])
    assert res.exit_code == 0, res.output
    summary = json.loads(res.output)
    assert summary["converged"] is True
    assert summary["residual"] <= 1e-6
    body = body_from_dict(json.loads(open(out).read()))
    assert body.symmetric and body.dim == 3
    with open(trace) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["iter", "phi", "residual", "step"]
    assert len(rows) == summary["iterations"] + 1
    phis = [float(r[1]) for r in rows[1:]]
    assert phis == sorted(phis)


def test_solve_infeasible_exit_3(runner, tmp_path):
    mu = DiscreteSphericalMeasure(
        np.array([[1.0, 0], [-1.0, 0], [0, 1.0], [0, -1.0]]), np.ones(4))
    path = _write(tmp_path, "eq.json", mu.to_dict())
    res = runner.invoke(main, ["solve", path, "--q", "2"])
    assert res.exit_code == 3


def test_solve_non_convergence_exit_4(runner, tmp_path):
    # lopsided weights put the optimum far from the h = 1 start
    mu = DiscreteSphericalMeasure(
        np.vstack([np.eye(3), -np.eye(3)]),
        np.array([5.0, 1.0, 0.7, 5.0, 1.0, 0.7]))
    path = _write(tmp_path, "aniso.json", mu.to_dict())
    res = runner.invoke(main, ["solve", path, "--q", "1", "--max-iter", "2"])
    assert res.exit_code == 4
    assert json.loads(res.output)["converged"] is False


def test_solve_validates_q(runner, tmp_path):
    res = runner.invoke(main, ["solve", _cube_measure(tmp_path), "--q", "5"])
    assert res.exit_code == 2


def test_check_smi(runner, tmp_path):
    res = runner.invoke(main, ["check-smi", _cube_measure(tmp_path), "--q", "2"])
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["feasible"] is True
    assert data["worst_ratio"] < data["bound"]
    mu = DiscreteSphericalMeasure(
        np.array([[1.0, 0], [-1.0, 0], [0, 1.0], [0, -1.0]]), np.ones(4))
    path = _write(tmp_path, "eq.json", mu.to_dict())
    res = runner.invoke(main, ["check-smi", path, "--q", "2"])
    assert res.exit_code == 3
    data = json.loads(res.output)
    assert data["feasible"] is False
    assert data["worst_subspace_dim"] == 1


def test_verify_identities(runner, tmp_path):
    res = runner.invoke(main, ["verify", _cube_body(tmp_path), "--suite", "identities"])
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert data["suite"] == "identities"
    assert all(c["pass"] for c in data["checks"]), data["checks"]


def test_verify_variational(runner, tmp_path):
    res = runner.invoke(main, ["verify", _cube_body(tmp_path), "--suite", "variational",
                               "--q", "0", "--q", "1.5"])
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    names = [c["name"] for c in data["checks"]]
    assert "variation q=0" in names and "variation q=1.5" in names
    assert all(c["pass"] for c in data["checks"])


def test_verify_valuation(runner, tmp_path):
    res = runner.invoke(main, ["verify", _cube_body(tmp_path), "--suite", "valuation"])
    assert res.exit_code == 0, res.output
    assert all(c["pass"] for c in json.loads(res.output)["checks"])
    # non-box bodies are rejected for this suite
    oct_body = _write(tmp_path, "oct.json", {
        "type": "vpolytope", "dim": 3,
        "vertices": (np.vstack([np.eye(3), -np.eye(3)])).tolist(),
    })
    res = runner.invoke(main, ["verify", oct_body, "--suite", "valuation"])
    assert res.exit_code == 2


def test_verify_steiner_suite(runner, tmp_path):
    res = runner.invoke(main, ["verify", _cube_body(tmp_path), "--suite", "steiner"])
    assert res.exit_code == 0, res.output
    assert all(c["pass"] for c in json.loads(res.output)["checks"])


def test_steiner_command(runner, tmp_path):
    res = runner.invoke(main, ["steiner", _cube_body(tmp_path)])
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert len(data["fitted"]) == 4
    assert data["max_rel_err"] <= 1e-4
    res = runner.invoke(main, ["steiner", _cube_body(tmp_path),
                               "--t-samples", "0.2,0.4,0.6,0.8,1.0"])
    assert res.exit_code == 0
    res = runner.invoke(main, ["steiner", _cube_body(tmp_path), "--t-samples", "a,b"])
    assert res.exit_code == 2


def test_output_uses_12_significant_digits(runner, tmp_path):
    res = runner.invoke(main, ["compute", _cube_body(tmp_path), "--q", "0.5"])
    data = json.loads(res.output)
    for atom in data["atoms"]:
        w = atom["weight"]
        assert w == float(f"{w:.12g}")


def test_console_script_installed():
    proc = subprocess.run([sys.executable, "-m", "dualcurve.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    for cmd in ("compute", "solve", "check-smi", "verify", "steiner"):
        assert cmd in proc.stdout
