import csv
import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given

from hhdlyap import cli
from hhdlyap.cli import FieldSpec, main

from _support import CUBIC, HOPF, XY, fields, linear_pair

V1_TEXT = "1/2*x^2 + 1/2*y^2 - 29/24*x^4 - 11/96*y^4"
HOPF_V_TEXT = "-1/2*x^2 - 1/2*y^2 + 1/4*x^4 + 1/2*x^2*y^2 + 1/4*y^4"


def spec_file(tmp_path, field, name="field.json"):
    path = tmp_path / name
    path.write_text(json.dumps(FieldSpec.from_field(field, XY).to_dict()))
    return str(path)


def run(tmp_path, *args, field=CUBIC, out="out"):
    code = main([args[0], "--field", spec_file(tmp_path, field), "--out", str(tmp_path / out),
                 *args[1:]])
    return code, tmp_path / out


def load(path):
    return json.loads(path.read_text())


def test_certify_linear_pair(tmp_path):
    code, out = run(tmp_path, "certify", "--potential", "3/2*x^2 + y^2", field=linear_pair()[0])
    assert code == 0
    cert = load(out / "certificate.json")
    assert list(cert) == ["lambda_u", "mu_F", "mu_V", "criterion_value", "passed"]
    assert cert["passed"] is True
    assert cert["lambda_u"] == pytest.approx(2)
    assert cert["mu_V"] == pytest.approx(2)


def test_certify_defaults_to_minimum_construction(tmp_path):
    code, out = run(tmp_path, "certify")
    assert code == 0
    assert load(out / "certificate.json")["mu_V"] == pytest.approx(1)


def test_decompose_rotation_is_rejected(tmp_path, capsys):
    from hhdlyap.poly import PolyVectorField
    rot = PolyVectorField.from_strings(["-y", "x"], XY)
    code, _ = run(tmp_path, "decompose", "--theorem1", field=rot)
    assert code == 2
    assert "DivergenceNotNegative" in capsys.readouterr().err


def test_decompose_report(tmp_path):
    code, out = run(tmp_path, "decompose")
    assert code == 0
    rep = load(out / "decomposition.json")
    assert rep["divergence_residual"] == "0"
    assert rep["strictly_orthogonal"] is False
    code, out = run(tmp_path, "decompose", "--theorem1", out="t1")
    rep = load(out / "decomposition.json")
    assert rep["rho"] == "2/1"
    assert rep["potential"].startswith("1/2*x^2 + 1/2*y^2 ")


def test_grid_cubic_v1_has_both_signs(tmp_path):
    code, out = run(tmp_path, "grid", "--potential", V1_TEXT, "--resolution", "400")
    assert code == 0
    with open(out / "grid.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x", "y", "sign"]
    assert len(rows) == 400 * 400 + 1
    signs = {r[2] for r in rows[1:]}
    assert {"1", "-1"} <= signs
    svg = (out / "grid.svg").read_text()
    assert svg.startswith("<svg") and "data-level" in svg


def test_basin_and_search(tmp_path):
    code, out = run(tmp_path, "basin", "--potential", "1/2*x^2 + 1/2*y^2",
                    "--resolution", "400", "--epsilon", "0.01")
    assert code == 0
    basin = load(out / "basin.json")
    assert basin["level"] >= 0.09 and basin["violations"] == 0
    assert (out / "basin.svg").exists()
    code, out = run(tmp_path, "search", "--potential", V1_TEXT, "--budget", "50",
                    "--quartic", "0,0.5", "--resolution", "200", out="s")
    assert code == 0
    rep = load(out / "search.json")
    cands = rep["quartic"]["candidates"]
    assert [c["coefficients"] for c in cands] == [[0.5], [0.0]]
    assert rep["quadratic"]["certificate"]["passed"] is True


def test_flow_and_theorem3(tmp_path):
    code, out = run(tmp_path, "flow", "--x0", "0.1,0", "--x0", "1.5,0.5", "--horizon", "20",
                    "--theorem3", "--potential", HOPF_V_TEXT, field=HOPF)
    assert code == 0
    rep = load(out / "theorem3.json")
    assert rep["max_distance"] < 2e-3
    with open(out / "trajectory_000.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "x", "y"]
    assert len(rows) == 20001 + 1
    assert len(load(out / "omega.json")["seeds"]) == 2


def test_flow_theorem3_needs_orthogonal_pair(tmp_path):
    code, _ = run(tmp_path, "flow", "--x0", "0.1,0", "--horizon", "1", "--theorem3")
    assert code == 2


def test_flow_single_seed_name(tmp_path):
    code, out = run(tmp_path, "flow", "--x0", "0.1,0", "--horizon", "0.01")
    assert code == 0
    assert (out / "trajectory.csv").read_text().splitlines()[1] == "0.0,0.10000000000000001,0.0"


def test_planar_jet_from_json_and_csv(tmp_path):
    (tmp_path / "alpha.json").write_text(json.dumps({"a0": 0, "a": [0, 0.5], "b": [0, 0]}))
    code, out = run(tmp_path, "planar-jet", "--boundary", str(tmp_path / "alpha.json"))
    assert code == 0
    rep = load(out / "planar_jet.json")
    assert rep["hdot_hessian"] == [[-4.0, 0.0], [0.0, 4.0]]
    assert np.allclose(rep["hdot_hessian_quadrature"], rep["hdot_hessian"], atol=1e-5)
    assert rep["feasible"] is False

    theta = np.linspace(0, 2 * np.pi, 32, endpoint=False)
    lines = ["theta,alpha"] + [f"{float(t)!r},{float(np.cos(2 * t))!r}" for t in theta]
    (tmp_path / "alpha.csv").write_text("\n".join(lines) + "\n")
    code, out = run(tmp_path, "planar-jet", "--boundary", str(tmp_path / "alpha.csv"), out="c")
    assert code == 0
    assert np.allclose(load(out / "planar_jet.json")["hdot_hessian"], [[-4, 0], [0, 4]])


def test_parse_error_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"variables": ["x", "y"], "components": ["-x", "-y + *x"]}))
    assert main(["decompose", "--field", str(path), "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "component 2" in err and "line 1, column 6" in err


@pytest.mark.parametrize("payload", [
    "{not json",
    json.dumps({"variables": ["x"], "components": ["-x", "-y"]}),
    json.dumps({"components": []}),
])
def test_bad_field_files(tmp_path, payload):
    path = tmp_path / "bad.json"
    path.write_text(payload)
    assert main(["decompose", "--field", str(path), "--out", str(tmp_path)]) == 2


def test_bad_config_values(tmp_path):
    assert run(tmp_path, "basin", "--bounds", "-1,1,-1")[0] == 2
    assert run(tmp_path, "basin", "--resolution", "0")[0] == 2
    assert run(tmp_path, "flow", "--x0", "1,2", "--dt", "-1")[0] == 2
    assert run(tmp_path, "flow")[0] == 2
    assert run(tmp_path, "planar-jet")[0] == 2
    assert main(["decompose", "--field", str(tmp_path / "missing.json")]) == 2


def test_internal_errors_exit_one(tmp_path, monkeypatch):
    def boom(self):
        raise RuntimeError("boom")
    monkeypatch.setattr(cli.Runner, "decompose", boom)
    assert run(tmp_path, "decompose")[0] == 1


def test_artifacts_are_byte_identical(tmp_path):
    for out in ("a", "b"):
        assert run(tmp_path, "grid", "--potential", V1_TEXT, "--resolution", "50", out=out)[0] == 0
        assert run(tmp_path, "certify", out=out)[0] == 0
        assert run(tmp_path, "search", "--budget", "40", "--quartic", "0,0.25",
                   "--resolution", "60", out=out)[0] == 0
    for name in ("grid.csv", "grid.svg", "certificate.json", "decomposition.json", "search.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@given(fields())
def test_field_spec_round_trip(F):
    spec = FieldSpec.from_field(F, XY)
    again = FieldSpec.from_dict(json.loads(json.dumps(spec.to_dict())))
    assert again.parse() == F
    assert FieldSpec.from_field(again.parse(), XY) == spec


def test_console_script_entry_point(tmp_path):
    field = spec_file(tmp_path, CUBIC)
    proc = subprocess.run([sys.executable, "-m", "hhdlyap.cli", "certify", "--field", field,
                           "--out", str(tmp_path / "o")], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert load(tmp_path / "o" / "certificate.json")["passed"] is True
