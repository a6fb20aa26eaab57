import json
import subprocess
import sys

import numpy as np
import pytest

CLI = [sys.executable, "-m", "mrootgeom"]


def run_cli(*args, **kwargs):
    return subprocess.run(CLI + list(args), capture_output=True, text=True, **kwargs)


@pytest.fixture(scope="module")
def bg3_expanded(tmp_path_factory):
    out = run_cli("expand", "--metric", "bg3")
    assert out.returncode == 0
    path = tmp_path_factory.mktemp("metrics") / "bg3_expanded.json"
    path.write_text(out.stdout)
    return path, out.stdout


def _points_file(tmp_path, points):
    path = tmp_path / "points.json"
    path.write_text(json.dumps(points))
    return str(path)


def test_expand_bg3_canonical(bg3_expanded):
    _, stdout = bg3_expanded
    obj = json.loads(stdout)
    assert obj["kind"] == "polynomial" and obj["n"] == 3 and obj["m"] == 3
    assert len(obj["terms"]) == 10
    idxs = [tuple(t["idx"]) for t in obj["terms"]]
    assert idxs == sorted(idxs)  # lexicographic by 1-based multi-index
    coeffs = {tuple(t["idx"]): t["c"] for t in obj["terms"]}
    assert coeffs[(1, 1, 1)] == 1.0 and coeffs[(1, 2, 3)] == 2.0 and coeffs[(1, 2, 2)] == -1.0


def test_expand_is_byte_deterministic():
    a = run_cli("expand", "--metric", "bg4")
    b = run_cli("expand", "--metric", "bg4")
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_expand_identity_forms(tmp_path):
    spec = tmp_path / "identity.json"
    spec.write_text(json.dumps({"kind": "linear_forms", "n": 3, "forms": np.eye(3).tolist()}))
    out = run_cli("expand", "--metric", str(spec))
    assert out.returncode == 0
    obj = json.loads(out.stdout)
    assert obj["terms"] == [{"idx": [1, 2, 3], "c": 1.0}]


def test_expand_degenerate_forms_exits_3(tmp_path):
    spec = tmp_path / "bad.json"
    spec.write_text(
        json.dumps({"kind": "linear_forms", "n": 3, "forms": [[1, 0, 0], [2, 0, 0], [0, 0, 1]]})
    )
    assert run_cli("expand", "--metric", str(spec)).returncode == 3


def test_expand_malformed_json_exits_3(tmp_path):
    spec = tmp_path / "broken.json"
    spec.write_text("{not json")
    assert run_cli("expand", "--metric", str(spec)).returncode == 3
    assert run_cli("expand", "--metric", str(tmp_path / "missing.json")).returncode == 3


def test_eval_l_value(tmp_path):
    pts = _points_file(tmp_path, [[3, 1, 1]])
    out = run_cli("eval", "--metric", "bg3", "--points", pts, "--outputs", "L")
    assert out.returncode == 0
    entry = json.loads(out.stdout)["points"][0]
    assert entry["L"] == pytest.approx(9.0 ** (1 / 3), rel=1e-15)
    assert entry["status"]["classification"] == "Regular"


def test_eval_reports_bad_points_without_failing(tmp_path):
    pts = _points_file(tmp_path, [[4, 1, 1, 1], [1, 1, 1, 1]])
    out = run_cli("eval", "--metric", "bg4", "--points", pts, "--outputs", "L,g")
    assert out.returncode == 0  # one regular point is enough
    entries = json.loads(out.stdout)["points"]
    assert "g" in entries[0] and entries[0]["status"]["classification"] == "Regular"
    assert entries[1]["status"]["classification"] == "OutOfDomain"
    assert "L" not in entries[1] and "g" not in entries[1]


def test_eval_all_points_degenerate_exits_1(tmp_path):
    pts = _points_file(tmp_path, [[1, 2, 3], [2, 1, 3]])
    out = run_cli("eval", "--metric", "bg3", "--points", pts, "--outputs", "L")
    assert out.returncode == 1
    classes = [e["status"]["classification"] for e in json.loads(out.stdout)["points"]]
    assert classes == ["Degenerate", "Degenerate"]


def test_eval_output_validation(tmp_path):
    pts = _points_file(tmp_path, [[3, 1, 1]])
    assert run_cli("eval", "--metric", "bg3", "--points", pts, "--outputs", "bogus").returncode == 3
    # kappa must be given exactly when einstein is requested
    assert (
        run_cli("eval", "--metric", "bg3", "--points", pts, "--outputs", "einstein").returncode == 3
    )
    assert (
        run_cli(
            "eval", "--metric", "bg3", "--points", pts, "--outputs", "L", "--kappa", "1.0"
        ).returncode
        == 3
    )
    out = run_cli(
        "eval", "--metric", "bg3", "--points", pts, "--outputs", "einstein", "--kappa", "2.0"
    )
    assert out.returncode == 0
    einstein = json.loads(out.stdout)["points"][0]["einstein"]
    t = np.array(einstein["tensor"]["values"])
    se = np.array(einstein["stress_energy"]["values"])
    assert np.allclose(se * 2.0, t, rtol=1e-15, atol=0)


def test_eval_curvature_outputs(tmp_path):
    pts = _points_file(tmp_path, [[4, 1, 1, 1]])
    out = run_cli(
        "eval", "--metric", "bg4", "--points", pts, "--outputs", "C_mixed,S_mixed,S_cov,ricci,g_inv"
    )
    assert out.returncode == 0
    entry = json.loads(out.stdout)["points"][0]
    assert entry["S_cov"]["order"] == 4 and entry["S_cov"]["n"] == 4
    assert entry["ricci"]["order"] == 2
    s_cov = np.array(entry["S_cov"]["values"])
    assert np.array_equal(s_cov, -s_cov.transpose(0, 1, 3, 2))
    ricci = np.array(entry["ricci"]["values"])
    s_mixed = np.array(entry["S_mixed"]["values"])
    assert np.allclose(ricci, np.einsum("mijm->ij", s_mixed))


def test_eval_round_trip_matches_builtin(tmp_path, bg3_expanded):
    path, _ = bg3_expanded
    pts = _points_file(tmp_path, [[3, 1, 1], [2.0, -0.5, 0.25]])
    via_tag = run_cli("eval", "--metric", "bg3", "--points", pts, "--outputs", "L,g,C,scalar")
    via_file = run_cli("eval", "--metric", str(path), "--points", pts, "--outputs", "L,g,C,scalar")
    assert via_tag.returncode == via_file.returncode == 0
    assert json.loads(via_tag.stdout)["points"] == json.loads(via_file.stdout)["points"]


def test_check_small_run_passes():
    out = run_cli("check", "--count", "6", "--seed", "3")
    assert out.returncode == 0, out.stderr
    report = json.loads(out.stdout)
    assert report["overall_pass"] is True
    assert all(e["resolved"] for e in report["errata"])
    names = {p["name"] for p in report["properties"]}
    assert "bg3/fd_torsion" in names and "bg4/curvature_cross_path" in names


def test_check_is_deterministic_per_seed():
    a = run_cli("check", "--count", "5", "--seed", "7", "--metric", "bg3")
    b = run_cli("check", "--count", "5", "--seed", "7", "--metric", "bg3")
    assert a.stdout == b.stdout and a.returncode == 0


def test_check_injected_errata_fails_with_evidence():
    out = run_cli("check", "--count", "5", "--seed", "3", "--inject-errata")
    assert out.returncode == 2
    report = json.loads(out.stdout)
    assert report["overall_pass"] is False
    injected = [p for p in report["properties"] if "injected" in p["name"]]
    assert len(injected) == 3
    for prop in injected:
        assert prop["pass"] is False
        assert prop["max_rel_error"] > prop["rel_tol"]
        assert len(prop["worst_index"]) > 0


def test_check_zero_points_exits_3():
    assert run_cli("check", "--count", "0").returncode == 3
    assert run_cli("check", "--metric", "bg9", "--count", "4").returncode == 3


def test_report_dossier_contents():
    out = run_cli("report", "--metric", "bg3", "--point", "3,1,1")
    assert out.returncode == 0
    dossier = json.loads(out.stdout)
    assert dossier["hessian_determinant"] == pytest.approx(288.0)
    assert dossier["L"] == pytest.approx(9.0 ** (1 / 3), rel=1e-15)
    assert sorted(dossier["g_signature"]) == [-1, -1, 1]
    assert dossier["scalar_curvature"] == pytest.approx(-0.4622408495670899, rel=1e-12)
    assert dossier["status"]["classification"] == "Regular"
    assert dossier["connection"]["values"] == [[0.0] * 3] * 3


def test_report_with_kappa_adds_stress_energy():
    out = run_cli("report", "--metric", "bg4", "--point", "4,1,1,1", "--kappa", "6.28")
    assert out.returncode == 0
    dossier = json.loads(out.stdout)
    assert "stress_energy" in dossier and dossier["kappa"] == 6.28
    assert abs(dossier["einstein_trace_residual"]) <= 1e-9


def test_report_degenerate_point_exits_1():
    out = run_cli("report", "--metric", "bg3", "--point", "1,2,3")
    assert out.returncode == 1
    assert json.loads(out.stdout)["status"]["classification"] == "Degenerate"
    assert run_cli("report", "--metric", "bg4", "--point", "1,1,1,1").returncode == 1


def test_report_invalid_point_exits_3():
    assert run_cli("report", "--metric", "bg3", "--point", "nan,1,1").returncode == 3
    assert run_cli("report", "--metric", "bg3", "--point", "1,1").returncode == 3
    assert run_cli("report", "--metric", "bg3", "--point", "a,b,c").returncode == 3


def test_usage_errors_exit_3():
    assert run_cli("report", "--metric", "bg3").returncode == 3  # missing --point
    assert run_cli("frobnicate").returncode == 3  # unknown subcommand
