"""Command-line behavior: exit codes, report bytes, trajectory CSVs."""

import csv
import io
import json

import pytest

from susygordon.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# list


def test_list_text_contains_both_catalogs(capsys):
    code, out, _ = run_cli(["list"], capsys)
    assert code == 0
    assert "S8: P_x + eps*P_t + mu*Q_x" in out
    assert "L5: P_x - P_t" in out
    assert "d18" in out
    # 16 superspace + 5 component + 14 solutions
    assert out.count("S1") >= 2  # S1 heading plus S12 etc
    lines = [l for l in out.splitlines() if l.startswith("  ")]
    assert len(lines) == 16 + 5 + 14


def test_list_json_parses(capsys):
    code, out, _ = run_cli(["list", "--format", "json"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert len(obj["subalgebras"]) == 21
    assert len(obj["solutions"]) == 14
    names = {s["name"] for s in obj["solutions"]}
    assert "d18" in names and "ginv9" in names


def test_list_md_and_csv_render(capsys):
    code, out, _ = run_cli(["list", "--format", "md"], capsys)
    assert code == 0 and out.startswith("#")
    code, out, _ = run_cli(["list", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 21 + 14


# ---------------------------------------------------------------------------
# verify


def test_verify_elliptic_passes_and_schema(capsys):
    code, out, err = run_cli(["verify", "--suite", "elliptic"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["suite"] == "elliptic"
    for check in obj["checks"]:
        assert list(check) == [
            "name", "anchor", "status", "max_residual", "tolerance", "samples",
        ]
        assert check["status"] == "pass"
        assert check["max_residual"] <= check["tolerance"]
    assert "suite elliptic: pass" in err


def test_verify_reports_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--suite", "reductions", "--seed", "1"]
    assert run_cli(args + ["--out", str(a)], capsys)[0] == 0
    assert run_cli(args + ["--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_jobs_does_not_change_bytes(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--suite", "elliptic", "--seed", "3"]
    assert run_cli(args + ["--out", str(a)], capsys)[0] == 0
    assert run_cli(args + ["--jobs", "4", "--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_case_filter(capsys):
    code, out, _ = run_cli(
        ["verify", "--suite", "reductions", "--case", "S8"], capsys
    )
    assert code == 0
    names = [c["name"] for c in json.loads(out)["checks"]]
    assert "consistency_S8" in names
    assert "consistency_S12" not in names


def test_verify_case_filter_reaches_solution_entries(capsys):
    code, out, _ = run_cli(
        ["verify", "--suite", "solutions", "--case", "d5"], capsys
    )
    assert code == 0
    names = [c["name"] for c in json.loads(out)["checks"]]
    assert names == ["d5"]


def test_verify_unmatched_case_is_usage_error(capsys):
    code, _, err = run_cli(["verify", "--case", "NOPE"], capsys)
    assert code == 2
    assert "no checks match" in err


def test_verify_tolerance_override_binds(capsys):
    code, out, _ = run_cli(
        ["verify", "--suite", "elliptic", "--tolerance", "elliptic=1e-14"],
        capsys,
    )
    assert code == 1
    checks = {c["name"]: c for c in json.loads(out)["checks"]}
    drift = checks["traveling_first_integral"]
    assert drift["tolerance"] == 1e-14
    assert drift["status"] == "fail"


def test_verify_bad_tolerance_is_usage_error(capsys):
    for bad in ("elliptic=zero", "bogus=1e-3", "elliptic=-1e-8", "elliptic"):
        code, _, _ = run_cli(
            ["verify", "--suite", "elliptic", "--tolerance", bad], capsys
        )
        assert code == 2, bad


def test_verify_generator_floor(capsys):
    code, _, err = run_cli(
        ["verify", "--suite", "algebra", "--generators", "4"], capsys
    )
    assert code == 2
    assert "at least 6 generators" in err
    code, _, _ = run_cli(["verify", "--generators", "3"], capsys)
    assert code == 2


def test_verify_bad_suite_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "bogus"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_verify_usage_error_writes_nothing(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, _, _ = run_cli(
        ["verify", "--case", "NOPE", "--out", str(target)], capsys
    )
    assert code == 2
    assert not target.exists()


def test_verify_csv_and_md_formats(capsys):
    code, out, _ = run_cli(
        ["verify", "--suite", "elliptic", "--format", "csv"], capsys
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and rows[0]["status"] == "pass"
    code, out, _ = run_cli(
        ["verify", "--suite", "elliptic", "--format", "md"], capsys
    )
    assert code == 0
    assert out.splitlines()[0] == "# suite: elliptic"


# ---------------------------------------------------------------------------
# solve


def test_solve_ginv12_csv_residuals(tmp_path, capsys):
    target = tmp_path / "traj.csv"
    code, out, _ = run_cli(
        ["solve", "--case", "S12", "--ode", "ginv12",
         "--range", "0:2:0.01", "--out", str(target)],
        capsys,
    )
    assert code == 0
    rows = list(csv.DictReader(target.open()))
    assert len(rows) == 201
    assert rows[0].keys() == {
        "sigma", "alpha", "g", "f", "residual_body", "residual_soul_norm"
    }
    assert all(float(r["residual_body"]) <= 1e-6 for r in rows)
    assert all(float(r["residual_soul_norm"]) <= 1e-6 for r in rows)
    summary = json.loads(out)
    assert summary["status"] == "pass"
    assert summary["case"] == "S12"


def test_solve_rebp_drift_in_summary(capsys):
    code, _, err = run_cli(["solve", "--case", "S4", "--ode", "rebp", "--K0", "0"], capsys)
    assert code == 0
    summary = json.loads(err)
    assert summary["drift"] is not None and summary["drift"] <= 1e-8
    assert summary["max_residual_body"] <= 1e-6


def test_solve_rebp_with_coupling(capsys):
    code, _, err = run_cli(
        ["solve", "--ode", "rebp", "--K0", "0.25", "--range", "0:2:0.0078125"],
        capsys,
    )
    assert code == 0
    summary = json.loads(err)
    assert summary["max_residual_body"] <= 1e-6
    assert summary["drift"] <= 1e-8


def test_solve_infers_ode_from_case(capsys):
    code, _, err = run_cli(
        ["solve", "--case", "S8", "--range", "0:1:0.0625"], capsys
    )
    assert code == 0
    assert json.loads(err)["ode"] == "ginv17"


def test_solve_empty_range_is_usage_error(tmp_path, capsys):
    target = tmp_path / "traj.csv"
    for bad in ("1:1:0.1", "2:1:0.1", "0:1:0", "0:1:-0.5", "0:1", "a:b:c"):
        code, _, _ = run_cli(
            ["solve", "--ode", "rebp", "--range", bad, "--out", str(target)],
            capsys,
        )
        assert code == 2, bad
        assert not target.exists()


def test_solve_requires_target(capsys):
    code, _, err = run_cli(["solve"], capsys)
    assert code == 2
    assert "--ode or --case" in err


def test_solve_mismatched_pair_is_usage_error(capsys):
    code, _, _ = run_cli(["solve", "--ode", "ginv12", "--case", "S4"], capsys)
    assert code == 2


def test_solve_case_without_ode_attachment(capsys):
    code, _, _ = run_cli(["solve", "--case", "S7"], capsys)
    assert code == 2


def test_solve_singular_crossing_flags_range(capsys):
    # the scaling equation blows up at sigma = 0; the run survives and
    # reports the unreachable tail instead of crashing
    code, _, err = run_cli(
        ["solve", "--ode", "d16nu", "--range=-1:1:0.125"], capsys
    )
    assert code == 0
    summary = json.loads(err)
    assert summary["flagged"] == [[-0.125, 1.0]]
    assert summary["samples"] == 8


def test_solve_custom_ics(capsys):
    code, _, err = run_cli(
        ["solve", "--ode", "rebp", "--ics", "0.2,0.8", "--range", "0:1:0.00390625"],
        capsys,
    )
    assert code == 0
    assert json.loads(err)["status"] == "pass"


def test_solve_rejects_non_csv_format(capsys):
    code, _, _ = run_cli(["solve", "--ode", "rebp", "--format", "json"], capsys)
    assert code == 2
