import csv
import io
import json
import subprocess
import sys

import pytest

from qudit_sorters.cli import main
from qudit_sorters.sorters import mqs_mapping, perfect_mapping, sqs_mapping


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


FIG1 = {"dimension": 2, "sorter": "polarization",
        "particles": [{"state": 0, "port": 0}, {"state": 0, "port": 1}]}
QUTRITS = {"dimension": 3, "particles": [{"state": 1, "port": 0}, {"state": 1, "port": 1}]}
SUPERPOSED = {
    "dimension": 2, "sorter": "mqs", "shots": 10_000, "seed": 42,
    "particles": [{"state": {"amplitudes": [[0.7071067811865476, 0], [0.7071067811865476, 0]]}, "port": 0}],
}


def test_verify_passes(capsys):
    code, out, _ = run(["verify", "--dmin", "2", "--dmax", "8"], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["schema_version"] == "1"
    assert report["passed"] and report["first_failure"] is None
    assert report["max_residual"] < 1e-10
    names = {c["check"] for c in report["checks"]}
    assert {"mqs_theorem", "sqs_decomposition", "perfect_sorter_infeasible",
            "photonic_equivalence", "unitarity", "x4_power_shortcuts"} <= names


def test_verify_qubit_includes_polarization_rows(capsys):
    code, out, _ = run(["verify", "--dmin", "2", "--dmax", "2"], capsys)
    rows = [c for c in json.loads(out)["checks"] if c["check"].startswith("polarization_")]
    assert code == 0
    assert len(rows) == 4 and all(r["passed"] for r in rows)


@pytest.mark.parametrize("argv", [
    ["verify", "--dmin", "1", "--dmax", "4"],
    ["verify", "--dmin", "5", "--dmax", "4"],
    ["verify", "--dmin", "2", "--dmax", "17"],
    ["verify", "--tol", "1e-3"],
])
def test_verify_usage_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert "error" in err


def test_verify_reports_failure_with_exit_1(capsys, monkeypatch):
    from qudit_sorters import cli
    from qudit_sorters.verification import CheckResult

    monkeypatch.setattr(cli, "run_checks", lambda D, tol: [CheckResult(D, "broken", 1.0, False)])
    code, out, err = run(["verify", "--dmin", "3", "--dmax", "3"], capsys)
    assert code == 1
    assert json.loads(out)["first_failure"] == "D=3:broken"
    assert "D=3:broken" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sort"])
    assert exc.value.code == 2


def test_sort_fig1(tmp_path, capsys):
    code, out, _ = run(["sort", "--config", write(tmp_path, "c.json", FIG1)], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["counts"] == [2, 0]
    assert report["inferred_inputs"] == [2, 0]
    assert [r["output_system_state"] for r in report["records"]] == [0, 1]


@pytest.mark.parametrize("sorter,ports", [("sqs", [1, 2]), ("mqs", [1, 1])])
def test_sort_qutrits(tmp_path, capsys, sorter, ports):
    cfg = dict(QUTRITS, sorter=sorter)
    code, out, _ = run(["sort", "--config", write(tmp_path, "c.json", cfg)], capsys)
    assert code == 0
    assert [r["output_port"] for r in json.loads(out)["records"]] == ports


def test_sort_rejects_superposition(tmp_path, capsys):
    code, _, err = run(["sort", "--config", write(tmp_path, "c.json", SUPERPOSED)], capsys)
    assert code == 2 and "basis" in err


def test_sort_csv(tmp_path, capsys):
    code, out, _ = run(["sort", "--config", write(tmp_path, "c.json", FIG1), "--format", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows == [["port", "count", "inferred_input"], ["0", "2", "2"], ["1", "0", "0"]]


def test_sample_superposed_qubit(tmp_path, capsys):
    code, out, _ = run(["sample", "--config", write(tmp_path, "c.json", SUPERPOSED)], capsys)
    report = json.loads(out)
    assert code == 0
    sigma = (10_000 * 0.25) ** 0.5
    assert all(abs(c - 5000) <= 3 * sigma for c in report["counts"])
    assert report["total"] == 10_000
    assert sum(report["inferred_inputs"]) == pytest.approx(1.0)


def test_sample_basis_qutrit(tmp_path, capsys):
    cfg = {"dimension": 3, "shots": 100, "seed": 9, "particles": [{"state": 2, "port": 1}]}
    code, out, _ = run(["sample", "--config", write(tmp_path, "c.json", cfg)], capsys)
    assert code == 0 and json.loads(out)["counts"] == [0, 0, 100]


def test_sample_byte_identical_files(tmp_path, capsys):
    cfg = write(tmp_path, "c.json", SUPERPOSED)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["sample", "--config", cfg, "--output", str(a)]) == 0
    assert main(["sample", "--config", cfg, "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sample_requires_seed(tmp_path, capsys):
    cfg = {k: v for k, v in SUPERPOSED.items() if k != "seed"}
    code, _, err = run(["sample", "--config", write(tmp_path, "c.json", cfg)], capsys)
    assert code == 2 and "seed" in err
    code, _, _ = run(["sample", "--config", write(tmp_path, "c.json", cfg), "--seed", "1"], capsys)
    assert code == 0


def test_sample_joint_counts(tmp_path, capsys):
    cfg = {"dimension": 3, "shots": 5, "seed": 1, "measure_system": True,
           "particles": [{"state": 1, "port": 1}]}
    code, out, _ = run(["sample", "--config", write(tmp_path, "c.json", cfg)], capsys)
    assert code == 0
    assert json.loads(out)["joint_counts"][0][1] == 5


@pytest.mark.parametrize("cfg", [
    {"dimension": 1, "particles": [{"state": 0, "port": 0}]},
    {"sorter": "mqs", "particles": []},
    {"dimension": 3, "sorter": "photonic4", "particles": [{"state": 0, "port": 0}]},
    {"dimension": 2, "sorter": "bogus", "particles": [{"state": 0, "port": 0}]},
    {"dimension": 2, "particles": []},
    {"dimension": 2, "particles": [{"state": 5, "port": 0}]},
])
def test_bad_configs(tmp_path, capsys, cfg):
    code, _, _ = run(["sort", "--config", write(tmp_path, "c.json", cfg)], capsys)
    assert code == 2


def test_missing_config_file(tmp_path, capsys):
    code, _, _ = run(["sort", "--config", str(tmp_path / "nope.json")], capsys)
    assert code == 2


@pytest.mark.parametrize("mapping,expected", [
    (sqs_mapping(3), "single_input_port"),
    (mqs_mapping(3), "multi_input_port"),
    (perfect_mapping(2), "not_unitary"),
])
def test_classify(tmp_path, capsys, mapping, expected):
    code, out, _ = run(["classify", "--mapping", write(tmp_path, "m.json", mapping.to_json())], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["classification"] == expected
    if expected == "not_unitary":
        assert report["witness"] == [[0, 0], [0, 1]]


def test_classify_malformed(tmp_path, capsys):
    obj = mqs_mapping(2).to_json()
    obj["map"] = obj["map"][:2]
    code, _, _ = run(["classify", "--mapping", write(tmp_path, "m.json", obj)], capsys)
    assert code == 2


def test_decompose(capsys):
    code, out, _ = run(["decompose", "--dimension", "5"], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["sqs_fourier_residual"] < 1e-10
    assert report["mqs_theorem_residual"] < 1e-10
    code, _, _ = run(["decompose", "--dimension", "1"], capsys)
    assert code == 2


def test_describe_photonic4(capsys):
    code, out, _ = run(["describe", "photonic4"], capsys)
    report = json.loads(out)
    assert code == 0
    prisms = [e for e in report["elements"] if e["element"] == "dove_prism"]
    assert [p["path"] for p in prisms] == [1, 2, 3]
    assert [p["angle_rad"] for p in prisms] == [0.78539816, 1.57079633, 2.35619449]
    labels = [e["label"] for e in report["elements"] if e["element"] == "shift_gate"]
    assert labels == ["X_4^dagger", "X_4^2", "X_4"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qudit_sorters.cli", "decompose", "--dimension", "3"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"]
