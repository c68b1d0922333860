import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from ehbvm.cli import (EXIT_CONFIG, EXIT_NONCONVERGED, EXIT_OK, BENCHMARK_TABLE1, SUMMARY_FIELDS,
                       RunDescriptor, check_cell, fmt, main, write_csv)
from ehbvm.exceptions import ConfigurationError


def _run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_run_ehbvm_summary(capsys):
    code, out, _ = _run(["run", "--problem", "quartic", "--method", "ehbvm", "--k", "4", "--s", "2",
                         "--h", "0.1", "--t-end", "100"], capsys)
    assert code == EXIT_OK
    fields = dict(kv.split("=") for kv in out.split())
    assert fields["method"] == "EHBVM(4,2)"
    assert float(fields["e_H"]) <= 1e-12
    assert float(fields["e_L"]) <= 1e-12
    assert fields["e_sol"] == "-"


@pytest.mark.parametrize("argv", [
    ["run", "--problem", "quartic", "--method", "ehbvm", "--k", "4", "--s", "1"],
    ["run", "--problem", "harmonic", "--method", "gauss", "--k", "3", "--s", "2"],
    ["run", "--h", "0.3", "--t-end", "1"],
    ["run", "--h", "-0.1"],
])
def test_invalid_configuration_exits_2(argv, capsys):
    code, _, err = _run(argv, capsys)
    assert code == EXIT_CONFIG
    assert err.startswith("error:")


def test_unknown_problem_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["run", "--problem", "nope"])
    assert exc.value.code == 2


def test_strict_non_convergence_exits_3(capsys):
    argv = ["run", "--method", "hbvm", "--h", "0.1", "--t-end", "0.5", "--max-iter", "2"]
    assert _run(argv, capsys)[0] == EXIT_OK
    assert _run(argv + ["--strict"], capsys)[0] == EXIT_NONCONVERGED


def test_harmonic_reports_e_sol(capsys):
    code, out, _ = _run(["run", "--problem", "harmonic", "--method", "gauss", "--k", "2", "--s", "2",
                         "--h", "0.1", "--t-end", "10"], capsys)
    assert code == EXIT_OK
    fields = dict(kv.split("=") for kv in out.split())
    assert 0 < float(fields["e_sol"]) < 1e-4
    assert fields["e_L"] == "-"


def test_summary_csv(tmp_path, capsys):
    path = tmp_path / "s.csv"
    _run(["run", "--method", "hbvm", "--h", "0.1", "--t-end", "1", "--csv", str(path)], capsys)
    text = path.read_bytes()
    assert b"\r" not in text
    rows = list(csv.DictReader(io.StringIO(text.decode())))
    assert list(rows[0]) == SUMMARY_FIELDS
    assert rows[0]["method"] == "hbvm" and rows[0]["k"] == "4" and rows[0]["e_sol"] == ""


def test_trajectory_csv(tmp_path, capsys):
    path = tmp_path / "t.csv"
    _run(["run", "--h", "0.1", "--t-end", "1", "--csv", str(path), "--trajectory"], capsys)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "y_1", "y_2", "y_3", "y_4", "H", "L_1"]
    assert len(rows) == 12
    assert float(rows[1][5]) == 4.005
    assert float(rows[-1][0]) == pytest.approx(1.0)


@pytest.mark.parametrize("x", [np.pi, 1e-300, -2.5e-17, 0.1 + 0.2, np.nextafter(1.0, 2.0)])
def test_fmt_round_trip(x):
    assert float(fmt(x)) == x
    assert len(fmt(x).split("e")[0].replace("-", "").replace(".", "")) == 17


def test_fmt_special():
    assert fmt(None) == "" and fmt(float("nan")) == ""
    assert fmt(3) == "3" and fmt(np.int64(7)) == "7"


def test_write_csv_round_trip():
    rng = np.random.default_rng(5)
    vals = rng.standard_normal(50) * 10.0 ** rng.integers(-20, 20, 50)
    rows = [{"method": "gauss", "x": v} for v in vals]
    buf = io.StringIO()
    write_csv(rows, ["method", "x"], buf)
    back = [float(r["x"]) for r in csv.DictReader(io.StringIO(buf.getvalue()))]
    np.testing.assert_array_equal(back, vals)


def test_run_descriptor_grid():
    assert RunDescriptor("quartic", "ehbvm", 4, 2, 0.1, 100.0).n_steps == 1000
    assert RunDescriptor("quartic", "ehbvm", 4, 2, 0.00625, 100.0).n_steps == 16000
    with pytest.raises(ConfigurationError):
        RunDescriptor("quartic", "ehbvm", 4, 2, 0.3, 1.0)
    with pytest.raises(ConfigurationError):
        RunDescriptor("nope", "ehbvm", 4, 2, 0.1, 1.0)


def test_check_cell_classes():
    assert check_cell(5e-14, 9e-13) and not check_cell(5e-14, 2e-12)
    assert check_cell(1e-4, 4.9e-4) and check_cell(1e-4, 2.1e-5)
    assert not check_cell(1e-4, 6e-4) and not check_cell(1e-4, 1.9e-5)


def test_benchmark_table_complete():
    assert len(BENCHMARK_TABLE1) == 15
    assert BENCHMARK_TABLE1[("gauss", 0.1)][0] == 2.05e-04
    assert BENCHMARK_TABLE1[("hbvm", 0.05)][1] == 5.55e-08
    assert BENCHMARK_TABLE1[("ehbvm", 0.00625)][2] == 3.72e-08


def test_table1_short_is_deterministic(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"t{i}.csv"
        code = main(["table1", "--t-end", "1", "--levels", "2", "--csv", str(path)])
        assert code == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    rows = list(csv.DictReader(io.StringIO(outs[0].decode())))
    assert [(r["method"], float(r["h"])) for r in rows] == [
        (m, h) for m in ("gauss", "hbvm", "ehbvm") for h in (0.1, 0.05)]
    # benchmark values only apply to the full horizon
    assert all(r["paper_e_H"] == "" for r in rows)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ehbvm", "run", "--h", "0.1", "--t-end", "0.2"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.startswith("method=EHBVM(4,2)")
