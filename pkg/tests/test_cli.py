import json

import numpy as np
import pytest

from qdot_numerov.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, RunConfig, main, run
from qdot_numerov.output import read_table, read_wavefunction


def test_table1_command(tmp_path):
    out = tmp_path / "t1.csv"
    assert run(RunConfig("table1", out=str(out))) == EXIT_OK
    meta, rows = read_table(out)
    assert len(rows) == 5
    assert meta["artifact_version"] and "rescale_threshold" in meta
    assert {r["status"] for r in rows} == {"ok"}
    assert float(rows[1]["eta_numerical"]) == pytest.approx(0.499, abs=2e-3)


def test_table2_command_json(tmp_path):
    out = tmp_path / "t2.json"
    assert main(["table2", "--omega", "0.01", "--format", "json", "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert len(doc["rows"]) == 15
    assert doc["metadata"]["omega"] == "0.01"
    ell0 = [float(r["eta_numerical"]) for r in doc["rows"] if r["ell"] == "0"]
    assert ell0[0] == pytest.approx(0.1053, abs=5e-4)


def test_figure1_command(tmp_path):
    out = tmp_path / "f1.csv"
    assert run(RunConfig("figure1", out=str(out))) == EXIT_OK
    meta, rows = read_table(out)
    assert len(rows) == 5
    assert 0.035 <= float(meta["slope_per_state"]) <= 0.042
    assert [int(r["nodes"]) for r in rows] == sorted(int(r["nodes"]) for r in rows)


def test_scan_with_no_states_is_success(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["scan", "--omega", "0.01", "--ell", "1", "--window", "-10", "0",
                 "--out", str(out)]) == EXIT_OK
    meta, rows = read_table(out)
    assert rows == [] and meta["states_found"] == "0"


def test_solve_and_nodes_commands(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["solve", "--no-coulomb", "--window", "0.001", "0.05", "--out", str(a)]) == 0
    assert main(["nodes", "--no-coulomb", "--nodes", "2", "--out", str(b)]) == 0
    assert float(read_table(a)[1][0]["eta"]) == pytest.approx(0.02, rel=1e-5)
    assert float(read_table(b)[1][0]["eta"]) == pytest.approx(0.10, rel=1e-5)


@pytest.mark.parametrize("argv", [
    ["scan"],
    ["nodes"],
    ["solve", "--window", "0.2", "0.1"],
    ["table1", "--omega", "-1"],
    ["nodes", "--nodes", "-2"],
    ["scan", "--window", "0.1", "0.2", "--step", "0"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert record["error"] == "usage" and record["message"]


def test_unknown_format_rejected():
    assert run(RunConfig("table1", format="xml")) == EXIT_USAGE


def test_io_error(tmp_path, capsys):
    bad = tmp_path / "missing" / "x.csv"
    assert main(["nodes", "--nodes", "0", "--out", str(bad)]) == EXIT_IO
    assert json.loads(capsys.readouterr().err.strip())["error"] == "io"


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_wavefunction_round_trip(tmp_path, fmt):
    out = tmp_path / f"wf.{fmt}"
    assert main(["wavefunction", "--omega", "0.5", "--nodes", "0", "--format", fmt,
                 "--out", str(out)]) == EXIT_OK
    meta, r, u = read_wavefunction(out)
    assert len(r) == len(u) == int(meta["n_points"])
    assert float(meta["r_min"]) == pytest.approx(r[0])
    assert np.trapezoid(u * u, r) == pytest.approx(1.0, abs=1e-6)
    assert np.all(u > 0)
    assert np.count_nonzero(np.diff(np.sign(np.diff(u))) < 0) == 1
    assert float(meta["eta"]) == pytest.approx(2.0, rel=1e-5)


def test_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["wavefunction", "--omega", "0.1", "--ell", "1", "--nodes", "1",
                     "--out", str(path)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_bound_metadata_ell1(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bound", "--ell", "1", "--out", str(out)]) == EXIT_OK
    meta, rows = read_table(out)
    assert rows == [] and meta["bound_state_found"] == "false"
    for key in ("r_min", "r_max", "step", "n_points", "eta_floor", "reported_eta"):
        assert key in meta


def test_grid_overrides_recorded(tmp_path):
    out = tmp_path / "g.csv"
    assert main(["scan", "--no-coulomb", "--window", "0.001", "0.07", "--step", "0.01",
                 "--r-max", "120", "--out", str(out)]) == EXIT_OK
    meta, rows = read_table(out)
    assert float(meta["step"]) == pytest.approx(0.01)
    assert float(meta["r_max"]) == pytest.approx(120, abs=0.01)
    assert [int(r["nodes"]) for r in rows] == [0, 1]
