"""CLI subcommands: artifacts, metadata schema, exit codes, determinism."""

import json
import math

import pytest

from brachisto import cli
from brachisto.geometry import CSV_HEADER


def _run(capsys, argv):
    rc = cli.run(argv)
    out = capsys.readouterr().out
    return rc, json.loads(out) if out.strip().startswith("{") else None


def test_solve_writes_curve_and_metadata(tmp_path, capsys):
    rc, meta = _run(capsys, ["solve", "--theta-f", "1.0472", "--out", str(tmp_path)])
    assert rc == 0
    assert set(meta) == {"command", "params", "results", "tolerances", "version"}
    assert meta["results"]["family"] == "strong"
    assert meta["results"]["params"]["D"] == pytest.approx(0.2300, abs=5e-3)
    text = (tmp_path / "solve_curve.csv").read_text()
    assert text.splitlines()[0] == CSV_HEADER
    assert (tmp_path / "solve.json").exists()


def test_degrees_flag_matches_radians(tmp_path, capsys):
    rc, by_deg = _run(capsys, ["solve", "--theta-f", "60", "--degrees",
                               "--out", str(tmp_path / "a")])
    assert rc == 0
    rc, by_rad = _run(capsys, ["solve", "--theta-f", repr(math.pi / 3.0),
                               "--out", str(tmp_path / "b")])
    assert rc == 0
    assert by_deg["results"]["params"]["D"] == pytest.approx(
        by_rad["results"]["params"]["D"], rel=1e-12)
    # files record radians regardless of the input unit
    assert by_deg["params"]["theta_f"] == pytest.approx(math.pi / 3.0, rel=1e-15)


def test_identical_flags_give_identical_bytes(tmp_path, capsys):
    argv = ["solve", "--theta-f", "2.5", "--n", "301"]
    cli.run(argv + ["--out", str(tmp_path / "a")])
    cli.run(argv + ["--out", str(tmp_path / "b")])
    capsys.readouterr()
    for name in ("solve_curve.csv", "solve.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_foliate_emits_one_csv_per_curve(tmp_path, capsys):
    rc, meta = _run(capsys, ["foliate", "--count", "6", "--n-samples", "201",
                             "--out", str(tmp_path)])
    assert rc == 0
    files = meta["results"]["files"]
    assert len(files) == 6
    for name in files:
        assert (tmp_path / name).exists()
    index = meta["results"]["index"]
    assert {e["family"] for e in index} == {"strong", "weak"}


def test_oracle_tolerance_gates_exit_code(tmp_path, capsys):
    argv = ["oracle", "--target-r", "1.0", "--target-theta", "1.0472",
            "--out", str(tmp_path)]
    rc, meta = _run(capsys, argv + ["--stencil", "dense"])
    assert rc == 0
    assert meta["results"]["gap_vs_analytic"] < 0.02
    # the coarse stencil overshoots a tight gap tolerance
    rc, meta = _run(capsys, argv + ["--stencil", "knight", "--tol", "0.002"])
    assert rc == 2
    assert meta["results"]["gap_vs_analytic"] > 0.002
    assert meta["tolerances"]["gap_vs_analytic"] == 0.002


def test_value_residual_gates_exit_code(tmp_path, capsys):
    argv = ["value", "--nr", "120", "--ntheta", "240", "--curves", "256",
            "--n-samples", "601", "--svg", "--out", str(tmp_path)]
    rc, meta = _run(capsys, argv)
    assert rc == 2
    assert meta["results"]["max_residual"] > 0.05
    assert (tmp_path / "value.csv").exists()
    svg = (tmp_path / "value.svg").read_text()
    assert svg.startswith("<svg")
    rc, _ = _run(capsys, argv + ["--tol", "0.2"])
    assert rc == 0
    header = (tmp_path / "value.csv").read_text().splitlines()[0]
    assert header == "r,theta,value,family"


def test_converge_writes_rows(tmp_path, capsys):
    rc, meta = _run(capsys, ["converge", "--theta-f", "2.3562",
                             "--eps", "0.4,0.2,0.1", "--n", "501",
                             "--out", str(tmp_path)])
    assert rc == 0
    assert meta["results"]["monotone"] is True
    lines = (tmp_path / "converge.csv").read_text().splitlines()
    assert lines[0] == "epsilon,distance"
    assert len(lines) == 4


def test_check_modes_and_exit_codes(tmp_path, capsys):
    rc, meta = _run(capsys, ["check", "--stationarity", "--theta-f", "2.0944",
                             "--epsilon", "0.5", "--checks", "4",
                             "--out", str(tmp_path)])
    assert rc == 0
    assert meta["results"]["passed"] is True

    rc, _ = _run(capsys, ["check", "--out", str(tmp_path)])
    assert rc == 1
    rc, _ = _run(capsys, ["check", "--stationarity", "--eikonal",
                          "--out", str(tmp_path)])
    assert rc == 1
    rc, _ = _run(capsys, ["check", "--stationarity", "--out", str(tmp_path)])
    assert rc == 1


def test_usage_errors_exit_one(capsys):
    assert cli.run(["nonsense"]) == 1
    assert cli.run(["solve"]) == 1  # missing --theta-f
    assert cli.run(["repro", "fig9"]) == 1
    assert cli.run(["--help"]) == 0
    capsys.readouterr()


def test_domain_errors_exit_one(tmp_path, capsys):
    rc = cli.run(["solve", "--theta-f", "2.0", "--epsilon", "0.5",
                  "--terminal-r", "0.8", "--out", str(tmp_path)])
    err = capsys.readouterr().err
    assert rc == 1
    assert "NotOnBoundary" in err
    rc = cli.run(["converge", "--theta-f", "2.0", "--eps", "0.1,0.4",
                  "--out", str(tmp_path)])
    assert rc == 1


def test_repro_round_trip_is_stable(tmp_path, capsys):
    rc, meta_a = _run(capsys, ["repro", "fig4", "--out", str(tmp_path / "a")])
    assert rc == 0
    rc, meta_b = _run(capsys, ["repro", "fig4", "--out", str(tmp_path / "b")])
    assert rc == 0
    assert meta_a["results"]["sha256"] == meta_b["results"]["sha256"]
    assert "fig4_members_curves.csv" in meta_a["results"]["files"]
    for name in meta_a["results"]["files"]:
        assert (tmp_path / "a" / name).exists()
