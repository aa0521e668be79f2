import csv
import io
import json
import math

import numpy as np
import pytest

from coupledosc import cli
from coupledosc.critical import envelope_constants
from coupledosc.metrics import concurrence_closed


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def table(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(lines))))
    return rows


def test_timeseries_concurrence_column(capsys):
    code, out, _ = run(capsys, "timeseries", "--gamma-ratio", "0.7", "--theta", "1.0",
                       "--t-max", "6", "--points", "61")
    assert code == 0
    rows = table(out)
    assert len(rows) == 61
    t = np.array([float(r["t_prime"]) for r in rows])
    c = np.array([float(r["concurrence"]) for r in rows])
    assert np.abs(c - concurrence_closed(t, 0.7, 1.0)).max() < 1e-11


def test_lossless_concurrence_is_periodic_with_unit_peaks(capsys):
    code, out, _ = run(capsys, "timeseries", "--gamma-ratio", "0", "--t-max", "12.566370614359172",
                       "--points", "2001")
    assert code == 0
    c = np.array([float(r["concurrence"]) for r in table(out)])
    assert c.max() == pytest.approx(1.0, abs=1e-5)
    # the period of the concurrence is pi
    assert np.abs(c[:1001] - c[1000:]).max() < 1e-10


def test_sweep_point_matches_timeseries(capsys):
    _, single, _ = run(capsys, "timeseries", "--gamma-ratio", "1.5", "--t-max", "4", "--points", "21")
    _, swept, _ = run(capsys, "sweep", "--gamma-grid", "1.5:1.5:1", "--t-max", "4", "--points", "21")
    assert table(single) == table(swept)


def test_sweep_maxima_table(tmp_path, capsys):
    out = tmp_path / "grid.csv"
    code, _, _ = run(capsys, "sweep", "--gamma-grid", "0.5:1.5:0.5", "--t-max", "3", "--points", "11",
                     "--maxima-table", "--out", str(out))
    assert code == 0
    rows = table((tmp_path / "grid.maxima.csv").read_text())
    by_gamma = {}
    for r in rows:
        by_gamma.setdefault(float(r["Gamma"]), []).append(r)
    assert sorted(by_gamma) == [0.5, 1.0, 1.5]
    for G, entries in by_gamma.items():
        # removing the e^{-Gamma t'} envelope leaves the constants K_plus > K_minus
        scaled = {(r["kind"], int(r["n"])): float(r["value"]) * math.exp(G * float(r["t_prime"]))
                  for r in entries if r["kind"] in ("ConcMaxPlus", "ConcMaxMinus")}
        k_plus, k_minus = envelope_constants(G)
        assert k_plus > k_minus
        for (kind, _), k in scaled.items():
            assert k == pytest.approx(k_plus if kind == "ConcMaxPlus" else k_minus, rel=1e-9)


def test_sweep_is_deterministic(tmp_path, capsys):
    paths = [tmp_path / f"s{i}.csv" for i in range(2)]
    for p, workers in zip(paths, ("1", "4")):
        assert run(capsys, "sweep", "--gamma-grid", "0:4:0.25", "--points", "31",
                   "--workers", workers, "--out", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_json_output(capsys):
    code, out, _ = run(capsys, "critical", "--gamma-ratio", "1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert doc["command"] == "critical"
    assert doc["columns"] == list(cli.TABLE_COLUMNS)
    assert doc["config"]["gamma_ratio"] == 1.0
    assert doc["rows"]


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"gamma_ratio": 3.0, "points": 5, "format": "json"}))
    _, out, _ = run(capsys, "timeseries", "--config", str(cfg), "--points", "7")
    doc = json.loads(out)
    assert doc["config"]["gamma_ratio"] == 3.0
    assert len(doc["rows"]) == 7


@pytest.mark.parametrize("argv", [
    ["timeseries"],
    ["timeseries", "--gamma-ratio", "-1"],
    ["timeseries", "--gamma-ratio", "1", "--theta", "2"],
    ["sweep", "--gamma-grid", "1:0:0.5"],
    ["critical", "--gamma-ratio", "abc"],
    ["bogus"],
])
def test_bad_input_exits_1(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_unknown_config_key_exits_1(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"gamma_ratio": 1.0, "colour": "red"}))
    assert run(capsys, "timeseries", "--config", str(cfg))[0] == 1


def test_oracle_guard_exits_2(capsys):
    code, _, err = run(capsys, "timeseries", "--gamma-ratio", "1000", "--oracle", "--points", "3")
    assert code == 2
    assert "guard" in err


def test_oracle_columns(capsys):
    code, out, _ = run(capsys, "timeseries", "--gamma-ratio", "1", "--theta", str(math.pi / 4),
                       "--t-max", "2", "--points", "5", "--oracle", "--convention", "physical")
    assert code == 0
    rows = table(out)
    assert set(cli.ORACLE_COLUMNS) <= set(rows[0])
    assert max(float(r["element_dev"]) for r in rows) < 1e-6
    assert "max element deviation" in out


def test_verify_quick_reports_failures_with_exit_3(tmp_path, capsys):
    report = tmp_path / "report.json"
    code, _, err = run(capsys, "verify", "--profile", "quick", "--out", str(report))
    doc = json.loads(report.read_text())
    assert doc["schema"] == 1
    assert code == (0 if doc["passed"] else 3)
    assert {c["criterion"] for c in doc["checks"]} == set(range(1, 12))
    assert err.count("[PASS]") + err.count("[FAIL]") == len(doc["checks"])
