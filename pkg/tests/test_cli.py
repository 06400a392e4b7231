import json
from fractions import Fraction

import numpy as np
from click.testing import CliRunner

from qdlab.cli import main


def run(args):
    result = CliRunner().invoke(main, args, catch_exceptions=False)
    return result


def read_csv(path):
    header, columns, rows = [], None, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# "):
                header.append(line[2:])
            elif columns is None:
                columns = line.split(",")
            else:
                rows.append(line.split(","))
    return header, columns, rows


def test_spectrum_command(tmp_path):
    out = str(tmp_path / "spec")
    res = run(["spectrum", "--beta", "2", "--v", "0.9", "--n", "200",
               "--bumps", "6", "--out", out])
    assert res.exit_code == 0
    header, columns, rows = read_csv(out + ".csv")
    assert columns == ["lambda", "label", "criterion", "participation_ratio"]
    assert len(rows) == 200
    labels = {r[1] for r in rows}
    assert labels <= {"SC", "PP", "EDGE"}
    manifest = json.loads((tmp_path / "spec.manifest.json").read_text())
    assert manifest["config"]["beta"] == 2
    assert "wall_time_s" in manifest


def test_prufer_command(tmp_path):
    out = str(tmp_path / "pr")
    res = run(["prufer", "--beta", "2", "--v", "0.5", "--energy", "0.7",
               "--bumps", "8", "--out", out])
    assert res.exit_code == 0
    _, columns, rows = read_csv(out + ".csv")
    assert columns == ["bump", "site", "radius", "phase"]
    assert len(rows) == 8
    assert all(float(r[2]) > 0 for r in rows)


def test_cesaro_command(tmp_path):
    out = str(tmp_path / "ces")
    res = run(["cesaro", "--depth", "8", "--points", "12", "--out", out])
    assert res.exit_code == 0
    header, columns, rows = read_csv(out + ".csv")
    assert columns == ["T", "cesaro_average"]
    assert any("decay exponent" in h for h in header)


def test_cantor_command(tmp_path):
    out = str(tmp_path / "can")
    res = run(["cantor", "--points", "50", "--out", out])
    assert res.exit_code == 0
    _, columns, rows = read_csv(out + ".csv")
    assert float(rows[0][1]) == 1.0  # u = 0


def test_kronecker_command(tmp_path):
    out = str(tmp_path / "kr")
    res = run(["kronecker", "--beta", "4", "--v", "1.0", "--theta", "0.0",
               "--out", out])
    assert res.exit_code == 0
    _, _, rows = read_csv(out + ".csv")
    names = [r[0] for r in rows]
    assert "band" in names and "pp_0" in names and "sc_unknown" in names


def test_ea_ground_state_command(tmp_path):
    out = str(tmp_path / "gs")
    res = run(["ea", "ground-state", "--d", "2", "-l", "3", "--out", out])
    assert res.exit_code == 0
    _, columns, rows = read_csv(out + ".csv")
    assert columns[0] == "energy"
    assert float(rows[0][0]) < 0


def test_ea_cluster_bound_command(tmp_path):
    out = str(tmp_path / "cb")
    res = run(["ea", "cluster-bound", "--d", "3", "--out", out])
    assert res.exit_code == 0
    _, _, rows = read_csv(out + ".csv")
    assert Fraction(rows[0][0]) == Fraction(-36096, 16384)
    assert float(rows[0][1]) == -2.203125
    assert rows[0][3] == "1"


def test_ea_scan_command(tmp_path):
    out = str(tmp_path / "scan")
    res = run(["ea", "scan", "--d", "2", "--sizes", "2,3", "--samples", "5",
               "--out", out])
    assert res.exit_code == 0
    _, columns, rows = read_csv(out + ".csv")
    assert len(rows) == 4  # two sizes x two boundary conditions


def test_emch_trace_command(tmp_path):
    out = str(tmp_path / "tr")
    res = run(["emch", "trace", "--dist", "gaussian", "--z", "4", "--beta",
               "1", "--tmax", "3", "--points", "20", "--samples", "1000",
               "--out", out])
    assert res.exit_code == 0
    _, columns, rows = read_csv(out + ".csv")
    assert columns == ["t", "closed_form", "mc_mean", "mc_stderr"]
    gap = [abs(float(r[1]) - float(r[2])) for r in rows]
    err = [float(r[3]) for r in rows]
    assert all(g <= 4 * e + 1e-12 for g, e in zip(gap, err))


def test_emch_exact_command(tmp_path):
    out = str(tmp_path / "ex")
    res = run(["emch", "exact", "--d", "1", "--half-width", "2",
               "--points", "20", "--out", out])
    assert res.exit_code == 0
    _, _, rows = read_csv(out + ".csv")
    assert all(float(r[3]) < 1e-10 for r in rows)


def test_emch_stability_command(tmp_path):
    out = str(tmp_path / "st")
    res = run(["emch", "stability", "--kernel", "power", "--exponent", "0.75",
               "--dist", "uniform", "--out", out])
    assert res.exit_code == 0
    _, _, rows = read_csv(out + ".csv")
    assert rows[0][2] == "0"  # second kind fails for the L2-only kernel
    assert rows[0][4] == "L2_ONLY"


def test_ensemble_check_command(tmp_path):
    out = str(tmp_path / "en")
    res = run(["ensemble", "check", "--dist", "uniform", "--draws", "10000",
               "--out", out])
    assert res.exit_code == 0
    _, _, rows = read_csv(out + ".csv")
    m2 = next(r for r in rows if r[0] == "2")
    assert abs(float(m2[1]) - 1.0 / 3.0) < 0.02


def test_bad_config_exit_code(tmp_path):
    res = CliRunner().invoke(main, ["spectrum", "--beta", "1", "--v", "0.5",
                                    "--out", str(tmp_path / "x")])
    assert res.exit_code == 2


def test_budget_exit_code(tmp_path):
    res = CliRunner().invoke(main, ["ea", "ground-state", "--d", "2", "-l",
                                    "6", "--out", str(tmp_path / "x")])
    assert res.exit_code == 3


def test_csv_format_invariants(tmp_path):
    out = str(tmp_path / "fmt")
    run(["cantor", "--points", "10", "--out", out])
    raw = open(out + ".csv", "rb").read()
    assert b"\r" not in raw  # LF only
    text = raw.decode("utf-8")
    assert text.startswith("# ")
    # full precision floats survive a round trip
    _, _, rows = read_csv(out + ".csv")
    for r in rows:
        x = float(r[1])
        assert format(x, ".17g") == r[1]
