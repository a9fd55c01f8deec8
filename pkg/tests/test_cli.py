import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from doubleroot import config as cfgmod
from doubleroot.cli import main
from doubleroot.errors import ConfigError
from doubleroot.io import csv_header, read_csv, write_csv
from doubleroot.presets import PRESETS, get_preset
from doubleroot.solver import SolveRequest, solve


def _json(path):
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_preset_config_round_trip(tmp_path, name):
    cfg = cfgmod.from_preset(get_preset(name))
    path = tmp_path / "run.json"
    cfgmod.dump(cfg, path)
    again = cfgmod.load(path)
    assert again == cfg


def test_csv_round_trip_is_bit_identical(tmp_path):
    preset = get_preset("example-3.3.1")
    traj = solve(SolveRequest(preset.spec, preset.initial, np.linspace(0, 1, 51)))
    path = write_csv(traj, tmp_path / "t.csv")
    back = read_csv(path)
    assert np.array_equal(back.times, traj.times)
    assert np.array_equal(back.x, traj.x)
    assert np.array_equal(back.v, traj.v)
    raw = path.read_bytes()
    assert b"\r" not in raw
    raw.decode("utf-8")


def test_csv_header():
    assert csv_header(2) == ["t", "re_x1", "im_x1", "re_x2", "im_x2",
                             "re_v1", "im_v1", "re_v2", "im_v2"]


def test_solve_writes_csv_and_diagnostics(tmp_path):
    assert main(["solve", "--preset", "example-3.2.1", "--out", str(tmp_path)]) == 0
    with (tmp_path / "example-3.2.1-algebraic.csv").open(encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == csv_header(2)
    assert len(rows) - 1 == 1201
    assert float(rows[-1][0]) == 6.0
    diag = _json(tmp_path / "example-3.2.1-diagnostics.json")
    assert max(diag["p_residual"]) <= 1e-9
    assert len(diag["ybar"]) == 1201


def test_solve_damped_reports_shrinking_period_residuals(tmp_path):
    assert main(["solve", "--preset", "example-3.4.2", "--out", str(tmp_path)]) == 0
    diag = _json(tmp_path / "example-3.4.2-diagnostics.json")
    d = diag["period_residuals"]["successive"]
    assert diag["period_residuals"]["period"] == 3
    assert all(b < a for a, b in zip(d[1:], d[2:]))


def test_integrate_returns_after_period(tmp_path):
    assert main(["integrate", "--preset", "example-3.1.1", "--out", str(tmp_path),
                 "--format", "json"]) == 0
    data = _json(tmp_path / "example-3.1.1-direct.json")
    x = np.array(data["x"])
    assert np.max(np.abs(x[-1] - x[0])) <= 1e-6


def test_integrate_printed(tmp_path):
    assert main(["integrate", "--preset", "example-3.5-mbar3", "--printed",
                 "--out", str(tmp_path)]) == 0
    traj = read_csv(tmp_path / "example-3.5-mbar3-printed.csv")
    assert traj.N == 3
    assert np.max(np.abs(traj.x[-1] - traj.x[0])) <= 1e-5


def test_compare_prints_summary(tmp_path, capsys):
    assert main(["compare", "--preset", "example-3.3.3", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert out.count("\n") == 1 and "max position error" in out
    report = _json(tmp_path / "example-3.3.3-comparison.json")
    assert report["max_err"] <= 1e-5


def test_compare_with_perturbation_is_informative(tmp_path):
    args = ["compare", "--preset", "example-3.1.1", "--out", str(tmp_path),
            "--perturb-initial", "1e-3", "--seed", "7"]
    assert main(args) == 0
    first = _json(tmp_path / "example-3.1.1-comparison.json")["max_err"]
    assert first > 1e-5
    assert main(args) == 0
    assert _json(tmp_path / "example-3.1.1-comparison.json")["max_err"] == first


@pytest.mark.parametrize("name,verdict,k", [("example-3.1.1", "periodic", 12),
                                            ("example-3.2.1", "periodic", 6),
                                            ("example-3.4.2", "asymptotic", None)])
def test_period_command(tmp_path, name, verdict, k):
    assert main(["period", "--preset", name, "--out", str(tmp_path)]) == 0
    report = _json(tmp_path / f"{name}-period.json")
    assert report["verdict"] == verdict
    if k is not None:
        assert report["multiple_of_T"] == k


def test_unknown_preset_lists_choices(tmp_path, capsys):
    assert main(["solve", "--preset", "example-9", "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    for name in PRESETS:
        assert name in err


def test_bad_config_names_field(tmp_path, capsys):
    d = cfgmod.to_dict(cfgmod.from_preset(get_preset("example-3.1.1")))
    d["model"]["mbar"] = 7
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d), encoding="utf-8")
    assert main(["solve", "--config", str(path), "--out", str(tmp_path)]) == 2
    assert "model.mbar" in capsys.readouterr().err
    with pytest.raises(ConfigError) as exc:
        cfgmod.load(path)
    assert exc.value.field == "model.mbar"


@pytest.mark.parametrize("mutate,field", [
    (lambda d: d["grid"].pop("t_end"), "grid.t_end"),
    (lambda d: d["model"]["laws"]["1"].update(r="x/y"), "model.laws.1"),
    (lambda d: d["initial"]["x"].append([0, 0]), "initial"),
    (lambda d: d["outputs"].update(format="xml"), "outputs.format"),
    (lambda d: d["integrator"].update(bogus=1), "integrator"),
])
def test_config_errors(mutate, field):
    d = cfgmod.to_dict(cfgmod.from_preset(get_preset("example-3.1.1")))
    mutate(d)
    with pytest.raises(ConfigError) as exc:
        cfgmod.from_dict(d)
    assert exc.value.field.startswith(field)


def test_degenerate_initial_data_is_a_config_error(tmp_path, capsys):
    d = cfgmod.to_dict(cfgmod.from_preset(get_preset("example-3.1.1")))
    d["initial"]["x"][1] = d["initial"]["x"][0]
    path = tmp_path / "coincident.json"
    path.write_text(json.dumps(d), encoding="utf-8")
    assert main(["integrate", "--config", str(path), "--out", str(tmp_path)]) == 2
    assert "[initial]" in capsys.readouterr().err


def test_collision_exit_code(tmp_path):
    d = {"name": "head-on",
         "model": {"N": 2, "mbar": 3, "laws": {"1": {"law": "damped", "a": 1e-12},
                                                "2": {"law": "damped", "a": 1e-12}}},
         "initial": {"x": [[1, 0], [-1, 0]], "v": [[-1, 0], [1, 0]]},
         "grid": {"t_end": 2, "samples": 5}}
    path = tmp_path / "collide.json"
    path.write_text(json.dumps(d), encoding="utf-8")
    assert main(["integrate", "--config", str(path), "--out", str(tmp_path)]) == 4


def test_numerical_failure_exit_code(tmp_path):
    d = cfgmod.to_dict(cfgmod.from_preset(get_preset("example-3.1.1")))
    d["integrator"]["max_steps"] = 5
    path = tmp_path / "starved.json"
    path.write_text(json.dumps(d), encoding="utf-8")
    assert main(["integrate", "--config", str(path), "--out", str(tmp_path)]) == 3


def test_rel_tol_flag(tmp_path):
    assert main(["integrate", "--preset", "example-3.1.1", "--rel-tol", "1e-9",
                 "--out", str(tmp_path)]) == 0
    diag = _json(tmp_path / "example-3.1.1-direct-diagnostics.json")
    assert diag["rel_tol"] == 1e-9
    assert main(["integrate", "--preset", "example-3.1.1", "--rel-tol", "-1",
                 "--out", str(tmp_path)]) == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "doubleroot", "solve", "--preset",
                           "example-3.2.1", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "example-3.2.1-algebraic.csv").exists()
