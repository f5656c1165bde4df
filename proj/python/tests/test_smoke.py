import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

import tdse1d

CONFIGS = Path(__file__).resolve().parents[2] / "configs"

SMALL = """
[grid]
x_min = -10
x_max = 10
dx = 0.05
[time]
dt = 0.01
steps = 200
[mode]
type = closed
[packet]
center = 0
sigma = 1
k0 = 1
[output]
snapshot_stride = 100
probes = 0
"""


def test_barrier_transmission_reference_values():
    T, R = tdse1d.barrier_transmission(2.4, 5.0, 2.0)
    assert T == pytest.approx(0.41919374386814722, rel=1e-13)
    assert T + R == pytest.approx(1.0, abs=1e-15)
    assert tdse1d.barrier_transmission(1.0, 5.0, 2.0)[0] == pytest.approx(8.5862293069851148e-4, rel=1e-12)
    with pytest.raises(ValueError):
        tdse1d.barrier_transmission(0.0, 5.0, 2.0)


def test_free_gaussian_peak_and_norm():
    x = np.linspace(-30, 30, 6001)
    psi = tdse1d.free_gaussian_field(x, 0.0, center=0.0, sigma=1.0, k0=1.0)
    assert np.abs(psi).max() ** 2 == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-12)
    assert np.sum(np.abs(psi) ** 2) * (x[1] - x[0]) == pytest.approx(1.0, rel=1e-9)


def test_thomas_solve_matches_numpy():
    rng = np.random.default_rng(1)
    n = 12
    alpha = 0.3 - 0.2j
    beta = 3 + rng.normal(size=n) + 1j * rng.normal(size=n)
    r = rng.normal(size=n) + 1j * rng.normal(size=n)
    dense = np.diag(beta) + alpha * (np.eye(n, k=1) + np.eye(n, k=-1))
    np.testing.assert_allclose(tdse1d.thomas_solve(alpha, beta, r), np.linalg.solve(dense, r), rtol=1e-12)


def test_lattice_frequency_value():
    assert tdse1d.lattice_frequency(2.4, 0.05, 0.01) == pytest.approx(5.7515053029101036, rel=1e-14)


def test_parse_config_errors_name_the_key():
    with pytest.raises(tdse1d.ConfigError, match="time.dt"):
        tdse1d.parse_config("[mode]\ntype = closed\n")
    with pytest.raises(ValueError):
        tdse1d.parse_config(SMALL.replace("dx = 0.05", "dx = -1"))


def test_closed_simulation_conserves_norm():
    sc = tdse1d.parse_config(SMALL)
    assert sc.mode == "closed"
    psi0 = sc.initial_field()
    assert tdse1d.total_norm(psi0, sc.dx) == pytest.approx(1.0, abs=1e-6)
    res = tdse1d.simulate(sc)
    assert res["failed_step"] is None
    assert res["step"] == 200
    assert tdse1d.total_norm(res["psi"], sc.dx) == pytest.approx(tdse1d.total_norm(psi0, sc.dx), abs=1e-10)
    (series,) = res["currents"]
    assert len(series["t"]) == 201


def test_run_writes_csv_and_manifest(tmp_path):
    sc = tdse1d.parse_config(SMALL)
    report = tdse1d.run(sc, tmp_path)
    assert report["exit_code"] == tdse1d.EXIT_OK
    with open(tmp_path / "snap_100.csv") as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0]) == ["t", "x", "re", "im", "density", "v_re", "v_im"]
    assert len(rows) == len(sc.x)
    with open(tmp_path / "current_x0.csv") as f:
        assert next(csv.reader(f)) == ["t", "j_probe"]
    manifest = json.loads((tmp_path / "run_manifest.json").read_text())
    assert manifest["status"] == "ok"


def test_numeric_failure_reports_step(tmp_path):
    text = SMALL.replace("[output]", "[potential]\ntype = square_barrier\nv0 = 1e308\na = -1\nb = 1\n[output]")
    report = tdse1d.run(tdse1d.parse_config(text), tmp_path)
    assert report["exit_code"] == tdse1d.EXIT_NUMERIC
    assert report["failed_step"] == 1


def test_sweep_writes_csv(tmp_path):
    sc = tdse1d.load_config(CONFIGS / "fig3_sweep.ini")
    sc.steps = 2000
    out = tmp_path / "sweep.csv"
    res = tdse1d.sweep(sc, [2.4, 1.0], csv=out)
    np.testing.assert_array_equal(res["k"], [1.0, 2.4])
    assert abs(res["T_num"][1] - 0.4191) <= 0.02
    with open(out) as f:
        header = next(csv.reader(f))
    assert header == ["k", "T_num", "R_num", "T_ana", "R_ana", "steady_time"]


def test_shipped_configs_load():
    names = sorted(p.name for p in CONFIGS.glob("*.ini"))
    assert "fig1_wavefront.ini" in names
    for name in names:
        tdse1d.load_config(CONFIGS / name).validate()
