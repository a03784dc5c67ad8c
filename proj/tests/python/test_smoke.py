import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

import stochrd

CONFIG_DIR = Path(os.environ.get("STOCHRD_TEST_CONFIG_DIR", Path(__file__).resolve().parents[2] / "configs"))


@pytest.fixture
def grid():
    return stochrd.Grid(8.0, 257)


def gaussian(grid, amplitude=1.0):
    x = np.asarray(grid.x)
    u = amplitude * np.exp(-x * x)
    u[0] = u[-1] = 0.0
    return u


def test_version():
    assert stochrd.__version__ == "0.1.0"


def test_grid(grid):
    assert grid.points == 257
    assert len(grid.x) == 257
    assert grid.spacing == pytest.approx(16.0 / 256)


def test_path_and_z():
    w = stochrd.WienerPath.sample(3, 5.0, 1e-3)
    assert w(0.0) == 0.0
    assert w.t_min == pytest.approx(-5.0)
    assert stochrd.z_value(w, 0.5, 1.0) == pytest.approx(math.exp(-0.5 * w(1.0)))
    # shift group law on grid points
    assert w.shifted(1.0)(0.5) == pytest.approx(w(1.5) - w(1.0), abs=1e-15)


def test_alpha_zero_matches_deterministic(grid):
    spec = stochrd.ModelSpec.canonical_periodic()
    u0 = gaussian(grid, 2.0)
    a = stochrd.solve(grid, u0, 0.0, 1.0, stochrd.WienerPath.sample(1, 2.0), spec)
    b = stochrd.solve(grid, u0, 0.0, 1.0, stochrd.WienerPath.sample(2, 2.0), spec, method="direct")
    assert np.array_equal(a, b)


def test_phi_identity_and_decay(grid):
    spec = stochrd.ModelSpec.canonical_cubic()
    w = stochrd.WienerPath.sample(4, 3.0)
    u0 = gaussian(grid, 1.5)
    assert np.array_equal(stochrd.phi(grid, 0.0, 0.0, w, 0.5, u0, spec), u0)
    u = stochrd.phi(grid, 2.0, 0.0, w, 0.0, u0, spec)
    assert stochrd.l2_norm(grid, u) <= math.exp(-2.0) * stochrd.l2_norm(grid, u0)


def test_hausdorff(grid):
    a = [gaussian(grid, 1.0)]
    b = [gaussian(grid, 1.0), gaussian(grid, 2.0)]
    assert stochrd.hausdorff_semidist(grid, a, b) == 0.0
    assert stochrd.hausdorff_semidist(grid, b, a) == pytest.approx(stochrd.l2_norm(grid, gaussian(grid, 1.0)))


def test_absorbing_radius(grid):
    w = stochrd.WienerPath.sample(5, 40.0)
    spec = stochrd.ModelSpec.canonical_cubic()
    assert stochrd.absorbing_radius(0.0, w, 0.0, spec, grid, c_abs=1.0) == pytest.approx(1.0, rel=1e-4)


def test_dissipativity_report():
    report = stochrd.validate_dissipativity(stochrd.ModelSpec.canonical_cubic())
    assert report["pass"] is True
    assert len(report["checks"]) == 5


def test_errors(grid):
    spec = stochrd.ModelSpec.canonical_cubic()
    short = stochrd.WienerPath.sample(1, 1.0)
    with pytest.raises(stochrd.WindowExceeded):
        stochrd.solve(grid, gaussian(grid), 0.0, 2.0, short, spec)
    with pytest.raises(ValueError):
        stochrd.solve(grid, np.zeros(10), 0.0, 0.5, short, spec)
    bad = stochrd.ModelSpec.canonical_cubic()
    bad.lam = -1.0
    with pytest.raises(stochrd.InvalidArgument):
        bad.validate()


def test_execute_check_model(tmp_path):
    status, _ = stochrd.execute("check-model", str(CONFIG_DIR / "canonical_periodic.ini"), str(tmp_path))
    assert status == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "check-model"
    assert (tmp_path / "report.json").exists()
