"""Surface pipeline and two-boundary analysis on a small vacuum run."""

import json

import pandas as pd
import pytest

from src.cli import EXIT_FAIL, EXIT_PASS, GridSettings, RunConfig, main, run_pipeline, surface_config
from src.kmatrix import KMatrix
from src.potentials import save_potential, vacuum_potential

SMALL_GRID = GridSettings(circle_n=64, truncation=16, nx=5, ny=5,
                          x_range=(-0.5, 0.5), y_range=(-0.5, 0.5))


@pytest.fixture
def small_config(tmp_path):
    config = RunConfig(grid=SMALL_GRID, output={"output_dir": str(tmp_path / "out"), "store": False})
    return config, config.to_file(tmp_path / "run.json")


@pytest.fixture
def vacuum_file(tmp_path):
    return save_potential(tmp_path / "vacuum.json", vacuum_potential(), KMatrix(0.25, -0.25))


def test_pipeline_writes_artifacts(small_config, vacuum_file, tmp_path):
    config, _ = small_config
    result = run_pipeline(config, vacuum_file, str(tmp_path / "artifacts"))
    assert result.passed, result.checks
    assert {"boundary_y0", "phi_sym", "row_sym", "family_sym"} <= set(result.checks)
    mesh = (tmp_path / "artifacts" / "vacuum.obj").read_text()
    assert mesh.count("\nv ") == 25
    omega = pd.read_csv(result.paths["omega_csv"])
    assert omega["omega"].abs().max() < 1e-6
    report = json.loads((tmp_path / "artifacts" / "vacuum_report.json").read_text())
    assert report["passed"] and report["K"] == {"A": 0.25, "B": -0.25}


def test_surface_verify_command(small_config, vacuum_file):
    _, config_path = small_config
    argv = ["surface", "verify", str(vacuum_file), "--config", str(config_path)]
    assert main(argv, configure_logging=False) == EXIT_PASS


def test_twoboundary_command(small_config, vacuum_file, tmp_path):
    _, config_path = small_config
    out = tmp_path / "two.json"
    argv = ["twoboundary", "analyze", str(vacuum_file), "--A0", "0.25", "--B0", "-0.25",
            "--A1", "-0.25", "--B1", "0.25", "--y1", "0", "--config", str(config_path), "--json", str(out)]
    assert main(argv, configure_logging=False) == EXIT_PASS
    data = json.loads(out.read_text())
    assert data["commutant"]["complementary_det"] < 1e-8
    assert data["report"]["equivalent"] == 1.0


def test_sinh_gordon_is_a_check(small_config, vacuum_file, tmp_path, monkeypatch):
    config, _ = small_config
    assert run_pipeline(config, vacuum_file, str(tmp_path / "ok")).checks["sinh_gordon"]
    monkeypatch.setattr("src.cli.pipeline.sinh_gordon_residual", lambda omega, h_x, h_y: 1.0)
    result = run_pipeline(config, vacuum_file, str(tmp_path / "bad"))
    assert not result.checks["sinh_gordon"]
    assert not result.passed


def test_wrong_constants_fail_the_symmetry_check(small_config, vacuum_file, tmp_path):
    config, config_path = small_config
    result = run_pipeline(config, vacuum_file, str(tmp_path / "artifacts"), A=0.5, B=0.5)
    assert result.residuals["ksym"] > config.tolerances.structural
    assert result.checks["ksym"] is False
    assert "phi_sym" not in result.checks
    assert not result.passed
    argv = ["surface", "verify", str(vacuum_file), "--A", "0.5", "--B", "0.5", "--config", str(config_path)]
    assert main(argv, configure_logging=False) == EXIT_FAIL


def test_surface_config_overrides():
    config = surface_config(RunConfig(), grid=(9, 7), domain=(-2, 2, 0, 1), sym_point=(0.0, 1.0),
                            H=1.0, modes=64)
    assert (config.grid.nx, config.grid.ny) == (9, 7)
    assert config.grid.y_range == (0.0, 1.0)
    assert config.grid.circle_n == 256
    assert config.lam0 == 1j and config.H == 1.0
