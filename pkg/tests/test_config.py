"""Run configuration: defaults, validation and file fallbacks."""

import json

import pytest
from pydantic import ValidationError

from src.cli.config import (
    DEFAULT_SEED,
    GridSettings,
    RunConfig,
    SweepSettings,
    Tolerances,
    load_config,
    spawn_rngs,
    spawn_seeds,
)


def test_defaults():
    config = RunConfig()
    assert config.seed == DEFAULT_SEED
    assert config.tolerances.structural == 1e-9
    assert config.lam0 == 1 + 0j
    assert config.grid.circle_n >= 4 * config.grid.truncation


def test_shipped_config_matches_defaults():
    config = load_config()
    assert config.tolerances == Tolerances()
    assert config.seed == DEFAULT_SEED
    assert config.sweep.degrees == list(range(1, 9))


@pytest.mark.parametrize("field", ["structural", "iwasawa", "convergence_ratio"])
def test_tolerances_must_be_positive(field):
    with pytest.raises(ValidationError):
        Tolerances(**{field: 0})


@pytest.mark.parametrize("kwargs", [
    {"circle_n": 64, "truncation": 32},
    {"circle_n": 100, "truncation": 8},
    {"nx": 2},
])
def test_grid_validation(kwargs):
    with pytest.raises(ValidationError):
        GridSettings(**kwargs)


def test_run_config_validation():
    with pytest.raises(ValidationError):
        RunConfig(H=0.0)
    with pytest.raises(ValidationError):
        RunConfig(profile="huge")
    with pytest.raises(ValidationError):
        SweepSettings(mode="diagonal")
    with pytest.raises(ValidationError):
        SweepSettings(degrees=[0, 1])


def test_file_round_trip(tmp_path):
    config = RunConfig(seed=7, H=-0.25, profile="quick")
    path = config.to_file(tmp_path / "cfg" / "run.json")
    assert RunConfig.from_file(path) == config
    assert load_config(config_file=str(path)) == config


def test_missing_directory_falls_back(tmp_path):
    config = load_config(tmp_path)
    assert config == RunConfig()


def test_broken_default_file_falls_back(tmp_path):
    (tmp_path / "system_config.json").write_text("{not json")
    (tmp_path / "tolerances.json").write_text(json.dumps([1, 2]))
    config = load_config(tmp_path)
    assert config.seed == DEFAULT_SEED
    assert config.tolerances == Tolerances()


def test_invalid_default_value_raises(tmp_path):
    (tmp_path / "tolerances.json").write_text(json.dumps({"boundary": -1}))
    with pytest.raises(ValidationError):
        load_config(tmp_path)


def test_explicit_tolerance_file(tmp_path):
    tol = tmp_path / "tol.json"
    tol.write_text(json.dumps({"boundary": 1e-3}))
    assert load_config(tmp_path, tol_file=str(tol)).tolerances.boundary == 1e-3
    tol.write_text("{")
    with pytest.raises(ValueError):
        load_config(tmp_path, tol_file=str(tol))


def test_spawned_seeds():
    assert spawn_seeds(5, 4) == spawn_seeds(5, 4)
    assert len(set(spawn_seeds(5, 4))) == 4
    assert spawn_seeds(5, 4) != spawn_seeds(6, 4)
    a, b = spawn_rngs(5, 2)
    assert a.integers(2 ** 32) != b.integers(2 ** 32)
