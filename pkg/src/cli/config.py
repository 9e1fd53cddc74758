"""
Run Configuration

Pydantic models for config/system_config.json, config/tolerances.json and
config/sweep_config.json. Missing or broken default files fall back to the
built-in values with a warning; explicitly requested files must load.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parents[2]
CONFIG_DIR = PROJECT_ROOT / "config"

DEFAULT_SEED = 20240611


class Tolerances(BaseModel):
    """Residual tolerances of the verification commands and the suite."""

    kmat_identity: float = Field(default=1e-12, gt=0)
    roots_oracle: float = Field(default=1e-10, gt=0)
    residue_oracle: float = Field(default=1e-8, gt=0)
    commutator: float = Field(default=1e-12, gt=0)
    product: float = Field(default=1e-10, gt=0)
    eta_division: float = Field(default=1e-9, gt=0)
    structural: float = Field(default=1e-9, gt=0)
    factorization: float = Field(default=1e-12, gt=0)
    lemma_u: float = Field(default=1e-12, gt=0)
    iwasawa: float = Field(default=1e-8, gt=0)
    vacuum_omega: float = Field(default=1e-6, gt=0)
    mean_curvature: float = Field(default=1e-3, gt=0)
    sinh_gordon: float = Field(default=1e-2, gt=0)
    phi_sym: float = Field(default=1e-8, gt=0)
    row_sym: float = Field(default=1e-7, gt=0)
    family_sym: float = Field(default=1e-6, gt=0)
    boundary: float = Field(default=1e-4, gt=0)
    negative_control: float = Field(default=1e-2, gt=0)
    dressing: float = Field(default=1e-8, gt=0)
    z_independence: float = Field(default=1e-7, gt=0)
    k1pkf2: float = Field(default=1e-7, gt=0)
    dressed_sym: float = Field(default=1e-7, gt=0)
    commutant: float = Field(default=1e-6, gt=0)
    convergence_ratio: float = Field(default=0.5, gt=0)


class GridSettings(BaseModel):
    """Circle grid, Iwasawa truncation and domain grid."""

    circle_n: int = Field(default=128, ge=4)
    truncation: int = Field(default=32, ge=1)
    nx: int = Field(default=64, ge=3)
    ny: int = Field(default=64, ge=3)
    x_range: Tuple[float, float] = (-1.0, 1.0)
    y_range: Tuple[float, float] = (-1.0, 1.0)

    @field_validator("circle_n")
    @classmethod
    def _power_of_two(cls, v: int) -> int:
        if v & (v - 1) != 0:
            raise ValueError(f"circle_n must be a power of two, got {v}")
        return v

    @model_validator(mode="after")
    def _grid_covers_truncation(self) -> "GridSettings":
        if self.circle_n < 4 * self.truncation:
            raise ValueError(f"circle_n={self.circle_n} must be at least 4*truncation={4 * self.truncation}")
        return self


class SweepSettings(BaseModel):
    """Parameter lists of `sweep run`; the sweep is their Cartesian product."""

    mode: str = Field(default="generic", pattern="^(generic|offdiag)$")
    degrees: List[int] = Field(default_factory=lambda: list(range(1, 9)))
    A_values: List[str] = Field(default_factory=lambda: ["1/3", "-2/5"])
    B_values: List[str] = Field(default_factory=lambda: ["1/2", "3/7"])
    exact: bool = True
    parallel: int = Field(default=1, ge=1, le=64)

    @field_validator("degrees")
    @classmethod
    def _positive_degrees(cls, v: List[int]) -> List[int]:
        if any(d < 1 for d in v):
            raise ValueError("sweep degrees must be at least 1")
        return v


class OutputSettings(BaseModel):
    output_dir: str = "output"
    log_dir: str = "logs"
    db_path: str = "data/results.db"
    store: bool = True


class RunConfig(BaseModel):
    """Top-level configuration of every command."""

    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2 ** 64)
    profile: str = Field(default="standard", pattern="^(quick|standard)$")
    log_level: str = "INFO"
    H: float = 0.5
    sym_point: Tuple[float, float] = (1.0, 0.0)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    grid: GridSettings = Field(default_factory=GridSettings)
    sweep: SweepSettings = Field(default_factory=SweepSettings)
    output: OutputSettings = Field(default_factory=OutputSettings)

    @field_validator("H")
    @classmethod
    def _nonzero_h(cls, v: float) -> float:
        if v == 0:
            raise ValueError("mean curvature H must be nonzero")
        return v

    @property
    def lam0(self) -> complex:
        return complex(*self.sym_point)

    def to_file(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.model_dump(mode="json"), indent=2))
        return path

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        """Strict load: I/O, JSON and validation errors propagate."""
        return cls.model_validate(json.loads(Path(path).read_text()))


def _load_json(path: Path, fallback: Dict[str, Any]) -> Dict[str, Any]:
    """Read a JSON object with safe fallbacks."""
    try:
        with Path(path).open("r", encoding="utf-8") as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise ValueError("top level is not an object")
        return data
    except Exception as e:
        logger.warning(f"Could not load {path}: {e}. Using built-in defaults.")
        return fallback


def load_config(config_dir: Optional[Path] = None, tol_file: Optional[str] = None,
                config_file: Optional[str] = None) -> RunConfig:
    """Assemble the RunConfig from the config directory.

    Args:
        config_dir: directory holding system_config.json, tolerances.json and
            sweep_config.json (defaults to config/)
        tol_file: explicitly requested tolerance file; must load
        config_file: explicitly requested full RunConfig file; must load

    Raises:
        OSError, json.JSONDecodeError, pydantic.ValidationError: for explicit files
            and for invalid values in the default files
    """
    if config_file:
        config = RunConfig.from_file(config_file)
    else:
        config_dir = Path(config_dir or CONFIG_DIR)
        system = _load_json(config_dir / "system_config.json", {})
        data: Dict[str, Any] = {
            "seed": system.get("seed", DEFAULT_SEED),
            "profile": system.get("profile", "standard"),
            "log_level": system.get("logging", {}).get("level", "INFO"),
            "H": system.get("surface", {}).get("H", 0.5),
            "sym_point": system.get("surface", {}).get("sym_point", [1.0, 0.0]),
            "grid": system.get("grid", {}),
            "output": system.get("output", {}),
            "tolerances": _load_json(config_dir / "tolerances.json", {}),
            "sweep": _load_json(config_dir / "sweep_config.json", {}),
        }
        config = RunConfig.model_validate(data)
    if tol_file:
        tolerances = Tolerances.model_validate(json.loads(Path(tol_file).read_text()))
        config = config.model_copy(update={"tolerances": tolerances})
    return config


def spawn_seeds(seed: int, n: int) -> List[int]:
    """n child seeds derived from one 64-bit seed."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def spawn_rngs(seed: int, n: int) -> List[np.random.Generator]:
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(n)]
