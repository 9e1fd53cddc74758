"""
Surface Pipeline

potential file → frame field → immersion and metric → residuals → OBJ,
CSV and JSON report.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from src.frames import (
    DomainGrid,
    FrameField,
    ImmersionGrid,
    boundary_residual,
    conformality_residual,
    frame_field,
    ksym_report,
    mean_curvature_estimate,
    metric_extract,
    metric_from_immersion,
    sinh_gordon_residual,
    sym_bobenko,
    two_boundary_report,
)
from src.kmatrix import KMatrix
from src.loops import UnitCircleGrid
from src.potentials import Potential, ksym_residual, load_potential
from src.utils.errors import GridError
from .config import RunConfig
from .writers import write_obj, write_omega_csv, write_report

logger = logging.getLogger(__name__)


@dataclass
class SurfaceResult:
    """Residuals of one surface run and, after generation, the artifact paths."""

    residuals: Dict[str, float]
    checks: Dict[str, bool]
    paths: Dict[str, str] = field(default_factory=dict)
    immersion: Optional[ImmersionGrid] = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> Dict[str, Any]:
        return {"passed": self.passed, "residuals": self.residuals,
                "checks": self.checks, "artifacts": self.paths}


def domain_from_config(config: RunConfig) -> DomainGrid:
    g = config.grid
    return DomainGrid(tuple(g.x_range), tuple(g.y_range), g.nx, g.ny)


def surface_config(config: RunConfig, grid: Optional[Tuple[int, int]] = None,
                   domain: Optional[Sequence[float]] = None, sym_point: Optional[Sequence[float]] = None,
                   H: Optional[float] = None, modes: Optional[int] = None) -> RunConfig:
    """Copy of ``config`` with command-line surface settings applied and re-validated.

    ``modes`` sets the Iwasawa truncation; the circle grid is doubled until
    it holds at least 4·modes points.

    Raises:
        pydantic.ValidationError: the resulting settings are invalid
    """
    data = config.model_dump()
    g = data["grid"]
    if grid is not None:
        g["nx"], g["ny"] = grid
    if domain is not None:
        g["x_range"], g["y_range"] = (domain[0], domain[1]), (domain[2], domain[3])
    if modes is not None:
        g["truncation"] = modes
        while g["circle_n"] < 4 * modes:
            g["circle_n"] *= 2
    if sym_point is not None:
        data["sym_point"] = (sym_point[0], sym_point[1] if len(sym_point) > 1 else 0.0)
    if H is not None:
        data["H"] = H
    return RunConfig.model_validate(data)


def compute_frames(xi: Potential, config: RunConfig) -> FrameField:
    return frame_field(xi, domain_from_config(config), UnitCircleGrid(config.grid.circle_n),
                       config.grid.truncation)


def _two_boundary_checks(xi: Potential, K: KMatrix, K1: KMatrix, y1: float, frames: FrameField,
                         config: RunConfig, residuals: Dict[str, float], checks: Dict[str, bool]):
    tol = config.tolerances
    report = two_boundary_report(xi, K, K1, y1, frames, tol=tol.dressed_sym)
    residuals.update({k: v for k, v in report.items() if k != "equivalent"})
    checks["dressing"] = max(report["det_C"], report["unitarity_C"]) <= tol.dressing
    checks["z_independence"] = report["z_independence"] <= tol.z_independence
    checks["dressed_sym"] = max(report[k] for k in ("dressed_potential_sym", "second_zeta_sym",
                                                    "dressed_frame_sym", "dressed_phi_sym",
                                                    "dressed_b_sym")) <= tol.dressed_sym


def surface_residuals(xi: Potential, K: Optional[KMatrix], frames: FrameField, config: RunConfig,
                      second: Optional[Tuple[KMatrix, float]] = None) -> SurfaceResult:
    """Residuals of the frame field, its immersion and its metric.

    The boundary and K-symmetry entries are only present when K is known
    and the grid has a y = 0 row. A potential that is not K-symmetric for
    the given K fails the ``ksym`` check. ``second`` = (K₁, y₁) adds the
    two-boundary diagnostics at y = y₁.

    Raises:
        ValueError: ``second`` is given without K
    """
    if second is not None and K is None:
        raise ValueError("two-boundary checks need K₀: the file stores none and --A/--B were not given")
    tol = config.tolerances
    immersion = sym_bobenko(frames, config.lam0, config.H)
    omega = metric_extract(frames, xi)
    immersion.omega = omega
    residuals: Dict[str, float] = {
        "iwasawa_unitarity": frames.max_residual("unitarity"),
        "iwasawa_analyticity": frames.max_residual("analyticity"),
        "iwasawa_reconstruction": frames.max_residual("reconstruction"),
        "immersion_reality": immersion.reality_residual(),
        "conformality": conformality_residual(immersion),
        "sinh_gordon": sinh_gordon_residual(omega, frames.domain.h_x, frames.domain.h_y),
        "metric_oracle": float(np.abs(metric_from_immersion(immersion)[:, 1:-1] - omega[:, 1:-1]).max()),
        "mean_curvature": float(np.abs(np.abs(mean_curvature_estimate(immersion)) - abs(config.H)).max()),
    }
    checks = {
        "iwasawa": max(residuals[k] for k in residuals if k.startswith("iwasawa")) <= tol.iwasawa,
        "immersion_reality": residuals["immersion_reality"] <= tol.iwasawa,
        "sinh_gordon": residuals["sinh_gordon"] <= tol.sinh_gordon,
    }
    if K is not None:
        residuals["ksym"] = ksym_residual(xi, K)
        checks["ksym"] = residuals["ksym"] <= tol.structural
        try:
            residuals["boundary_y0"] = boundary_residual(omega, K, frames)
            checks["boundary_y0"] = residuals["boundary_y0"] <= tol.boundary
            if checks["ksym"]:
                report = ksym_report(frames, xi, K)
                residuals.update(report)
                checks["phi_sym"] = report["phi_sym"] <= tol.phi_sym
                checks["row_sym"] = max(report["frame_sym"], report["b_sym"], report["zeta_sym"]) <= tol.row_sym
                checks["family_sym"] = report["family_sym"] <= tol.family_sym
            else:
                logger.error(f"Potential is not K-symmetric for A={K.A}, B={K.B}: "
                             f"residual {residuals['ksym']:.2e} > {tol.structural:.0e}")
        except GridError as e:
            logger.warning(f"Boundary checks skipped: {e}")
    if second is not None:
        _two_boundary_checks(xi, K, second[0], second[1], frames, config, residuals, checks)
    return SurfaceResult(residuals, checks, immersion=immersion)


def load_input(path, A: Optional[float] = None, B: Optional[float] = None):
    """Potential and K-matrix; command-line constants override the stored ones."""
    xi, K = load_potential(path)
    if A is not None and B is not None:
        K = KMatrix(A, B)
    return xi, K


def run_pipeline(config: RunConfig, potential_path, out_dir: Optional[str] = None,
                 A: Optional[float] = None, B: Optional[float] = None,
                 obj_path: Optional[str] = None, report_path: Optional[str] = None,
                 omega_path: Optional[str] = None) -> SurfaceResult:
    """Generate the immersion of a stored potential and write its artifacts.

    Artifacts go to ``out_dir`` as <stem>.obj, <stem>_omega.csv and
    <stem>_report.json unless an explicit path is given for one of them.
    They are written even when checks fail. Input errors are raised before
    anything is written.

    Raises:
        FileNotFoundError, ValueError: unreadable or invalid potential file
    """
    xi, K = load_input(potential_path, A, B)
    frames = compute_frames(xi, config)
    result = surface_residuals(xi, K, frames, config)
    immersion = result.immersion

    out = Path(out_dir or config.output.output_dir)
    stem = Path(potential_path).stem
    result.paths = {
        "obj": str(write_obj(obj_path or out / f"{stem}.obj", immersion.coords)),
        "omega_csv": str(write_omega_csv(omega_path or out / f"{stem}_omega.csv", immersion.omega,
                                         frames.domain.xs, frames.domain.ys)),
    }
    report = {
        "potential": str(potential_path),
        "K": None if K is None else {"A": K.A, "B": K.B},
        "grid": config.grid.model_dump(),
        "H": config.H,
        "sym_point": list(config.sym_point),
        "tolerances": config.tolerances.model_dump(),
        **result.to_json(),
    }
    result.paths["report"] = str(write_report(report_path or out / f"{stem}_report.json", report))
    logger.info(f"✓ Pipeline finished for {stem}: {'PASS' if result.passed else 'FAIL'}")
    return result
