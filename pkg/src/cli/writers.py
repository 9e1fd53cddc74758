"""
Artifact Writers

OBJ meshes of immersions, CSV tables of the metric and JSON reports.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


def write_obj(path, coords: np.ndarray) -> Path:
    """Quad mesh of an (ny, nx, 3) vertex grid; faces index rows then columns."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ny, nx = coords.shape[:2]
    lines = ["# cmc-boundary immersion", f"# grid {ny} x {nx}"]
    for x, y, z in coords.reshape(-1, 3):
        lines.append(f"v {x:.12g} {y:.12g} {z:.12g}")
    for iy in range(ny - 1):
        for ix in range(nx - 1):
            a = iy * nx + ix + 1
            lines.append(f"f {a} {a + 1} {a + nx + 1} {a + nx}")
    path.write_text("\n".join(lines) + "\n")
    logger.info(f"✓ OBJ mesh ({ny * nx} vertices) written to {path}")
    return path


def write_omega_csv(path, omega: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> Path:
    """Long-format table x, y, omega."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    X, Y = np.meshgrid(xs, ys)
    df = pd.DataFrame({"x": X.ravel(), "y": Y.ravel(), "omega": omega.ravel()})
    df.to_csv(path, index=False, float_format="%.12g")
    logger.info(f"✓ Metric table written to {path}")
    return path


def _finite(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        value = value.item()
    if isinstance(value, complex):
        return [_finite(value.real), _finite(value.imag)]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def to_jsonable(data: Dict[str, Any]) -> Dict[str, Any]:
    """Plain JSON types; non-finite floats become null."""
    return _finite(data)


def write_report(path, report: Dict[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(to_jsonable(report), indent=2, sort_keys=False))
    logger.info(f"✓ Report written to {path}")
    return path
