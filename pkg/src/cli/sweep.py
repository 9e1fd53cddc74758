"""
Parameter Sweeps

Cartesian sweeps over degree and boundary constants, tabulated with pandas.
Row failures are logged and recorded in the row's ``error`` column.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import product
from typing import Any, Dict, List, Tuple

import numpy as np
import pandas as pd

from src.kmatrix import KMatrix
from src.potentials import (
    expected_dimension,
    expected_freedom_split,
    freedom_split,
    ksym_constraints,
    ksym_nullspace,
    offdiag_factorize,
    offdiag_sample,
    sample_from_nullspace,
)
from src.spectral import nu_symmetry_residual, spectral_curve
from src.utils.errors import CMCError
from .config import SweepSettings, spawn_seeds

logger = logging.getLogger(__name__)

GENERIC_COLUMNS = ["d", "A", "B", "dimension", "expected", "dimension_ok", "re_free", "im_free",
                   "split_ok", "genus", "nu_symmetry", "error"]
OFFDIAG_COLUMNS = ["d", "A", "B", "genus", "genus_ok", "factorization_residual", "error"]

Task = Tuple[int, str, str, int]


def _generic_row(task: Task, exact: bool) -> Dict[str, Any]:
    d, a, b, seed = task
    K = KMatrix.from_rational(a, b)
    system = ksym_constraints(d, K, exact=exact)
    ns = ksym_nullspace(system)
    split = freedom_split(system, ns)
    xi = sample_from_nullspace(system, ns, np.random.default_rng(seed))
    curve = spectral_curve(xi, exact=False)
    return {
        "dimension": ns.dimension,
        "expected": expected_dimension(d),
        "dimension_ok": ns.dimension == expected_dimension(d),
        "re_free": split[0],
        "im_free": split[1],
        "split_ok": split == expected_freedom_split(d),
        "genus": curve.genus,
        "nu_symmetry": nu_symmetry_residual(curve, d),
    }


def _offdiag_row(task: Task, exact: bool) -> Dict[str, Any]:
    d, a, b, seed = task
    K = KMatrix.from_rational(a, b)
    xi = offdiag_sample(d, K, seed)
    g = spectral_curve(xi).genus
    return {
        "genus": g,
        "genus_ok": g == 1,
        "factorization_residual": offdiag_factorize(xi, K).residual,
    }


def _run_row(task: Task, mode: str, exact: bool) -> Dict[str, Any]:
    d, a, b, _ = task
    row: Dict[str, Any] = {"d": d, "A": float(Fraction(a)), "B": float(Fraction(b)), "error": ""}
    try:
        row.update(_offdiag_row(task, exact) if mode == "offdiag" else _generic_row(task, exact))
    except (CMCError, ValueError, ZeroDivisionError) as e:
        logger.warning(f"Sweep row d={d}, A={a}, B={b} failed: {e}")
        row["error"] = f"{type(e).__name__}: {e}"
    return row


def run_sweep(settings: SweepSettings, seed: int) -> pd.DataFrame:
    """One row per (d, A, B); an empty parameter list gives an empty table."""
    columns = OFFDIAG_COLUMNS if settings.mode == "offdiag" else GENERIC_COLUMNS
    combos = list(product(settings.degrees, settings.A_values, settings.B_values))
    if not combos:
        logger.info("Empty sweep")
        return pd.DataFrame(columns=columns)
    seeds = spawn_seeds(seed, len(combos))
    tasks = [(d, a, b, s) for (d, a, b), s in zip(combos, seeds)]
    logger.info(f"Sweep ({settings.mode}) over {len(tasks)} parameter tuples")
    if settings.parallel > 1:
        with ThreadPoolExecutor(max_workers=settings.parallel) as pool:
            rows = list(pool.map(lambda t: _run_row(t, settings.mode, settings.exact), tasks))
    else:
        rows = [_run_row(t, settings.mode, settings.exact) for t in tasks]
    table = pd.DataFrame(rows).reindex(columns=columns)
    n_err = int((table["error"] != "").sum())
    logger.info(f"✓ Sweep finished: {len(table)} rows, {n_err} with errors")
    return table


def sweep_passed(table: pd.DataFrame) -> bool:
    """Every row error-free and matching the expected dimension or genus."""
    if table.empty:
        return True
    if (table["error"] != "").any():
        return False
    key = "genus_ok" if "genus_ok" in table.columns else "dimension_ok"
    return bool(table[key].astype(bool).all())


def sweep_records(table: pd.DataFrame) -> List[Dict[str, Any]]:
    return table.astype(object).where(table.notna(), None).to_dict(orient="records")
