"""
K-Symmetry Residuals of the Frame Pipeline

For a K-symmetric potential the K-matrix intertwines λ and λ⁻¹ at every
stage: the holomorphic frame for all z, and F, B, ζ = F⁻¹ξF along y = 0.
On the circle grid star(X)(λ_j) = conj(X(λ_j⁻¹))^t.
"""

import logging
from typing import Dict

import numpy as np

from src.kmatrix import KMatrix, k_eval
from src.loops import LoopSample, UnitCircleGrid, loop_derivative_sample
from src.potentials import Potential, ksym_residual
from src.utils.errors import ConstraintError
from .field import FrameField
from .iwasawa import holomorphic_frame

logger = logging.getLogger(__name__)

KSYM_PRECONDITION_TOL = 1e-9


def k_circle(K: KMatrix, grid: UnitCircleGrid) -> np.ndarray:
    return k_eval(K, grid.points)


def k_derivative(K: KMatrix, lam) -> np.ndarray:
    """∂_λK(λ)."""
    lam = np.asarray(lam, dtype=complex)
    s = 1.0 + lam ** -2
    out = np.empty(lam.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = -4 * K.B
    out[..., 0, 1] = s
    out[..., 1, 0] = s
    out[..., 1, 1] = 4 * K.B * lam ** -2
    return out


def _norm(values: np.ndarray) -> float:
    return float(np.linalg.norm(values, axis=(-2, -1)).max()) if values.size else 0.0


def phi_symmetry(xi: Potential, K: KMatrix, z: complex, grid: UnitCircleGrid) -> float:
    """‖KΦ(z) − star(Φ(z̄))⁻¹K‖ on the circle grid."""
    k = k_circle(K, grid)
    phi = holomorphic_frame(xi, z, grid)
    phi_bar = holomorphic_frame(xi, np.conj(z), grid)
    return _norm(k @ phi.values - phi_bar.star().inverse().values @ k)


def frame_symmetry(F: LoopSample, K: KMatrix) -> float:
    """‖K F_λ − F_{λ⁻¹} K‖."""
    k = k_circle(K, F.grid)
    return _norm(k @ F.values - F.invert().values @ k)


def positive_symmetry(B: LoopSample, K: KMatrix) -> float:
    """‖K B_λ − star(B)⁻¹ K‖."""
    k = k_circle(K, B.grid)
    return _norm(k @ B.values - B.star().inverse().values @ k)


def killing_field(F: LoopSample, xi: Potential) -> LoopSample:
    """ζ = F⁻¹ξF."""
    x = xi.evaluate(F.grid.points)
    return LoopSample(F.grid, np.linalg.inv(F.values) @ x @ F.values)


def zeta_symmetry(zeta: LoopSample, K: KMatrix) -> float:
    """‖Kζ + star(ζ)K‖."""
    k = k_circle(K, zeta.grid)
    return _norm(k @ zeta.values + zeta.star().values @ k)


def family_symmetry(F: LoopSample, K: KMatrix) -> float:
    """λ-derivative of K F_λ = F_{λ⁻¹}K.

    ‖K'F + K∂_λF − ∂_λ(F_{λ⁻¹})K − F_{λ⁻¹}K'‖ with spectral derivatives.
    """
    lam = F.grid.points
    k, dk = k_eval(K, lam), k_derivative(K, lam)
    F_inv_arg = F.invert()
    dF = loop_derivative_sample(F).values
    dF_inv_arg = loop_derivative_sample(F_inv_arg).values
    lhs = dk @ F.values + k @ dF
    rhs = dF_inv_arg @ k + F_inv_arg.values @ dk
    return _norm(lhs - rhs)


def isospectral_residual(frames: FrameField) -> float:
    """max |det ζ − det ξ| over the domain and circle grid."""
    det_xi = np.linalg.det(frames.xi.evaluate(frames.grid.points))
    worst = 0.0
    ny, nx = frames.F.shape[:2]
    for iy in range(ny):
        for ix in range(nx):
            zeta = killing_field(frames.frame(iy, ix), frames.xi)
            worst = max(worst, float(np.abs(zeta.det() - det_xi).max()))
    return worst


def loop_reality_residual(frames: FrameField) -> float:
    """max ‖star(F)·F_{λ⁻¹} − 𝟙‖, i.e. conj(F_{1/λ̄})^t = F_λ⁻¹ read at λ⁻¹ on the grid."""
    worst = 0.0
    ny, nx = frames.F.shape[:2]
    for iy in range(ny):
        for ix in range(nx):
            F = frames.frame(iy, ix)
            worst = max(worst, float(np.abs(F.star().values @ F.invert().values - np.eye(2)).max()))
    return worst


def row_report(frames: FrameField, K: KMatrix, row: int) -> Dict[str, float]:
    """frame_sym, b_sym, zeta_sym and family_sym maximized over one grid row."""
    out = {"frame_sym": 0.0, "b_sym": 0.0, "zeta_sym": 0.0, "family_sym": 0.0}
    for ix in range(frames.F.shape[1]):
        F = frames.frame(row, ix)
        out["frame_sym"] = max(out["frame_sym"], frame_symmetry(F, K))
        out["b_sym"] = max(out["b_sym"], positive_symmetry(frames.positive(row, ix), K))
        out["zeta_sym"] = max(out["zeta_sym"], zeta_symmetry(killing_field(F, frames.xi), K))
        out["family_sym"] = max(out["family_sym"], family_symmetry(F, K))
    return out


def ksym_report(frames: FrameField, xi: Potential, K: KMatrix) -> Dict[str, float]:
    """Named K-symmetry residuals of a frame field.

    phi_sym is maximized over the whole domain, the others over the y = 0 row.

    Raises:
        ConstraintError: xi is not K-symmetric
        GridError: no y = 0 row
    """
    if ksym_residual(xi, K) > KSYM_PRECONDITION_TOL:
        raise ConstraintError("input not K-symmetric")
    row = frames.domain.row_index(0.0, exact=True)
    report = row_report(frames, K, row)
    phi_sym = 0.0
    for z in frames.domain.points.ravel():
        phi_sym = max(phi_sym, phi_symmetry(xi, K, z, frames.grid))
    report["phi_sym"] = phi_sym
    logger.info("✓ K-symmetry report: " + ", ".join(f"{k}={v:.2e}" for k, v in report.items()))
    return report
