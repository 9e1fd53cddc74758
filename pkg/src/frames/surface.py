"""
Sym–Bobenko Immersions and the Metric

f_λ = −2iλH⁻¹(∂_λF_λ)F_λ⁻¹ evaluated at a point λ₀ of the unit circle.
The su(2)-valued immersion is read in ℝ³ through the basis

    e₁ = (0, i; i, 0),  e₂ = (0, −1; 1, 0),  e₃ = (i, 0; 0, −i),

orthonormal for ⟨X, Y⟩ = −½ tr(XY), so x_k = −½ tr(f·e_k). With this
normalization the vacuum immersion is a round cylinder of radius 1/(2H).

The conformal factor comes from the λ⁻¹ coefficient of the gauge relation
between ξ and F: e^ω = c·ρ_B²·Im β₋₁, with ρ_B the (1,1) entry of B(0) and
c calibrated on the vacuum.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from src.kmatrix import KMatrix
from src.loops import LoopSample, UnitCircleGrid, loop_derivative, loop_evaluate
from src.potentials import Potential, vacuum_potential
from src.utils.errors import CalibrationError, DomainError, FactorizationError
from .field import DomainGrid, FrameField, frame_field
from .iwasawa import holomorphic_frame, iwasawa_factor

logger = logging.getLogger(__name__)

EXPECTED_CALIBRATION = 4.0
CALIBRATION_TOL = 1e-6

SU2_BASIS = np.array([
    [[0, 1j], [1j, 0]],
    [[0, -1], [1, 0]],
    [[1j, 0], [0, -1j]],
], dtype=complex)


@dataclass
class ImmersionGrid:
    """Immersion samples over the domain grid.

    ``f`` has shape (ny, nx, 2, 2), ``coords`` (ny, nx, 3).
    """

    f: np.ndarray = field(repr=False)
    coords: np.ndarray = field(repr=False)
    H: float
    sym_point: complex
    h_x: float
    h_y: float
    omega: Optional[np.ndarray] = field(default=None, repr=False)

    def reality_residual(self) -> float:
        """max ‖f + f*‖ + |tr f| over the grid (zero for |λ₀| = 1)."""
        herm = np.abs(self.f + np.conj(np.swapaxes(self.f, -1, -2))).max()
        trace = np.abs(np.trace(self.f, axis1=-2, axis2=-1)).max()
        return float(herm + trace)


def su2_coordinates(f: np.ndarray) -> np.ndarray:
    """ℝ³ coordinates x_k = −½ tr(f·e_k), real part."""
    return np.real(-0.5 * np.einsum("...ij,kji->...k", f, SU2_BASIS))


def sym_bobenko_point(F: LoopSample, lam0: complex, H: float) -> np.ndarray:
    """f at one domain point, with ∂_λF by spectral differentiation."""
    dF = loop_derivative(F, lam0)
    F0 = loop_evaluate(F, lam0)
    return -2j * lam0 / H * dF @ np.linalg.inv(F0)


def sym_bobenko(frames: FrameField, lam0: complex = 1.0, H: float = 0.5) -> ImmersionGrid:
    """Immersion of the associated-family member at λ₀.

    Raises:
        DomainError: H = 0 or |λ₀| ≠ 1
    """
    if H == 0:
        raise DomainError("mean curvature H must be nonzero")
    lam0 = complex(lam0)
    if abs(abs(lam0) - 1.0) > 1e-12:
        raise DomainError(f"sym point must lie on the unit circle, got |λ₀|={abs(lam0)}")
    ny, nx = frames.F.shape[:2]
    f = np.empty((ny, nx, 2, 2), dtype=complex)
    for iy in range(ny):
        for ix in range(nx):
            f[iy, ix] = sym_bobenko_point(frames.frame(iy, ix), lam0, H)
    immersion = ImmersionGrid(f, su2_coordinates(f), H, lam0,
                              frames.domain.h_x, frames.domain.h_y)
    logger.debug(f"Sym-Bobenko immersion at λ₀={lam0}, H={H}")
    return immersion


def check_vacuum_calibration(c: float, n: int = 64, N: int = 16, tol: float = CALIBRATION_TOL) -> float:
    """max |ω| of the vacuum on a 3x3 patch around z = 0 under the constant c.

    Raises:
        CalibrationError: the vacuum is not flat within tol
    """
    vac = vacuum_potential()
    patch = frame_field(vac, DomainGrid((-0.25, 0.25), (-0.25, 0.25), 3, 3), UnitCircleGrid(n), N)
    deviation = float(np.abs(np.log(c * patch.rho ** 2 * vac.beta[0].imag)).max())
    if deviation > tol:
        raise CalibrationError(f"vacuum ω deviates by {deviation:.2e} > {tol:.0e} with c={c:.10g}")
    return deviation


@lru_cache(maxsize=8)
def metric_calibration(n: int = 64, N: int = 16) -> float:
    """c with c·ρ_B(0)²·Im β₋₁ = 1 for the vacuum at z = 0, checked on a patch.

    Raises:
        CalibrationError: the vacuum is not flat around z = 0
    """
    vac = vacuum_potential()
    factors = iwasawa_factor(holomorphic_frame(vac, 0.0, UnitCircleGrid(n)), N)
    c = 1.0 / (factors.rho ** 2 * vac.beta[0].imag)
    deviation = check_vacuum_calibration(c, n, N)
    logger.info(f"Metric calibration c={c:.10g} (expected {EXPECTED_CALIBRATION:g}; the U_λ-entry "
                f"convention doubles it to {2 * EXPECTED_CALIBRATION:g}), vacuum |ω| ≤ {deviation:.1e}")
    return c


def metric_extract(frames: FrameField, xi: Optional[Potential] = None) -> np.ndarray:
    """ω = log(c·ρ_B²·Im β₋₁) over the domain grid.

    Raises:
        FactorizationError: ρ_B ≤ 0 somewhere
    """
    xi = xi or frames.xi
    rho = frames.rho
    if np.any(rho <= 0):
        raise FactorizationError("factorization normalization violated")
    c = metric_calibration()
    return np.log(c * rho ** 2 * xi.beta[0].imag)


def metric_from_immersion(immersion: ImmersionGrid) -> np.ndarray:
    """½·log|f_x|² − ½·log(1/(4H²)), the vacuum-calibrated metric of the mesh.

    Central differences in x; the first and last columns are one-sided.
    """
    fx = np.gradient(immersion.coords, immersion.h_x, axis=1)
    speed2 = np.sum(fx ** 2, axis=-1)
    return 0.5 * np.log(speed2) - 0.5 * np.log(1.0 / (4.0 * immersion.H ** 2))


def sinh_gordon_residual(omega: np.ndarray, h_x: float, h_y: float) -> float:
    """max |Δ_h ω + sinh ω| over interior points (5-point Laplacian)."""
    if omega.shape[0] < 3 or omega.shape[1] < 3:
        return 0.0
    lap = ((omega[1:-1, 2:] - 2 * omega[1:-1, 1:-1] + omega[1:-1, :-2]) / h_x ** 2
           + (omega[2:, 1:-1] - 2 * omega[1:-1, 1:-1] + omega[:-2, 1:-1]) / h_y ** 2)
    return float(np.abs(lap + np.sinh(omega[1:-1, 1:-1])).max())


def boundary_derivative(omega: np.ndarray, row: int, h_y: float) -> np.ndarray:
    """∂_yω on a grid row: central inside, second-order one-sided at the edges."""
    ny = omega.shape[0]
    if 0 < row < ny - 1:
        return (omega[row + 1] - omega[row - 1]) / (2 * h_y)
    if row == 0:
        return (-3 * omega[0] + 4 * omega[1] - omega[2]) / (2 * h_y)
    return (3 * omega[-1] - 4 * omega[-2] + omega[-3]) / (2 * h_y)


def boundary_residual(omega: np.ndarray, K: KMatrix, frames: FrameField) -> float:
    """max |∂_yω − (e^ω A + e^{−ω} B)| along y = 0.

    Raises:
        GridError: the grid has no y = 0 row
    """
    row = frames.domain.row_index(0.0, exact=True)
    dy = boundary_derivative(omega, row, frames.domain.h_y)
    w = omega[row]
    return float(np.abs(dy - (np.exp(w) * K.A + np.exp(-w) * K.B)).max())


def mean_curvature_estimate(immersion: ImmersionGrid) -> np.ndarray:
    """H = (eG − 2fF + gE)/(2(EG − F²)) from central differences, interior points.

    The sign follows the normal f_x × f_y.
    """
    X = immersion.coords
    hx, hy = immersion.h_x, immersion.h_y
    c = X[1:-1, 1:-1]
    fx = (X[1:-1, 2:] - X[1:-1, :-2]) / (2 * hx)
    fy = (X[2:, 1:-1] - X[:-2, 1:-1]) / (2 * hy)
    fxx = (X[1:-1, 2:] - 2 * c + X[1:-1, :-2]) / hx ** 2
    fyy = (X[2:, 1:-1] - 2 * c + X[:-2, 1:-1]) / hy ** 2
    fxy = (X[2:, 2:] - X[2:, :-2] - X[:-2, 2:] + X[:-2, :-2]) / (4 * hx * hy)
    normal = np.cross(fx, fy)
    normal /= np.linalg.norm(normal, axis=-1, keepdims=True)
    E = np.sum(fx * fx, axis=-1)
    F = np.sum(fx * fy, axis=-1)
    G = np.sum(fy * fy, axis=-1)
    e = np.sum(fxx * normal, axis=-1)
    f = np.sum(fxy * normal, axis=-1)
    g = np.sum(fyy * normal, axis=-1)
    return (e * G - 2 * f * F + g * E) / (2 * (E * G - F ** 2))


def conformality_residual(immersion: ImmersionGrid) -> float:
    """max of | |f_x|² − |f_y|² | and |⟨f_x, f_y⟩| relative to |f_x|², interior."""
    X = immersion.coords
    fx = (X[1:-1, 2:] - X[1:-1, :-2]) / (2 * immersion.h_x)
    fy = (X[2:, 1:-1] - X[:-2, 1:-1]) / (2 * immersion.h_y)
    E = np.sum(fx * fx, axis=-1)
    G = np.sum(fy * fy, axis=-1)
    F = np.sum(fx * fy, axis=-1)
    return float(max(np.abs(E - G).max(), np.abs(F).max()) / E.max())
