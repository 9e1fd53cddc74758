"""
Two-Boundary Dressing

At a second boundary line y = y₁ the K₁-symmetry of the frame holds only up
to the loop

    C_λ = K₁ F_λ K₁⁻¹ F_{λ⁻¹}⁻¹ = K₁ F_λ K₁⁻¹ star(F)_λ,

which is z-independent along the line when the second boundary condition
holds. M = K₁⁻¹CK₀ then commutes with ξ and splits as M = f·𝟙 + g·ξ.

Grid points within 1e-2 of a root of det K₀ or det K₁ are masked out of
every supremum that involves K⁻¹.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from src.kmatrix import KMatrix, k_eigen, k_eval, k_inverse, k_roots, near_null_set
from src.loops import LoopSample
from src.potentials import Potential
from src.utils.errors import CommutantError
from .field import FrameField
from .iwasawa import holomorphic_frame
from .symmetry import killing_field, zeta_symmetry

logger = logging.getLogger(__name__)

COMMUTATOR_TOL = 1e-6
EQUIVALENCE_FACTOR = 10.0
NU_FLOOR = 1e-8
DIVISOR_OFFSET = 1e-10
SHARED_ROOT_TOL = 1e-6


def _pointwise_norm(values: np.ndarray) -> np.ndarray:
    return np.linalg.norm(values, axis=(-2, -1))


def _masked_max(values: np.ndarray, mask: np.ndarray) -> float:
    return float(values[mask].max()) if mask.any() else 0.0


def _safe_inverse(K: KMatrix, lam: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = k_inverse(K, lam)
    return np.nan_to_num(inv)


def _masked_inverse(values: np.ndarray, valid: np.ndarray) -> np.ndarray:
    """Pointwise inverse on valid grid points; identity elsewhere."""
    out = np.broadcast_to(np.eye(2, dtype=complex), values.shape).copy()
    out[valid] = np.linalg.inv(values[valid])
    return out


def dressing_at(F: LoopSample, K1: KMatrix) -> np.ndarray:
    """C = K₁FK₁⁻¹star(F) on the circle grid."""
    lam = F.grid.points
    return k_eval(K1, lam) @ F.values @ _safe_inverse(K1, lam) @ F.star().values


@dataclass
class DressingData:
    """Dressing loop C at the reference point of the y₁ row, and M = K₁⁻¹CK₀."""

    C: LoopSample
    M: LoopSample
    K0: KMatrix
    K1: KMatrix
    y1: float
    row: int
    valid: np.ndarray = field(repr=False)
    residuals: Dict[str, float] = field(default_factory=dict)


def dressing_matrix(frames: FrameField, K0: KMatrix, K1: KMatrix, y1: float) -> DressingData:
    """C along the row y = y₁, its invariants and its z-independence.

    Raises:
        GridError: y₁ is outside the domain grid
    """
    row = frames.domain.row_index(y1)
    grid = frames.grid
    lam = grid.points
    valid = ~(near_null_set(K0, lam) | near_null_set(K1, lam))
    nx = frames.F.shape[1]
    ref = frames.domain.column_index(0.0)
    C_row = np.stack([dressing_at(frames.frame(row, ix), K1) for ix in range(nx)])
    C = LoopSample(grid, C_row[ref])

    drift = max(_masked_max(_pointwise_norm(C_row[ix] - C_row[ref]), valid) for ix in range(nx))
    det_res = _masked_max(np.abs(C.det() - 1.0), valid)
    unitarity = _masked_max(_pointwise_norm(C.dagger().values @ C.values - np.eye(2)), valid)
    M = LoopSample(grid, _safe_inverse(K1, lam) @ C.values @ k_eval(K0, lam))
    x = frames.xi.evaluate(lam)
    commutator = _masked_max(_pointwise_norm(M.values @ x - x @ M.values), valid)
    residuals = {
        "z_independence": drift,
        "det": det_res,
        "unitarity": unitarity,
        "commutator": commutator,
    }
    logger.debug(f"Dressing at y1={y1}: {residuals}")
    return DressingData(C, M, K0, K1, float(frames.domain.ys[row]), row, valid, residuals)


@dataclass
class CommutantResult:
    """M = f·𝟙 + g·ξ on the circle grid (NaN at masked points)."""

    f: np.ndarray = field(repr=False)
    g: np.ndarray = field(repr=False)
    nu: np.ndarray = field(repr=False)
    residuals: Dict[str, float] = field(default_factory=dict)


def _eigen_ratios(K0: KMatrix, K1: KMatrix, lam: np.ndarray):
    """(μ⁰₋/μ¹₋, μ⁰₊/μ¹₊) at λ."""
    eig0, eig1 = k_eigen(K0), k_eigen(K1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return eig0.mu_minus(lam) / eig1.mu_minus(lam), eig0.mu_plus(lam) / eig1.mu_plus(lam)


def _finite_roots(K: KMatrix) -> np.ndarray:
    roots = k_roots(K)
    pair = np.array([roots.varrho, roots.r], dtype=complex)
    return pair[np.isfinite(pair) & (np.abs(pair) > 0)]


def ratio_divisor(K0: KMatrix, K1: KMatrix, offset: float = DIVISOR_OFFSET) -> float:
    """Worst of |μ⁰₋/μ¹₋| next to ϱ₀, r₀ and |μ¹₋/μ⁰₋| next to ϱ₁, r₁.

    Roots common to both sets cancel in the ratio and are left out.
    """
    zeros, poles = _finite_roots(K0), _finite_roots(K1)
    shared = np.abs(zeros[:, None] - poles[None, :]) <= SHARED_ROOT_TOL
    zeros = zeros[~shared.any(axis=1)]
    poles = poles[~shared.any(axis=0)]
    worst = 0.0
    for root in zeros:
        ratio_minus, _ = _eigen_ratios(K0, K1, root * (1.0 + offset))
        worst = max(worst, float(np.abs(ratio_minus)))
    for root in poles:
        ratio_minus, _ = _eigen_ratios(K0, K1, root * (1.0 + offset))
        worst = max(worst, float(np.abs(1.0 / ratio_minus)))
    return worst


def _is_complementary(K0: KMatrix, K1: KMatrix, tol: float = 1e-12) -> bool:
    return abs(K1.A + K0.A) <= tol and abs(K1.B + K0.B) <= tol


def commutant_decompose(dd: DressingData, xi: Potential, tol: float = COMMUTATOR_TOL) -> CommutantResult:
    """Split M into f·𝟙 + g·ξ two ways and cross-check.

    The linear route takes f = tr M/2 and g by projecting M − f𝟙 on ξ. The
    eigen route reads M on the eigenvectors of ξ: with ξw = −νw and ξw⊥ = νw⊥
    it takes f − gν = ⟨M⟩_w and f + gν = ⟨M⟩_w⊥. The ratio route takes the
    same two values from μ⁰∓/μ¹∓ of K₀ and K₁, paired with w and w⊥ by
    nearest eigenvalue of M; g keeps its sign in every comparison. ``divisor``
    checks that μ⁰₋/μ¹₋ vanishes at ϱ₀, r₀ and has poles at ϱ₁, r₁ (roots
    shared by K₀ and K₁ cancel and are skipped). For complementary constants
    (A₁, B₁) = (−A₀, −B₀) it also checks det M = 1 and
    f = −½(μ₋/μ₊ + μ₊/μ₋).

    Raises:
        CommutantError: [M, ξ] does not vanish on the grid
    """
    if dd.residuals["commutator"] > tol:
        raise CommutantError("M does not commute with ξ: second boundary condition not satisfied at y₁")
    grid = dd.M.grid
    lam = grid.points
    valid = dd.valid
    x = xi.evaluate(lam)
    M = dd.M.values
    f = 0.5 * np.trace(M, axis1=-2, axis2=-1)
    rest = M - f[:, None, None] * np.eye(2)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.sum(np.conj(x) * rest, axis=(-2, -1)) / np.sum(np.abs(x) ** 2, axis=(-2, -1))
    nu = np.sqrt(-np.linalg.det(x))

    reconstruction = _pointwise_norm(rest - g[:, None, None] * x)
    nu_x, W = np.linalg.eig(x)
    split = valid & (np.abs(nu_x[:, 1] - nu_x[:, 0]) > NU_FLOOR)
    W_inv = _masked_inverse(W, split)
    m_diag = np.diagonal(W_inv @ M @ W, axis1=-2, axis2=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        gap_nu = nu_x[:, 1] - nu_x[:, 0]
        g_eig = (m_diag[:, 1] - m_diag[:, 0]) / gap_nu
    eigen_route = np.abs(f - m_diag.mean(axis=-1)) + np.abs(g - g_eig)

    ratio_minus, ratio_plus = _eigen_ratios(dd.K0, dd.K1, lam)
    straight = np.abs(ratio_minus - m_diag[:, 0]) + np.abs(ratio_plus - m_diag[:, 1])
    crossed = np.abs(ratio_plus - m_diag[:, 0]) + np.abs(ratio_minus - m_diag[:, 1])
    at_w = np.where(straight <= crossed, ratio_minus, ratio_plus)
    at_w_perp = np.where(straight <= crossed, ratio_plus, ratio_minus)
    with np.errstate(divide="ignore", invalid="ignore"):
        f_ratio = 0.5 * (ratio_minus + ratio_plus)
        g_ratio = (at_w_perp - at_w) / gap_nu
    mu_ratio = np.abs(f - f_ratio) + np.abs(g - g_ratio)

    det_identity = np.abs(f ** 2 - (g * nu) ** 2 - np.linalg.det(M))
    paired = valid & valid[grid.inverse_index]
    f_symmetry = np.abs(f[grid.inverse_index] - f)
    g_symmetry = np.abs(g[grid.inverse_index] + lam ** (xi.d - 1) * g)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.linalg.det(k_eval(dd.K0, lam)) / np.linalg.det(k_eval(dd.K1, lam))
    det_ratio = np.abs(np.linalg.det(M) - ratio)
    residuals = {
        "reconstruction": _masked_max(reconstruction, valid),
        "eigen_route": _masked_max(eigen_route, split),
        "mu_ratio": _masked_max(mu_ratio, split),
        "divisor": ratio_divisor(dd.K0, dd.K1),
        "det_identity": _masked_max(det_identity, valid),
        "f_symmetry": _masked_max(f_symmetry, paired),
        "g_symmetry": _masked_max(g_symmetry, paired),
        "det_ratio": _masked_max(det_ratio, valid),
    }
    if _is_complementary(dd.K0, dd.K1):
        eig0 = k_eigen(dd.K0)
        mu_m, mu_p = eig0.mu_minus(lam), eig0.mu_plus(lam)
        with np.errstate(divide="ignore", invalid="ignore"):
            expected = -0.5 * (mu_m / mu_p + mu_p / mu_m)
        residuals["complementary_det"] = _masked_max(np.abs(np.linalg.det(M) - 1.0), valid)
        residuals["complementary_f"] = _masked_max(np.abs(f - expected), valid)
    f = np.where(valid, f, np.nan)
    g = np.where(valid, g, np.nan)
    logger.debug(f"Commutant decomposition residuals: {residuals}")
    return CommutantResult(f, g, nu, residuals)


def dressing_reconstruct(dd: DressingData, xi: Potential,
                         commutant: Optional[CommutantResult] = None) -> LoopSample:
    """C = K₁K₀⁻¹(f·𝟙 − g·star(ξ)) from the commutant coefficients.

    Masked points are left at zero; the agreement with dd.C is stored in
    dd.residuals["reconstruct"].
    """
    commutant = commutant or commutant_decompose(dd, xi)
    grid = dd.C.grid
    lam = grid.points
    star_xi = LoopSample(grid, xi.evaluate(lam)).star().values
    f = np.nan_to_num(commutant.f)
    g = np.nan_to_num(commutant.g)
    inner = f[:, None, None] * np.eye(2) - g[:, None, None] * star_xi
    values = k_eval(dd.K1, lam) @ _safe_inverse(dd.K0, lam) @ inner
    values[~dd.valid] = 0.0
    dd.residuals["reconstruct"] = _masked_max(_pointwise_norm(values - dd.C.values), dd.valid)
    return LoopSample(grid, values)


def two_boundary_report(xi: Potential, K0: KMatrix, K1: KMatrix, y1: float,
                        frames: FrameField, tol: float = 1e-7) -> Dict[str, float]:
    """Diagnostics of the second boundary condition at y = y₁.

    Residuals: first_zeta_sym (K₀, row y = 0), dressed_potential_sym
    ‖C⁻¹K₁ξ + star(ξ)C⁻¹K₁‖, second_zeta_sym ‖K₁ζ + star(ζ)K₁‖ (row y₁),
    dressed_frame_sym ‖C⁻¹K₁F_λ − F_{λ⁻¹}K₁‖ (row y₁, reference C) and
    k1pkf2, the gap between K₁ζ + star(ζ)K₁ and F_{λ⁻¹}⁻¹K₀[K₀⁻¹C⁻¹K₁, ξ]F.
    dressed_phi_sym is ‖K₁Φ(z) − C·star(Φ(z̄))⁻¹·C⁻¹K₁‖ over every grid point
    and dressed_b_sym ‖K₁B − star(B)⁻¹C⁻¹K₁‖ along row y₁.
    ``equivalent`` is 1.0 when the dressed potential symmetry and the second
    zeta symmetry pass or fail together (within a factor 10).
    """
    grid = frames.grid
    lam = grid.points
    valid = ~(near_null_set(K0, lam) | near_null_set(K1, lam))
    x = xi.evaluate(lam)
    star_x = LoopSample(grid, x).star().values
    k0, k1 = k_eval(K0, lam), k_eval(K1, lam)
    k0_inv = _safe_inverse(K0, lam)

    row0 = frames.domain.row_index(0.0, exact=True)
    first = max(zeta_symmetry(killing_field(frames.frame(row0, ix), xi), K0)
                for ix in range(frames.F.shape[1]))

    dd = dressing_matrix(frames, K0, K1, y1)
    C_inv_ref = _masked_inverse(dd.C.values, valid)
    dressed = _masked_max(_pointwise_norm(C_inv_ref @ k1 @ x + star_x @ C_inv_ref @ k1), valid)

    second = 0.0
    frame_sym = 0.0
    gap = 0.0
    b_sym = 0.0
    for ix in range(frames.F.shape[1]):
        F = frames.frame(dd.row, ix)
        zeta = killing_field(F, xi)
        lhs = k1 @ zeta.values + zeta.star().values @ k1
        second = max(second, _masked_max(_pointwise_norm(lhs), valid))
        F_inv_arg = F.invert().values
        frame_sym = max(frame_sym, _masked_max(
            _pointwise_norm(C_inv_ref @ k1 @ F.values - F_inv_arg @ k1), valid))
        C_inv = _masked_inverse(dressing_at(F, K1), valid)
        inner = k0_inv @ C_inv @ k1
        bracket = k0 @ (inner @ x - x @ inner)
        rhs = np.linalg.inv(F_inv_arg) @ bracket @ F.values
        gap = max(gap, _masked_max(_pointwise_norm(lhs - rhs), valid))
        B = frames.positive(dd.row, ix)
        b_sym = max(b_sym, _masked_max(
            _pointwise_norm(k1 @ B.values - B.star().inverse().values @ C_inv_ref @ k1), valid))

    C_ref = dd.C.values
    phi_sym = 0.0
    points = frames.domain.points
    for iy, ix in np.ndindex(*points.shape):
        phi = holomorphic_frame(xi, points[iy, ix], grid).values
        phi_bar = holomorphic_frame(xi, np.conj(points[iy, ix]), grid)
        rhs = C_ref @ phi_bar.star().inverse().values @ C_inv_ref @ k1
        phi_sym = max(phi_sym, _masked_max(_pointwise_norm(k1 @ phi - rhs), valid))

    both_pass = dressed <= tol and second <= tol
    both_fail = dressed > tol and second > tol and (
        max(dressed, second) <= EQUIVALENCE_FACTOR * min(dressed, second))
    report = {
        "first_zeta_sym": first,
        "dressed_potential_sym": dressed,
        "second_zeta_sym": second,
        "dressed_frame_sym": frame_sym,
        "dressed_phi_sym": phi_sym,
        "dressed_b_sym": b_sym,
        "k1pkf2": gap,
        "z_independence": dd.residuals["z_independence"],
        "det_C": dd.residuals["det"],
        "unitarity_C": dd.residuals["unitarity"],
        "equivalent": float(both_pass or both_fail),
    }
    logger.info(f"✓ Two-boundary report at y1={dd.y1:.4g}: second_zeta_sym={second:.2e}")
    return report
