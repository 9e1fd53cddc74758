"""Two-boundary dressing on the vacuum strip."""

import numpy as np
import pytest

from src.frames import (
    DressingData,
    commutant_decompose,
    dressing_matrix,
    dressing_reconstruct,
    ratio_divisor,
    two_boundary_report,
)
from src.kmatrix import KMatrix, k_eigen, near_null_set
from src.loops import LoopSample
from src.utils.errors import CommutantError, GridError

K0 = KMatrix(0.25, -0.25)


def test_equal_constants_give_trivial_dressing(vacuum_frames):
    dd = dressing_matrix(vacuum_frames, K0, K0, 0.0)
    assert dd.y1 == 0.0
    deviation = np.linalg.norm(dd.C.values - np.eye(2), axis=(-2, -1))[dd.valid]
    assert deviation.max() < 1e-8
    assert dd.residuals["commutator"] < 1e-8
    assert dd.residuals["z_independence"] < 1e-8
    assert not dd.valid.all()


def test_complementary_constants(vacuum_frames):
    K1 = KMatrix(-0.25, 0.25)
    dd = dressing_matrix(vacuum_frames, K0, K1, 0.0)
    assert max(dd.residuals["det"], dd.residuals["unitarity"]) < 1e-8
    result = commutant_decompose(dd, vacuum_frames.xi)
    for key in ("reconstruction", "det_identity", "complementary_det", "f_symmetry"):
        assert result.residuals[key] < 1e-8
    assert np.isnan(result.f[~dd.valid]).all()
    dressing_reconstruct(dd, vacuum_frames.xi, result)
    assert dd.residuals["reconstruct"] < 1e-8


def test_commutant_of_identity(vacuum_frames):
    dd = dressing_matrix(vacuum_frames, K0, K0, 0.0)
    result = commutant_decompose(dd, vacuum_frames.xi)
    assert np.allclose(result.f[dd.valid], 1.0, atol=1e-8)
    assert np.allclose(result.g[dd.valid], 0.0, atol=1e-8)


def test_noncommuting_dressing_is_refused(vacuum_frames):
    dd = dressing_matrix(vacuum_frames, K0, KMatrix(0.5, 0.5), 0.0)
    with pytest.raises(CommutantError, match="does not commute"):
        commutant_decompose(dd, vacuum_frames.xi)


def test_y1_outside_domain(vacuum_frames):
    with pytest.raises(GridError):
        dressing_matrix(vacuum_frames, K0, K0, 3.0)


def test_two_boundary_report(vacuum_frames):
    report = two_boundary_report(vacuum_frames.xi, K0, K0, 0.0, vacuum_frames)
    for key in ("first_zeta_sym", "dressed_potential_sym", "second_zeta_sym",
                "dressed_frame_sym", "k1pkf2", "det_C", "unitarity_C"):
        assert report[key] < 1e-7, key
    assert report["equivalent"] == 1.0


def test_dressed_phi_and_b_symmetries(vacuum_frames):
    for K1 in (K0, KMatrix(-0.25, 0.25)):
        report = two_boundary_report(vacuum_frames.xi, K0, K1, 0.0, vacuum_frames)
        assert report["dressed_phi_sym"] < 1e-7
        assert report["dressed_b_sym"] < 1e-7


def test_dressed_phi_symmetry_breaks_without_boundary(vacuum_frames):
    report = two_boundary_report(vacuum_frames.xi, K0, KMatrix(0.5, 0.5), 0.0, vacuum_frames)
    assert report["dressed_phi_sym"] > 1e-6


def _ratio_dressing(frames, K_spectrum):
    """M = f·𝟙 + g·ξ with f ∓ gν the eigenvalue ratios of K₀ and K_spectrum; returns (dd, g)."""
    grid = frames.grid
    lam = grid.points
    x = frames.xi.evaluate(lam)
    nu_x, _ = np.linalg.eig(x)
    valid = ~(near_null_set(K0, lam) | near_null_set(K_spectrum, lam))
    valid &= np.abs(nu_x[:, 1]) > 1e-3
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio_minus = k_eigen(K0).mu_minus(lam) / k_eigen(K_spectrum).mu_minus(lam)
        ratio_plus = k_eigen(K0).mu_plus(lam) / k_eigen(K_spectrum).mu_plus(lam)
        f = np.where(valid, 0.5 * (ratio_minus + ratio_plus), 1.0)
        g = np.where(valid, (ratio_plus - ratio_minus) / (nu_x[:, 1] - nu_x[:, 0]), 0.0)
    M = LoopSample(grid, f[:, None, None] * np.eye(2) + g[:, None, None] * x)
    return DressingData(M, M, K0, K_spectrum, 0.0, 0, valid, {"commutator": 0.0}), g


def test_eigen_ratio_route_matches_linear_route(vacuum_frames):
    dd, _ = _ratio_dressing(vacuum_frames, KMatrix(0.5, -0.5))
    result = commutant_decompose(dd, vacuum_frames.xi)
    assert result.residuals["reconstruction"] < 1e-10
    assert result.residuals["eigen_route"] < 1e-8
    assert result.residuals["mu_ratio"] < 1e-7


def test_commutant_keeps_the_sign_of_g(vacuum_frames):
    dd, g = _ratio_dressing(vacuum_frames, KMatrix(0.5, -0.5))
    result = commutant_decompose(dd, vacuum_frames.xi)
    valid = dd.valid
    assert np.allclose(result.g[valid], g[valid], atol=1e-10)
    assert not np.allclose(result.g[valid], -g[valid], atol=1e-3)


def test_ratio_route_rejects_a_foreign_spectrum(vacuum_frames):
    dd, _ = _ratio_dressing(vacuum_frames, KMatrix(0.75, -0.75))
    dd.K1 = KMatrix(0.5, -0.5)
    dd.valid &= ~near_null_set(dd.K1, dd.M.grid.points)
    result = commutant_decompose(dd, vacuum_frames.xi)
    assert result.residuals["reconstruction"] < 1e-10
    assert result.residuals["mu_ratio"] > 1e-3


def test_equal_constants_ratio_route(vacuum_frames):
    dd = dressing_matrix(vacuum_frames, K0, K0, 0.0)
    result = commutant_decompose(dd, vacuum_frames.xi)
    assert result.residuals["mu_ratio"] < 1e-7
    assert result.residuals["divisor"] == 0.0


def test_ratio_divisor():
    # ϱ = −1 is shared by both K-matrices and cancels
    assert ratio_divisor(K0, KMatrix(0.5, -0.5)) < 1e-6
    assert ratio_divisor(K0, K0) == 0.0
