"""Iwasawa factorization of holomorphic frames and frame fields."""

import numpy as np
import pytest

from src.frames import holomorphic_frame, iwasawa_dense, iwasawa_factor, toeplitz_system
from src.loops import UnitCircleGrid
from src.potentials import degree1_chart, vacuum_potential
from src.utils.errors import DomainError


def test_identity_frame_at_origin(circle):
    factors = iwasawa_factor(holomorphic_frame(vacuum_potential(), 0.0, circle), 16)
    assert np.allclose(factors.F.values, np.eye(2), atol=1e-12)
    assert np.allclose(factors.b0, np.eye(2), atol=1e-12)
    assert factors.rho == pytest.approx(1.0)


@pytest.mark.parametrize("z", [0.3 + 0.2j, -0.5 + 0.1j, 0.1 - 0.6j])
def test_factor_residuals(circle, z):
    xi = degree1_chart(0.3, 0.2, 0.25, 0.25)
    factors = iwasawa_factor(holomorphic_frame(xi, z, circle), 16)
    assert max(factors.residuals.values()) < 1e-8
    assert not factors.flagged
    assert factors.rho > 0
    assert abs(np.linalg.det(factors.F.values) - 1).max() < 1e-8


def test_cholesky_matches_dense_solve(circle):
    Phi = holomorphic_frame(vacuum_potential(), 0.3 + 0.2j, circle)
    a, b = iwasawa_factor(Phi, 16), iwasawa_dense(Phi, 16)
    assert np.abs(a.F.values - b.F.values).max() < 1e-10


def test_toeplitz_system_is_hermitian(circle):
    T = toeplitz_system(holomorphic_frame(vacuum_potential(), 0.4j, circle), 8)
    assert T.shape == (18, 18)
    assert np.allclose(T, T.conj().T)


def test_grid_must_cover_truncation():
    Phi = holomorphic_frame(vacuum_potential(), 0.3, UnitCircleGrid(32))
    with pytest.raises(DomainError, match="too small"):
        iwasawa_factor(Phi, 16)
    with pytest.raises(DomainError):
        iwasawa_dense(Phi, 16)


def test_frame_field_shapes(vacuum_frames):
    assert vacuum_frames.F.shape == (5, 5, 64, 2, 2)
    assert vacuum_frames.rho.shape == (5, 5)
    assert vacuum_frames.max_residual("unitarity") < 1e-8
    phi = vacuum_frames.phi(2, 2)
    assert np.allclose(phi.values, holomorphic_frame(vacuum_potential(), 0.0, vacuum_frames.grid).values,
                       atol=1e-8)
