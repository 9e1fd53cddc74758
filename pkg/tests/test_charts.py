"""Explicit charts, the off-diagonal factorization and scaling by palindromic polynomials."""

import numpy as np
import pytest

from src.kmatrix import KMatrix
from src.loops import LaurentPoly
from src.potentials import (
    degree1_chart,
    degree2_chart,
    degree3_chart,
    diagonal_equivalences,
    imaginary_alpha_from_beta,
    ksym_residual,
    offdiag_core,
    offdiag_factorize,
    offdiag_sample,
    potential_assemble,
    potential_scale,
    structural_identities,
    vacuum_potential,
)
from src.utils.errors import ConstraintError

OFFDIAG_K = KMatrix.from_rational("1/2", "1/4")


@pytest.mark.parametrize("A, B", [(0.3, 0.2), (-0.2, 0.4), (1.0, -2.0)])
def test_low_degree_charts_are_ksymmetric(A, B):
    K = KMatrix(A, B)
    assert ksym_residual(degree1_chart(A, B, 0.25, 0.4), K) < 1e-12
    assert ksym_residual(degree2_chart(A, B, 0.3, -0.6), K) < 1e-12


@pytest.mark.parametrize("A, B", [(0.3, 0.2), (-0.2, 0.4), (1.0, -2.0)])
def test_degree3_chart_is_ksymmetric(A, B):
    K = KMatrix(A, B)
    xi = degree3_chart(A, B, 0.5, -0.3, 0.2, 0.1, 0.4)
    assert ksym_residual(xi, K) < 1e-12
    assert max(structural_identities(xi, K).values()) < 1e-10


def test_degree3_chart_needs_nonzero_b():
    with pytest.raises(ConstraintError):
        degree3_chart(0.3, 0.0, 0.5, 0.1, 0.0, 0.2, 0.3)


def test_imaginary_alpha_matches_chart():
    xi = degree2_chart(0.3, 0.2, 0.7, 0.4)
    assert np.allclose(imaginary_alpha_from_beta(xi.beta, 0.3, 0.2), xi.alpha, atol=1e-12)


def test_offdiag_factorization_example():
    K = KMatrix(1.0, 2.0)
    core = offdiag_core(K)
    xi_laurent = core * LaurentPoly(0, [1.0, 0.5, 1.0])
    beta = xi_laurent.entry(0, 1).coefficients_on(-1, 2)
    assert np.allclose(beta, [1j, 0, 0.75j, -0.5j])
    xi = potential_assemble(3, [0, 0, 0], beta)
    result = offdiag_factorize(xi, K)
    assert np.allclose(result.p.coeffs, [1.0, 0.5, 1.0])
    assert result.residual < 1e-12 and result.remainder < 1e-12
    assert result.product().allclose(xi.to_laurent())


def test_factorization_errors():
    with pytest.raises(ConstraintError, match="core undefined for B=0"):
        offdiag_core(KMatrix(1.0, 0.0))
    with pytest.raises(ConstraintError, match="core undefined for B=0"):
        offdiag_factorize(vacuum_potential(), KMatrix(0.5, 0.0))
    diagonal = degree1_chart(0.3, 0.2, 0.25, 0.4)
    with pytest.raises(ConstraintError, match="not off-diagonal"):
        offdiag_factorize(diagonal, KMatrix(0.3, 0.2))


@pytest.mark.parametrize("d", range(1, 7))
def test_offdiag_samples(d):
    xi = offdiag_sample(d, OFFDIAG_K, seed=40 + d)
    assert xi.d == d
    assert xi.is_offdiagonal()
    assert ksym_residual(xi, OFFDIAG_K) < 1e-12
    assert max(diagonal_equivalences(xi).values()) < 1e-12
    result = offdiag_factorize(xi, OFFDIAG_K)
    coeffs = result.p.coeffs.real
    assert np.allclose(coeffs, coeffs[::-1])
    assert np.allclose(coeffs * 16, np.round(coeffs * 16))


def test_offdiag_sample_is_seeded():
    a = offdiag_sample(4, OFFDIAG_K, seed=3)
    b = offdiag_sample(4, OFFDIAG_K, seed=3)
    assert np.array_equal(a.beta, b.beta)
    with pytest.raises(ConstraintError, match="degree must be at least 1"):
        offdiag_sample(0, OFFDIAG_K, seed=3)


def test_scaling_keeps_ksymmetry():
    xi = offdiag_sample(2, OFFDIAG_K, seed=9)
    scaled = potential_scale(xi, [0.75, 0.5, 0.75])
    assert scaled.d == 4
    assert ksym_residual(scaled, OFFDIAG_K) < 1e-12


@pytest.mark.parametrize("p", [[1.0, 0.5], [0.75, 0.5j, 0.75], [-1.0, 0.0, -1.0]])
def test_scaling_rejects_non_palindromic(p):
    with pytest.raises(ConstraintError, match="real and palindromic"):
        potential_scale(vacuum_potential(), p)
