"""K-matrix evaluation, roots, kernels, eigen data and residues."""

import numpy as np
import pytest

from src.kmatrix import (
    KMatrix,
    k_det,
    k_eigen,
    k_eval,
    k_inverse_residues,
    k_kernels,
    k_null_set,
    k_roots,
    k_roots_companion,
    lemma_u_residual,
    residue_kernel_residuals,
    residue_oracle,
    row_reduce,
    scalar_residues,
)
from src.utils.errors import DegenerateKMatrixError, DomainError

GENERIC = [KMatrix(0.3, -0.7), KMatrix(-1.2, 0.4), KMatrix(0.0, 0.75), KMatrix(2.0, 1.5)]


def test_evaluation_examples():
    assert np.allclose(k_eval(KMatrix(1, 2), 1.0), -4 * np.eye(2))
    assert np.allclose(k_eval(KMatrix(1, 2), -1.0), 12 * np.eye(2))
    assert np.allclose(k_eval(KMatrix(0, 0), 1j), [[0, 2j], [2j, 0]])


def test_evaluation_rejects_zero():
    with pytest.raises(DomainError):
        k_eval(KMatrix(1, 1), 0.0)


@pytest.mark.parametrize("K", GENERIC)
def test_laurent_form_matches_evaluation(K):
    lam = np.array([0.5 + 0.2j, -1.3j, 2.0])
    assert np.allclose(K.laurent()(lam), k_eval(K, lam), atol=1e-12)
    assert np.allclose(K.laurent(exact=True)(lam), k_eval(K, lam), atol=1e-12)


def test_symmetry_reality_and_adjugate():
    rng = np.random.default_rng(7)
    for _ in range(100):
        K = KMatrix(*rng.normal(size=2))
        lam = complex(*rng.normal(size=2))
        k = k_eval(K, lam)
        adj = np.array([[k[1, 1], -k[0, 1]], [-k[1, 0], k[0, 0]]])
        assert np.abs(k - k.T).max() < 1e-12
        assert np.abs(np.conj(k_eval(K, np.conj(lam))) - k).max() < 1e-12
        assert np.abs(k_eval(K, 1 / lam) - adj).max() < 1e-12


def test_roots_closed_form_example():
    roots = k_roots(KMatrix(0.0, 0.75))
    assert roots.varrho == pytest.approx(-0.302776, abs=1e-6)
    assert roots.r == pytest.approx(0.302776, abs=1e-6)
    assert roots.varrho_inv == pytest.approx(-3.302776, abs=1e-6)
    assert roots.r_inv == pytest.approx(3.302776, abs=1e-6)
    assert not roots.degenerate


def test_zero_constants_are_degenerate():
    roots = k_roots(KMatrix(0.0, 0.0))
    assert roots.degenerate
    assert sorted(z.real for z in roots.as_array()) == pytest.approx([-1, -1, 1, 1])


@pytest.mark.parametrize("K", GENERIC)
def test_roots_are_inverse_pairs_and_zeros_of_det(K):
    roots = k_roots(K)
    assert roots.varrho * roots.varrho_inv == pytest.approx(1, abs=1e-10)
    assert roots.r * roots.r_inv == pytest.approx(1, abs=1e-10)
    det = k_det(K)
    assert np.abs(det(roots.as_array())).max() < 1e-10
    assert np.allclose(k_roots_companion(K), k_null_set(K), atol=1e-10)


@pytest.mark.parametrize("K", GENERIC)
def test_null_set_invariant_under_sign_flip(K):
    flipped = KMatrix(-K.A, -K.B)
    assert np.allclose(k_null_set(K), k_null_set(flipped), atol=1e-10)


def test_kernels_for_vanishing_b():
    v, v_perp = k_kernels(KMatrix(0.7, 0.0))
    assert np.allclose(v, np.array([1, -1]) / np.sqrt(2))
    assert np.allclose(v_perp, np.array([1, 1]) / np.sqrt(2))


def test_kernels_independent_of_a():
    kernels = [k_kernels(KMatrix(a, 1.0)) for a in (-1.0, 0.0, 2.0)]
    for v, v_perp in kernels[1:]:
        assert np.allclose(v, kernels[0][0]) and np.allclose(v_perp, kernels[0][1])


@pytest.mark.parametrize("K", GENERIC)
def test_kernels_annihilate(K):
    roots = k_roots(K)
    v, v_perp = k_kernels(K)
    assert np.linalg.norm(k_eval(K, roots.varrho) @ v) < 1e-10
    assert np.linalg.norm(k_eval(K, roots.r) @ v) < 1e-10
    assert np.linalg.norm(k_eval(K, roots.varrho_inv) @ v_perp) < 1e-10
    assert abs(v @ v_perp) < 1e-15


def test_kernels_refuse_degenerate():
    with pytest.raises(DegenerateKMatrixError, match="degenerate K-matrix"):
        k_kernels(KMatrix(0.5, -0.5))


@pytest.mark.parametrize("K", GENERIC)
def test_eigen_system(K):
    eig = k_eigen(K)
    assert eig.mu_minus.invert().allclose(eig.mu_plus)
    assert eig.mu_minus(1.0) == pytest.approx(4 * K.A - 4 * K.B)
    lam = np.exp(1j * np.linspace(0.1, 6.0, 25))
    assert np.abs(eig.diagonalize(lam) - k_eval(K, lam)).max() < 1e-12
    assert np.allclose(k_eval(K, lam) @ eig.v, eig.mu_minus(lam)[:, None] * eig.v, atol=1e-12)
    lam0 = 0.7 - 1.1j
    assert k_det(K)(lam0) == pytest.approx(eig.mu_minus(lam0) * eig.mu_plus(lam0), rel=1e-12)


def test_eigenvectors_orthogonal_for_large_b():
    eig = k_eigen(KMatrix(0.0, 5.0))
    assert abs(eig.v @ eig.v_perp) < 1e-15


@pytest.mark.parametrize("K", GENERIC)
def test_residues_match_contour_quadrature(K):
    res = k_inverse_residues(K)
    assert np.abs(res.residues - residue_oracle(K)).max() < 1e-8
    for r in res.residues:
        assert np.linalg.matrix_rank(r, tol=1e-10) == 1


def test_scalar_residue_closed_form():
    K = KMatrix(0.4, 0.9)
    expected = (0.5 - K.A / K.s_a) * (2 * K.B - K.s_b)
    assert scalar_residues(K)[0] == pytest.approx(expected)


@pytest.mark.parametrize("K", GENERIC)
def test_residue_row_form_and_kernel_swap(K):
    res = k_inverse_residues(K)
    reduced = row_reduce(res.residues[0])
    assert np.allclose(reduced[0], [1, 2 * K.B - K.s_b], atol=1e-10)
    assert np.allclose(reduced[1], 0)
    assert residue_kernel_residuals(K).max() < 1e-10


def test_u_conjugation_identity():
    rng = np.random.default_rng(11)
    for _ in range(20):
        K = KMatrix(*rng.normal(size=2))
        omega, omega_y = rng.normal(size=2)
        lam = np.exp(1j * rng.uniform(0, 2 * np.pi, 8)) * rng.uniform(0.5, 2, 8)
        assert lemma_u_residual(K, omega, omega_y, lam) < 1e-12
