"""Commutators and products of two K-matrices."""

import numpy as np
import pytest

from src.kmatrix import (
    J,
    KMatrix,
    check_sign_condition,
    k_commutator,
    k_diagonal_ratio,
    k_eval,
    k_product_decompose,
    near_null_set,
    product_reconstruction_residual,
)
from src.loops import UnitCircleGrid
from src.utils.errors import ConstraintError


def _off_poles(*Ks, n=64):
    lam = UnitCircleGrid(n).points
    mask = np.zeros(lam.shape, dtype=bool)
    for K in Ks:
        mask |= near_null_set(K, lam)
    return lam[~mask]


def test_commutator_vanishes_for_equal_b():
    assert k_commutator(KMatrix(0.3, 1.0), KMatrix(-2.0, 1.0)).max_abs() < 1e-12


def test_commutator_closed_form():
    K0, K1 = KMatrix(0.2, 1.5), KMatrix(-0.4, 0.5)
    value = k_commutator(K0, K1)(1j)
    assert np.allclose(value, -16 * J, atol=1e-12)


def test_commutator_antisymmetric():
    K0, K1 = KMatrix(0.2, 1.5), KMatrix(-0.4, 0.5)
    total = k_commutator(K0, K1) + k_commutator(K1, K0)
    assert total.max_abs() < 1e-12


def test_eta_example():
    dec = k_product_decompose(KMatrix(1, 1), KMatrix(2, -2))
    lam = 0.6 + 0.3j
    expected = 1j * np.array([[-8, 1 + 3 / lam], [1 + 3 * lam, 8]])
    assert np.allclose(dec.eta(lam), expected)
    assert dec.eta.trace().is_zero()


@pytest.mark.parametrize("K0, K1", [
    (KMatrix(1, 1), KMatrix(2, -2)),
    (KMatrix(0.5, 0.25), KMatrix(-0.3, 0.15)),
    (KMatrix(0.0, 0.8), KMatrix(0.0, -0.4)),
])
def test_reconstruction_on_circle(K0, K1):
    assert product_reconstruction_residual(K0, K1, _off_poles(K0, K1)) < 1e-10


def test_self_ratio_is_identity():
    K = KMatrix(0.0, 0.6)
    dec = k_product_decompose(K, K)
    lam = _off_poles(K)
    assert np.allclose(dec.p(lam), 1.0, atol=1e-12)
    assert dec.eta.is_zero()


def test_sign_condition_enforced():
    with pytest.raises(ConstraintError, match="trace obstruction"):
        k_product_decompose(KMatrix(1, 1), KMatrix(1, 1))
    check_sign_condition(KMatrix(1, 1), KMatrix(-1, 1))


def test_diagonal_ratio_for_equal_b():
    K0, K1 = KMatrix(0.4, 0.7), KMatrix(-1.1, 0.7)
    lam = _off_poles(K0, K1)
    ratio = k_diagonal_ratio(K0, K1)(lam)
    direct = np.linalg.solve(k_eval(K1, lam), k_eval(K0, lam))
    assert np.abs(ratio - direct).max() < 1e-10


def test_diagonal_ratio_needs_equal_b():
    with pytest.raises(ConstraintError):
        k_diagonal_ratio(KMatrix(0.4, 0.7), KMatrix(0.4, 0.2))
