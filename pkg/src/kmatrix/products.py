"""
Products of Two K-Matrices

Commutator [K₀, K₁], the decomposition K₁⁻¹K₀ = p·𝟙 + q·η under the sign
condition A₀B₁ = −A₁B₀, and the diagonal ratio for B₀ = B₁.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from src.loops import LaurentMatrix, LaurentPoly, commutator
from src.utils.errors import ConstraintError
from .kmatrix import KMatrix, k_det, k_eigen, k_eval

logger = logging.getLogger(__name__)

SIGN_CONDITION_TOL = 1e-12

J = np.array([[0.0, -1.0], [1.0, 0.0]])


def k_commutator(K0: KMatrix, K1: KMatrix) -> LaurentMatrix:
    """[K₀, K₁] = 4(λ−λ⁻¹)²(B₀−B₁)·J, computed by Laurent arithmetic."""
    return commutator(K0.laurent(), K1.laurent())


def sign_condition_residual(K0: KMatrix, K1: KMatrix) -> float:
    return abs(K0.A * K1.B + K1.A * K0.B)


def check_sign_condition(K0: KMatrix, K1: KMatrix, tol: float = SIGN_CONDITION_TOL):
    if sign_condition_residual(K0, K1) > tol:
        raise ConstraintError("trace obstruction: A₀B₁ ≠ −A₁B₀")


@dataclass
class ProductDecomposition:
    """K₁⁻¹K₀ = p·𝟙 + q·η with p = p_num/den, q = q_num/den.

    ``den`` is −λ²·det K₁, a polynomial in λ.
    """

    p_num: LaurentPoly
    q_num: LaurentPoly
    den: LaurentPoly
    eta: LaurentMatrix

    def p(self, lam):
        return self.p_num(lam) / self.den(lam)

    def q(self, lam):
        return self.q_num(lam) / self.den(lam)

    def evaluate(self, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=complex)
        ident = np.broadcast_to(np.eye(2), lam.shape + (2, 2))
        return self.p(lam)[..., None, None] * ident + self.q(lam)[..., None, None] * self.eta(lam)


def product_eta(K0: KMatrix, K1: KMatrix) -> LaurentMatrix:
    """η = i((4A₀B₁, A₁−A₀−(B₁−B₀)λ⁻¹), (A₁−A₀−(B₁−B₀)λ, −4A₀B₁))."""
    dA, dB = K1.A - K0.A, K1.B - K0.B
    c = 4 * K0.A * K1.B
    blocks = 1j * np.array([
        [[0, -dB], [0, 0]],
        [[c, dA], [dA, -c]],
        [[0, 0], [-dB, 0]],
    ], dtype=complex)
    return LaurentMatrix(-1, blocks)


def k_product_decompose(K0: KMatrix, K1: KMatrix) -> ProductDecomposition:
    """Decompose K₁⁻¹K₀ into a scalar part and a degree-one potential part.

    Args:
        K0: first K-matrix
        K1: second K-matrix, with A₀B₁ = −A₁B₀

    Returns:
        ProductDecomposition with p, q sharing the denominator −λ²·det K₁

    Raises:
        ConstraintError: the sign condition fails
    """
    check_sign_condition(K0, K1)
    minus_lam2 = LaurentPoly.monomial(2, -1.0)
    s = LaurentPoly(-1, [-1.0, 0.0, 1.0])
    p_num = (16.0 * (K0.A * K1.A + K0.B * K1.B) - s * s) * minus_lam2
    q_num = (-4j * s) * minus_lam2
    den = k_det(K1) * minus_lam2
    decomposition = ProductDecomposition(p_num, q_num, den, product_eta(K0, K1))
    logger.debug(f"Product decomposition for K0=({K0.A},{K0.B}), K1=({K1.A},{K1.B})")
    return decomposition


def product_reconstruction_residual(K0: KMatrix, K1: KMatrix, lam) -> float:
    """max ‖K₁⁻¹K₀ − (p𝟙 + qη)‖ over the given λ."""
    dec = k_product_decompose(K0, K1)
    direct = np.linalg.solve(k_eval(K1, lam), k_eval(K0, lam))
    return float(np.abs(direct - dec.evaluate(lam)).max())


def k_diagonal_ratio(K0: KMatrix, K1: KMatrix) -> Callable[[np.ndarray], np.ndarray]:
    """For B₀ = B₁: λ ↦ V·diag(μ⁰₋/μ¹₋, μ⁰₊/μ¹₊)·V⁻¹ = K₁⁻¹K₀."""
    if abs(K0.B - K1.B) > SIGN_CONDITION_TOL:
        raise ConstraintError("diagonal ratio needs B₀ = B₁")
    e0, e1 = k_eigen(K0), k_eigen(K1)
    V, V_inv = e0.V, np.linalg.inv(e0.V)

    def ratio(lam):
        lam = np.asarray(lam, dtype=complex)
        d = np.zeros(lam.shape + (2, 2), dtype=complex)
        d[..., 0, 0] = e0.mu_minus(lam) / e1.mu_minus(lam)
        d[..., 1, 1] = e0.mu_plus(lam) / e1.mu_plus(lam)
        return V @ d @ V_inv

    return ratio
