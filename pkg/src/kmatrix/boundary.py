"""
Frame Generator on the Boundary

U_λ = (i/8)((−2ω_y, e^ω λ⁻¹ + e^{−ω}), (e^{−ω} + e^ω λ, 2ω_y))

and the conjugation identity

    K U_λ − U_{λ⁻¹} K = (i/2)(λ⁻¹ − λ)(ω_y − (e^ω A + e^{−ω} B))·J,

which ties K-symmetry of the frame to the boundary condition.
"""

import numpy as np

from src.loops import LaurentMatrix
from .kmatrix import KMatrix, k_eval
from .products import J


def u_laurent(omega: float, omega_y: float) -> LaurentMatrix:
    ew, emw = np.exp(omega), np.exp(-omega)
    blocks = (1j / 8) * np.array([
        [[0, ew], [0, 0]],
        [[-2 * omega_y, emw], [emw, 2 * omega_y]],
        [[0, 0], [ew, 0]],
    ], dtype=complex)
    return LaurentMatrix(-1, blocks)


def u_matrix(omega: float, omega_y: float, lam) -> np.ndarray:
    return u_laurent(omega, omega_y).evaluate(lam)


def lemma_u_residual(K: KMatrix, omega: float, omega_y: float, lam) -> float:
    """Deviation from the U-conjugation identity at the given λ."""
    lam = np.asarray(lam, dtype=complex)
    k = k_eval(K, lam)
    lhs = k @ u_matrix(omega, omega_y, lam) - u_matrix(omega, omega_y, 1.0 / lam) @ k
    scale = 0.5j * (1.0 / lam - lam) * (omega_y - (np.exp(omega) * K.A + np.exp(-omega) * K.B))
    rhs = scale[..., None, None] * J
    return float(np.abs(lhs - rhs).max())
