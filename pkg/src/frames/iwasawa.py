"""
Iwasawa Factorization on the Unit Circle

Φ = F·B with F unitary on |λ| = 1 and B holomorphic in the disk, B(0)
upper triangular with positive diagonal.

With G = B⁻¹ the product P·G (P = Φ*Φ) equals B* and so carries only
nonpositive Fourier modes. Truncating G to modes 0..N this is the block
Toeplitz system

    Σ_l P_{m−l} X_l = δ_{m0}·𝟙,   m = 0..N,   G_l = X_l·B₀*,

which is Hermitian positive definite and solved by Cholesky. B₀ is the
upper Cholesky factor of X₀⁻¹.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, cholesky, expm

from src.loops import LoopSample, UnitCircleGrid, fourier_blocks
from src.potentials import Potential
from src.utils.errors import DomainError, FactorizationError

logger = logging.getLogger(__name__)

DEFAULT_TRUNCATION = 32
RESIDUAL_WARNING = 1e-6


@dataclass
class IwasawaFactors:
    """F, B on the circle grid plus the residuals of the factorization.

    ``b0`` is the λ⁰ coefficient of B (upper triangular, positive diagonal).
    """

    F: LoopSample
    B: LoopSample
    b0: np.ndarray
    N: int
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def rho(self) -> float:
        return float(self.b0[0, 0].real)

    @property
    def flagged(self) -> bool:
        return max(self.residuals.values()) > RESIDUAL_WARNING


def holomorphic_frame(xi: Potential, z: complex, grid: UnitCircleGrid) -> LoopSample:
    """Φ(λ_j) = exp(z·ξ(λ_j)) on every grid point."""
    values = xi.evaluate(grid.points)
    return LoopSample(grid, expm(complex(z) * values))


def toeplitz_system(Phi: LoopSample, N: int) -> np.ndarray:
    """Block Toeplitz matrix (P_{m−l}), m, l = 0..N, of P = Φ*Φ."""
    P = Phi.dagger() @ Phi
    blocks = fourier_blocks(P)
    n = Phi.grid.n
    T = np.zeros((2 * (N + 1), 2 * (N + 1)), dtype=complex)
    for m in range(N + 1):
        for l in range(N + 1):
            T[2 * m:2 * m + 2, 2 * l:2 * l + 2] = blocks[(m - l) % n]
    # Hermitian up to aliasing round-off
    return 0.5 * (T + T.conj().T)


def _rhs(N: int) -> np.ndarray:
    e0 = np.zeros((2 * (N + 1), 2), dtype=complex)
    e0[:2] = np.eye(2)
    return e0


def _assemble(Phi: LoopSample, X: np.ndarray, N: int) -> IwasawaFactors:
    grid = Phi.grid
    x0 = X[:2]
    try:
        b0 = cholesky(np.linalg.inv(x0), lower=False)
    except LinAlgError as exc:
        raise FactorizationError("increase N or grid") from exc
    coeffs = X.reshape(N + 1, 2, 2) @ b0.conj().T
    lam = grid.points
    G = np.zeros((grid.n, 2, 2), dtype=complex)
    for k in range(N + 1):
        G += coeffs[k] * (lam ** k)[:, None, None]
    F = LoopSample(grid, Phi.values @ G)
    B = LoopSample(grid, np.linalg.inv(G))

    ident = np.eye(2)
    unitarity = float(np.abs(F.dagger().values @ F.values - ident).max())
    b_blocks = fourier_blocks(B)
    negative = grid.frequencies < 0
    analyticity = float(np.abs(b_blocks[negative]).max()) if negative.any() else 0.0
    nonneg = np.where(~negative)[0]
    b_trunc = np.einsum("kab,jk->jab", b_blocks[nonneg], np.power.outer(lam, grid.frequencies[nonneg]))
    reconstruction = float(np.abs(F.values @ b_trunc - Phi.values).max())
    residuals = {"unitarity": unitarity, "analyticity": analyticity, "reconstruction": reconstruction}
    factors = IwasawaFactors(F, B, b0, N, residuals)
    if factors.flagged:
        logger.warning(f"Iwasawa residuals above {RESIDUAL_WARNING:g}: {residuals}")
    return factors


def iwasawa_factor(Phi: LoopSample, N: int = DEFAULT_TRUNCATION) -> IwasawaFactors:
    """Split Φ into unitary and positive parts by block Toeplitz Cholesky.

    Args:
        Phi: nonsingular loop sample
        N: number of positive Fourier modes kept for B⁻¹ (grid size ≥ 4N)

    Returns:
        IwasawaFactors with unitarity, analyticity and reconstruction residuals

    Raises:
        DomainError: grid too small for N
        FactorizationError: Toeplitz Gram matrix not positive definite

    Example:
        >>> grid = UnitCircleGrid(128)
        >>> factors = iwasawa_factor(holomorphic_frame(vacuum_potential(), 0.3 + 0.2j, grid), 32)
    """
    if N < 1 or Phi.grid.n < 4 * N:
        raise DomainError(f"grid of {Phi.grid.n} points too small for N={N}")
    T = toeplitz_system(Phi, N)
    try:
        factor = cho_factor(T, lower=True)
    except LinAlgError as exc:
        raise FactorizationError("increase N or grid") from exc
    X = cho_solve(factor, _rhs(N))
    return _assemble(Phi, X, N)


def iwasawa_dense(Phi: LoopSample, N: int) -> IwasawaFactors:
    """Same factorization through a dense solve of the Toeplitz system (oracle)."""
    if N < 1 or Phi.grid.n < 4 * N:
        raise DomainError(f"grid of {Phi.grid.n} points too small for N={N}")
    X = np.linalg.solve(toeplitz_system(Phi, N), _rhs(N))
    return _assemble(Phi, X, N)
