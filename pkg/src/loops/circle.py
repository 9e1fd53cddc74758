"""
Unit-Circle Sampling

Loops λ ↦ X(λ) on |λ| = 1 are represented by their values on the grid
λ_j = exp(2πi j/n). The grid is closed under λ ↦ λ⁻¹ = conj(λ), which
maps index j to (-j) mod n.
"""

import logging
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from src.utils.errors import DomainError
from .laurent import LaurentMatrix

logger = logging.getLogger(__name__)

DEFAULT_GRID_SIZE = 64


@dataclass(frozen=True)
class UnitCircleGrid:
    """Uniform grid of n points on the unit circle (n a power of two, n ≥ 4)."""

    n: int = DEFAULT_GRID_SIZE

    def __post_init__(self):
        if self.n < 4 or (self.n & (self.n - 1)) != 0:
            raise DomainError(f"circle grid size must be a power of two >= 4, got {self.n}")

    @property
    def points(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.n) / self.n)

    @property
    def inverse_index(self) -> np.ndarray:
        """Index of λ_j⁻¹ (equally conj(λ_j)) for every j."""
        return (-np.arange(self.n)) % self.n

    @property
    def frequencies(self) -> np.ndarray:
        """Integer Fourier exponents in numpy FFT order."""
        return np.rint(np.fft.fftfreq(self.n) * self.n).astype(int)


@dataclass
class LoopSample:
    """2x2 matrix values of a loop on a UnitCircleGrid."""

    grid: UnitCircleGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.n, 2, 2):
            raise ValueError(
                f"loop sample needs shape ({self.grid.n}, 2, 2), got {self.values.shape}"
            )

    def __matmul__(self, other: "LoopSample") -> "LoopSample":
        return LoopSample(self.grid, self.values @ other.values)

    def __sub__(self, other: "LoopSample") -> "LoopSample":
        return LoopSample(self.grid, self.values - other.values)

    def inverse(self) -> "LoopSample":
        """Pointwise matrix inverse."""
        return LoopSample(self.grid, np.linalg.inv(self.values))

    def invert(self) -> "LoopSample":
        """λ ↦ X(λ⁻¹)."""
        return LoopSample(self.grid, self.values[self.grid.inverse_index])

    def star(self) -> "LoopSample":
        """λ ↦ conj(X(λ̄))^t; on the circle λ̄ = λ⁻¹."""
        flipped = self.values[self.grid.inverse_index]
        return LoopSample(self.grid, np.conj(np.swapaxes(flipped, -1, -2)))

    def dagger(self) -> "LoopSample":
        """Pointwise conjugate transpose X(λ)*."""
        return LoopSample(self.grid, np.conj(np.swapaxes(self.values, -1, -2)))

    def det(self) -> np.ndarray:
        return np.linalg.det(self.values)

    def max_norm(self) -> float:
        return float(np.linalg.norm(self.values, axis=(-2, -1)).max())


def circle_sample(x: LaurentMatrix, grid: UnitCircleGrid) -> LoopSample:
    """Evaluate a Laurent matrix on every grid point."""
    return LoopSample(grid, x.evaluate(grid.points))


def fourier_blocks(sample: LoopSample) -> np.ndarray:
    """All n discrete Fourier blocks, c_k at index k mod n.

    c_k = (1/n) Σ_j X(λ_j) λ_j^{-k}, which is numpy's forward FFT.
    """
    return np.fft.fft(sample.values, axis=0) / sample.grid.n


def fourier_coefficients(sample: LoopSample, band: Tuple[int, int]) -> LaurentMatrix:
    """Laurent matrix with the Fourier coefficients on exponents band[0]..band[1].

    Exact for band-limited loops whose exponents lie inside the band.
    """
    lo, hi = int(band[0]), int(band[1])
    n = sample.grid.n
    if hi < lo or max(abs(lo), abs(hi)) > n // 2 or hi - lo + 1 > n:
        raise DomainError("band too wide for grid")
    blocks = fourier_blocks(sample)
    ks = np.arange(lo, hi + 1) % n
    return LaurentMatrix(lo, blocks[ks])


def _symmetric_modes(grid: UnitCircleGrid) -> np.ndarray:
    """Exponents in FFT order with the Nyquist mode dropped (weight 0)."""
    ks = grid.frequencies.astype(float)
    ks[np.abs(ks) == grid.n // 2] = np.nan
    return ks


def loop_evaluate(sample: LoopSample, lam: complex) -> np.ndarray:
    """Trigonometric interpolation of the loop at a point of the circle."""
    blocks = fourier_blocks(sample)
    ks = _symmetric_modes(sample.grid)
    weights = np.where(np.isnan(ks), 0.0, complex(lam) ** np.nan_to_num(ks))
    return np.einsum("k,kij->ij", weights, blocks)


def loop_derivative(sample: LoopSample, lam: complex) -> np.ndarray:
    """∂_λ X at λ by differentiating the Fourier series term by term."""
    blocks = fourier_blocks(sample)
    ks = _symmetric_modes(sample.grid)
    safe = np.nan_to_num(ks)
    weights = np.where(np.isnan(ks), 0.0, safe * complex(lam) ** (safe - 1))
    return np.einsum("k,kij->ij", weights, blocks)


def loop_derivative_sample(sample: LoopSample) -> LoopSample:
    """∂_λ X on every grid point (spectral differentiation)."""
    blocks = fourier_blocks(sample)
    ks = np.nan_to_num(_symmetric_modes(sample.grid))
    # ∂_λ Σ c_k λ^k = λ⁻¹ Σ k c_k λ^k
    scaled = blocks * ks[:, None, None]
    values = np.fft.ifft(scaled * sample.grid.n, axis=0)
    values = values / sample.grid.points[:, None, None]
    return LoopSample(sample.grid, values)
