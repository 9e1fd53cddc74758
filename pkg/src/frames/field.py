"""
Domain Grids and Extended-Frame Fields

A FrameField holds the Iwasawa factors of Φ(z) = exp(zξ) at every point
z = x + iy of a uniform rectangular grid.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from src.loops import LoopSample, UnitCircleGrid
from src.potentials import Potential
from src.utils.errors import CMCError, GridError
from .iwasawa import DEFAULT_TRUNCATION, IwasawaFactors, holomorphic_frame, iwasawa_factor

logger = logging.getLogger(__name__)

SNAP_TOL = 1e-9


@dataclass(frozen=True)
class DomainGrid:
    """Uniform nx × ny grid over x_range × y_range.

    When 0 lies in y_range the rows are shifted by less than h_y/2 so that
    y = 0 is a grid row.
    """

    x_range: Tuple[float, float] = (-1.0, 1.0)
    y_range: Tuple[float, float] = (-1.0, 1.0)
    nx: int = 64
    ny: int = 64

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise GridError(f"domain grid needs at least 3x3 points, got {self.nx}x{self.ny}")
        if self.x_range[1] <= self.x_range[0] or self.y_range[1] <= self.y_range[0]:
            raise GridError("domain ranges must be increasing")

    @property
    def h_x(self) -> float:
        return (self.x_range[1] - self.x_range[0]) / (self.nx - 1)

    @property
    def h_y(self) -> float:
        return (self.y_range[1] - self.y_range[0]) / (self.ny - 1)

    @property
    def xs(self) -> np.ndarray:
        return self.x_range[0] + self.h_x * np.arange(self.nx)

    @property
    def ys(self) -> np.ndarray:
        y0, y1 = self.y_range
        h = self.h_y
        if y0 <= 0.0 <= y1:
            k0 = int(round(-y0 / h))
            return h * (np.arange(self.ny) - k0)
        return y0 + h * np.arange(self.ny)

    @property
    def points(self) -> np.ndarray:
        """z = x + iy, shape (ny, nx)."""
        return self.xs[None, :] + 1j * self.ys[:, None]

    def row_index(self, y: float, exact: bool = False) -> int:
        """Index of the grid row nearest to y.

        Raises:
            GridError: y outside the grid, or (exact=True) not a grid row
        """
        ys = self.ys
        idx = int(np.argmin(np.abs(ys - y)))
        snap = abs(ys[idx] - y)
        if snap > 0.5 * self.h_y + SNAP_TOL:
            raise GridError(f"no grid row near y={y}")
        if snap > SNAP_TOL:
            if exact:
                raise GridError(f"grid has no row at y={y}")
            logger.warning(f"y={y} snapped to grid row y={ys[idx]:.6g}")
        return idx

    def column_index(self, x: float) -> int:
        return int(np.argmin(np.abs(self.xs - x)))


@dataclass
class FrameField:
    """F, B samples over a DomainGrid; arrays have shape (ny, nx, n, 2, 2)."""

    xi: Potential
    domain: DomainGrid
    grid: UnitCircleGrid
    N: int
    F: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)
    b0: np.ndarray = field(repr=False)
    residuals: Dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def rho(self) -> np.ndarray:
        """(1,1) entry of B at λ = 0, shape (ny, nx)."""
        return self.b0[..., 0, 0].real

    def frame(self, iy: int, ix: int) -> LoopSample:
        return LoopSample(self.grid, self.F[iy, ix])

    def positive(self, iy: int, ix: int) -> LoopSample:
        return LoopSample(self.grid, self.B[iy, ix])

    def phi(self, iy: int, ix: int) -> LoopSample:
        return LoopSample(self.grid, self.F[iy, ix] @ self.B[iy, ix])

    def max_residual(self, name: str) -> float:
        return float(self.residuals[name].max())


def frame_field(xi: Potential, domain: DomainGrid, grid: Optional[UnitCircleGrid] = None,
                N: int = DEFAULT_TRUNCATION) -> FrameField:
    """Iwasawa-factor exp(zξ) at every domain point.

    Raises:
        FactorizationError: with the failing grid location in the message
    """
    grid = grid or UnitCircleGrid(4 * N)
    z = domain.points
    ny, nx = z.shape
    F = np.empty((ny, nx, grid.n, 2, 2), dtype=complex)
    B = np.empty_like(F)
    b0 = np.empty((ny, nx, 2, 2), dtype=complex)
    names = ("unitarity", "analyticity", "reconstruction")
    residuals = {name: np.zeros((ny, nx)) for name in names}
    for iy in range(ny):
        for ix in range(nx):
            try:
                factors: IwasawaFactors = iwasawa_factor(holomorphic_frame(xi, z[iy, ix], grid), N)
            except CMCError as exc:
                raise type(exc)(f"{exc} at z={z[iy, ix]:.4g}") from exc
            F[iy, ix] = factors.F.values
            B[iy, ix] = factors.B.values
            b0[iy, ix] = factors.b0
            for name in names:
                residuals[name][iy, ix] = factors.residuals[name]
    logger.info(f"✓ Frame field on {ny}x{nx} grid (N={N}, {grid.n} circle points), "
                f"max unitarity residual {residuals['unitarity'].max():.2e}")
    return FrameField(xi, domain, grid, N, F, B, b0, residuals)
