"""
Finite-Gap Potentials

A degree-d potential is the trace-free Laurent matrix

    ξ_λ = ((α_λ, β_λ), (γ_λ, −α_λ)),   exponents −1..d,

with α_λ = Σ_{k=0}^{d−1} α_k λ^k, β_λ = Σ_{k=−1}^{d−1} β_k λ^k and
γ_k = −conj(β_{d−k−1}). Valid potentials satisfy the reality condition
α_k = −conj(α_{d−k−1}) and the residue condition Re β₋₁ = 0, Im β₋₁ > 0.

JSON form:
    {"degree": d, "A": f, "B": f, "alpha": [[re, im], ...],
     "beta": [[re, im], ...], "meta": {"seed": n, "created": iso-time}}
"""

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from src.kmatrix import KMatrix
from src.loops import LaurentMatrix, UnitCircleGrid, involution_star, laurent_product
from src.utils.errors import ConstraintError

logger = logging.getLogger(__name__)

ASSEMBLY_TOL = 1e-12
KSYM_RANDOM_POINTS = 16


def potential_blocks(d: int, alpha: Sequence, beta: Sequence, exact: bool = False) -> np.ndarray:
    """Coefficient blocks ξ̂_{−1}..ξ̂_d of the potential, shape (d + 2, 2, 2)."""
    dtype = object if exact else complex
    blocks = np.zeros((d + 2, 2, 2), dtype=dtype)
    if exact:
        blocks[...] = sympy.Integer(0)
    conj = sympy.conjugate if exact else np.conj
    for k in range(d):
        blocks[k + 1, 0, 0] = alpha[k]
        blocks[k + 1, 1, 1] = -alpha[k]
    for k in range(-1, d):
        blocks[k + 1, 0, 1] = beta[k + 1]
    for k in range(d + 1):
        # γ_k = −conj(β_{d−k−1}), β_j stored at index j + 1
        blocks[k + 1, 1, 0] = -conj(beta[d - k])
    return blocks


@dataclass
class Potential:
    """Degree-d potential; alpha holds α₀..α_{d−1}, beta holds β₋₁..β_{d−1}."""

    d: int
    alpha: np.ndarray
    beta: np.ndarray
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.alpha = np.asarray(self.alpha, dtype=complex)
        self.beta = np.asarray(self.beta, dtype=complex)

    @property
    def gamma(self) -> np.ndarray:
        """γ₀..γ_d."""
        return np.array([-np.conj(self.beta[self.d - k]) for k in range(self.d + 1)])

    def beta_at(self, k: int) -> complex:
        """β_k with out-of-range indices read as zero."""
        if -1 <= k <= self.d - 1:
            return complex(self.beta[k + 1])
        return 0j

    def alpha_at(self, k: int) -> complex:
        if 0 <= k <= self.d - 1:
            return complex(self.alpha[k])
        return 0j

    def to_laurent(self) -> LaurentMatrix:
        return LaurentMatrix(-1, potential_blocks(self.d, self.alpha, self.beta))

    def evaluate(self, lam) -> np.ndarray:
        return self.to_laurent().evaluate(lam)

    def scale(self) -> float:
        return float(max(np.abs(self.alpha).max(initial=0.0), np.abs(self.beta).max(initial=0.0)))

    def is_offdiagonal(self, tol: float = 1e-12) -> bool:
        return bool(np.abs(self.alpha).max(initial=0.0) <= tol * max(1.0, self.scale()))

    def is_imaginary(self, tol: float = 1e-9) -> bool:
        bound = tol * max(1.0, self.scale())
        return bool(np.abs(self.alpha.real).max(initial=0.0) <= bound
                    and np.abs(self.beta.real).max() <= bound)

    def to_vector(self) -> np.ndarray:
        """Real unknown vector in the order of ``unknown_layout``."""
        parts = []
        for c in list(self.alpha) + list(self.beta):
            parts.extend([c.real, c.imag])
        return np.array(parts)

    def to_json(self, K: Optional[KMatrix] = None) -> Dict[str, Any]:
        return {
            "degree": self.d,
            "A": None if K is None else float(K.A),
            "B": None if K is None else float(K.B),
            "alpha": [[float(c.real), float(c.imag)] for c in self.alpha],
            "beta": [[float(c.real), float(c.imag)] for c in self.beta],
            "meta": dict(self.meta),
        }


def unknown_layout(d: int) -> List[str]:
    """Names of the 4d + 2 real unknowns, in their fixed order."""
    names = []
    for k in range(d):
        names += [f"Re alpha_{k}", f"Im alpha_{k}"]
    for k in range(-1, d):
        names += [f"Re beta_{k}", f"Im beta_{k}"]
    return names


def split_vector(d: int, x: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """(alpha, beta) complex coefficient arrays from a real unknown vector."""
    x = np.asarray(x, dtype=float)
    z = x[0::2] + 1j * x[1::2]
    return z[:d], z[d:]


def potential_assemble(d: int, alpha: Sequence[complex], beta: Sequence[complex],
                       tol: float = ASSEMBLY_TOL, meta: Optional[Dict] = None) -> Potential:
    """Build a validated Potential.

    Args:
        d: degree (≥ 1)
        alpha: α₀..α_{d−1}
        beta: β₋₁..β_{d−1}
        tol: tolerance for reality and Re β₋₁ = 0, relative to the coefficient size

    Raises:
        ConstraintError: wrong lengths, reality or residue condition violated

    Example:
        >>> vac = potential_assemble(1, [0], [0.25j, 0.25j])
    """
    if d < 1:
        raise ConstraintError("degree must be at least 1")
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    if alpha.shape != (d,) or beta.shape != (d + 1,):
        raise ConstraintError(
            f"degree {d} needs {d} alpha and {d + 1} beta coefficients, "
            f"got {alpha.size} and {beta.size}"
        )
    bound = tol * max(1.0, float(np.abs(np.concatenate([alpha, beta])).max()))
    for k in range(d):
        if abs(alpha[k] + np.conj(alpha[d - k - 1])) > bound:
            raise ConstraintError(f"reality condition failed at k={k}")
    if abs(beta[0].real) > bound or beta[0].imag <= 0:
        raise ConstraintError("residue condition failed")
    return Potential(d, alpha, beta, dict(meta or {}))


def vacuum_potential() -> Potential:
    """(i/4)((0, λ⁻¹ + 1), (1 + λ, 0)): the round cylinder, ω ≡ 0."""
    return potential_assemble(1, [0.0], [0.25j, 0.25j], meta={"name": "vacuum"})


def ksym_laurent(x: LaurentMatrix, K: KMatrix) -> LaurentMatrix:
    """K ξ + conj(ξ_λ̄)^t K as a Laurent matrix."""
    k = K.laurent(exact=x.exact)
    return laurent_product(k, x) + laurent_product(involution_star(x), k)


def ksym_residual(xi, K: KMatrix, grid: Optional[UnitCircleGrid] = None) -> float:
    """max ‖Kξ + conj(ξ_λ̄)^t K‖ on the circle grid and 16 points off the circle.

    Accepts a Potential or a Laurent matrix.
    """
    x = xi.to_laurent() if isinstance(xi, Potential) else xi
    grid = grid or UnitCircleGrid(64)
    rng = np.random.default_rng(0)
    radii = rng.uniform(0.5, 2.0, KSYM_RANDOM_POINTS)
    angles = rng.uniform(0.0, 2 * np.pi, KSYM_RANDOM_POINTS)
    lam = np.concatenate([grid.points, radii * np.exp(1j * angles)])
    values = ksym_laurent(x, K).evaluate(lam)
    return float(np.linalg.norm(values, axis=(-2, -1)).max())


def save_potential(path, xi: Potential, K: Optional[KMatrix] = None,
                   seed: Optional[int] = None) -> Path:
    """Write the potential JSON file (parent directories created)."""
    data = xi.to_json(K)
    data["meta"].setdefault("created", datetime.now().isoformat(timespec="seconds"))
    if seed is not None:
        data["meta"]["seed"] = int(seed)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2))
    logger.info(f"✓ Potential (degree {xi.d}) saved to {path}")
    return path


def potential_from_json(data: Dict[str, Any]) -> Tuple[Potential, Optional[KMatrix]]:
    d = int(data["degree"])
    alpha = [complex(re, im) for re, im in data["alpha"]]
    beta = [complex(re, im) for re, im in data["beta"]]
    # float round-off from the writer side is allowed
    xi = potential_assemble(d, alpha, beta, tol=1e-9, meta=data.get("meta", {}))
    K = None
    if data.get("A") is not None and data.get("B") is not None:
        K = KMatrix(float(data["A"]), float(data["B"]))
    return xi, K


def load_potential(path) -> Tuple[Potential, Optional[KMatrix]]:
    """Read a potential JSON file; returns the potential and its K-matrix if stored."""
    data = json.loads(Path(path).read_text())
    xi, K = potential_from_json(data)
    logger.debug(f"Potential loaded from {path} (degree {xi.d})")
    return xi, K
