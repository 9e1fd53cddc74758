"""
Charts, Off-Diagonal Factorization and Double K-Symmetry

Explicit parametrizations of the K-symmetric potentials of degree 1, 2 and 3,
the factorization ξ = i·p(λ)·core of off-diagonal potentials, and the
intersection of the solution spaces of two K-matrices.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from src.kmatrix import KMatrix, check_sign_condition, product_eta
from src.loops import LaurentMatrix, LaurentPoly, poly_divide
from src.utils.errors import ConstraintError
from .constraints import (
    NullspaceResult,
    RESIDUE_MARGIN,
    ksym_constraints,
    ksym_nullspace,
)
from .potential import (
    Potential,
    ksym_residual,
    potential_assemble,
    potential_blocks,
    split_vector,
)

logger = logging.getLogger(__name__)

FACTORIZATION_TOL = 1e-11
KSYM_PRECONDITION_TOL = 1e-9


def degree1_chart(A: float, B: float, b_m1: float, b_0: float) -> Potential:
    """β = (i·b₋₁, i·b₀), α₀ = −2i(A·b₋₁ + B·b₀).

    Example:
        >>> xi = degree1_chart(1.0, 2.0, 1.0, 0.5)
    """
    alpha = [-2j * (A * b_m1 + B * b_0)]
    beta = [1j * b_m1, 1j * b_0]
    return potential_assemble(1, alpha, beta, meta={"chart": "degree1"})


def degree2_chart(A: float, B: float, b_m1: float, b_1: float) -> Potential:
    """β₋₁ = i·b₋₁, β₁ = i·b₁, β₀ = β₋₁ + β₁ and α₀ = α₁ = −2(Aβ₋₁ + Bβ₁)."""
    beta_m1, beta_1 = 1j * b_m1, 1j * b_1
    a = -2 * (A * beta_m1 + B * beta_1)
    return potential_assemble(2, [a, a], [beta_m1, beta_m1 + beta_1, beta_1],
                              meta={"chart": "degree2"})


def degree3_chart(A: float, B: float, b_m1: float, b_2: float,
                  re_b0: float, im_b0: float, im_b1: float) -> Potential:
    """Degree-3 chart; complex whenever re_b0 ≠ 0.

    β₋₁ = i·b₋₁, β₂ = i·b₂, β₀ = re_b0 + i·im_b0, β₁ = −(A/B)·re_b0 + i·im_b1,
    α₀ = re_b0/(4B) − 2(Aβ₋₁ + Bβ₂), α₂ = −re_b0/(4B) − 2(Aβ₋₁ + Bβ₂),
    α₁ = 2Aβ₂ + 2Bβ₋₁ − 2i(A·im_b0 + B·im_b1).

    Raises:
        ConstraintError: B = 0
    """
    if B == 0:
        raise ConstraintError("degree-3 chart needs B ≠ 0")
    beta_m1, beta_2 = 1j * b_m1, 1j * b_2
    beta_0 = complex(re_b0, im_b0)
    beta_1 = complex(-(A / B) * re_b0, im_b1)
    shared = -2 * (A * beta_m1 + B * beta_2)
    alpha = [
        re_b0 / (4 * B) + shared,
        2 * A * beta_2 + 2 * B * beta_m1 - 2j * (A * im_b0 + B * im_b1),
        -re_b0 / (4 * B) + shared,
    ]
    return potential_assemble(3, alpha, [beta_m1, beta_0, beta_1, beta_2],
                              meta={"chart": "degree3"})


def imaginary_alpha_from_beta(beta: Sequence[complex], A: float, B: float) -> np.ndarray:
    """α₀..α_{d−1} of the imaginary potential with the given β₋₁..β_{d−1}.

    Runs the recursion
        i·Im[α_{k+1} − α_{k−1}] = −2A(β_k − β_{d−k−1}) − 2B(β_{d−k−2} − β_{k−1})
    upward from α₋₂ = α₋₁ = 0 for k = −1..d−2.
    """
    beta = np.asarray(beta, dtype=complex)
    d = beta.size - 1

    def b(k: int) -> complex:
        return complex(beta[k + 1]) if -1 <= k <= d - 1 else 0j

    alpha = {-2: 0j, -1: 0j}
    for k in range(-1, d - 1):
        rhs = -2 * A * (b(k) - b(d - k - 1)) - 2 * B * (b(d - k - 2) - b(k - 1))
        alpha[k + 1] = 1j * (alpha[k - 1].imag + rhs.imag)
    return np.array([alpha[k] for k in range(d)])


def offdiag_core(K: KMatrix) -> LaurentMatrix:
    """i·((0, λ⁻¹ − A/B), (−A/B + λ, 0))."""
    if K.B == 0:
        raise ConstraintError("factorization core undefined for B=0")
    c = K.A / K.B
    blocks = 1j * np.array([
        [[0, 1], [0, 0]],
        [[0, -c], [-c, 0]],
        [[0, 0], [1, 0]],
    ], dtype=complex)
    return LaurentMatrix(-1, blocks)


@dataclass
class FactorizationResult:
    """ξ = i·p(λ)·core with p real of degree d − 1."""

    p: LaurentPoly
    core: LaurentMatrix
    remainder: float
    residual: float

    def product(self) -> LaurentMatrix:
        return self.core * self.p

    def to_json(self):
        return {
            "p": [float(c.real) for c in self.p.coeffs],
            "remainder": self.remainder,
            "residual": self.residual,
        }


def offdiag_factorize(xi: Potential, K: KMatrix) -> FactorizationResult:
    """Long division of an off-diagonal K-symmetric potential by the core.

    With b = Im β: p₀ = b₋₁ and p_k = b_{k−1} + (A/B)·p_{k−1}; the remainder
    is b_{d−1} + (A/B)·p_{d−1}.

    Raises:
        ConstraintError: B = 0, nonzero diagonal, or xi not K-symmetric
    """
    if K.B == 0:
        raise ConstraintError("factorization core undefined for B=0")
    if not xi.is_offdiagonal():
        raise ConstraintError("potential not off-diagonal")
    if ksym_residual(xi, K) > KSYM_PRECONDITION_TOL:
        raise ConstraintError("input not K-symmetric")
    c = K.A / K.B
    b = xi.beta.imag
    p = np.zeros(xi.d)
    p[0] = b[0]
    for k in range(1, xi.d):
        p[k] = b[k] + c * p[k - 1]
    remainder = abs(b[xi.d] + c * p[xi.d - 1])
    poly = LaurentPoly(0, p)
    core = offdiag_core(K)
    residual = (core * poly - xi.to_laurent()).max_abs()
    if remainder > FACTORIZATION_TOL or residual > FACTORIZATION_TOL:
        logger.warning(f"Off-diagonal factorization residual {residual:.2e}, remainder {remainder:.2e}")
    return FactorizationResult(poly, core, float(remainder), float(residual))


def _palindromic_real(d: int, rng: np.random.Generator) -> np.ndarray:
    half = (d + 1) // 2
    coeffs = rng.integers(-16, 17, size=half) / 16.0
    coeffs[0] = rng.integers(9, 24) / 16.0
    return np.concatenate([coeffs, coeffs[: d - half][::-1]])


def potential_from_laurent(x: LaurentMatrix, meta: Optional[dict] = None) -> Potential:
    """Read α, β off a potential-shaped Laurent matrix (exponents −1..d)."""
    if x.lo < -1:
        raise ConstraintError("Laurent matrix has exponents below −1")
    d = x.hi
    blocks = x.to_float().blocks_on(-1, d)
    alpha = blocks[1:d + 1, 0, 0]
    beta = blocks[:d + 1, 0, 1]
    return potential_assemble(d, alpha, beta, tol=1e-9, meta=meta)


def offdiag_sample(d: int, K: KMatrix, seed: int) -> Potential:
    """Random off-diagonal K-symmetric potential i·p(λ)·core of degree d.

    p is real and palindromic of degree d − 1 with coefficients in (1/16)ℤ
    and p₀ ∈ (1/2, 3/2), so Im β₋₁ = p₀ > 0.
    """
    if d < 1:
        raise ConstraintError("degree must be at least 1")
    rng = np.random.default_rng(seed)
    p = LaurentPoly(0, _palindromic_real(d, rng))
    xi = potential_from_laurent(offdiag_core(K) * p,
                                meta={"seed": int(seed), "A": K.A, "B": K.B, "kind": "offdiag"})
    logger.debug(f"Off-diagonal sample d={d}, seed={seed}")
    return xi


def potential_scale(xi: Potential, p) -> Potential:
    """p(λ)·ξ for a real palindromic polynomial p with p(0) > 0.

    Raises:
        ConstraintError: p is not real palindromic with nonnegative exponents
    """
    poly = p if isinstance(p, LaurentPoly) else LaurentPoly(0, p)
    coeffs = poly.to_float().coeffs
    if (poly.is_zero() or poly.lo != 0 or np.abs(coeffs.imag).max() > 1e-12
            or not np.allclose(coeffs, coeffs[::-1], atol=1e-12) or coeffs[0].real <= 0):
        raise ConstraintError("scaling polynomial must be real and palindromic")
    return potential_from_laurent(xi.to_laurent() * poly, meta=dict(xi.meta, scaled=True))


@dataclass
class IntersectionResult:
    """Common solutions of two K-symmetry systems and their η-factors."""

    basis: np.ndarray
    dimension: int
    eta: LaurentMatrix
    factors: List[LaurentPoly] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)
    admissible: bool = False

    def elements(self, d: int) -> List[LaurentMatrix]:
        out = []
        for col in self.basis.T:
            alpha, beta = split_vector(d, col)
            out.append(LaurentMatrix(-1, potential_blocks(d, alpha, beta)))
        return out


def _eta_divisor(eta: LaurentMatrix):
    for i, j in ((0, 1), (0, 0)):
        entry = eta.entry(i, j)
        if not entry.is_zero():
            return (i, j), entry
    raise ConstraintError("η vanishes identically")


def double_ksym_intersect(d: int, K0: KMatrix, K1: KMatrix, exact: bool = True) -> IntersectionResult:
    """Potentials of degree d that are K₀- and K₁-symmetric.

    Every element is r(λ)·η with η from the product decomposition; r is found
    by polynomial division on one entry and checked on the whole matrix.

    Raises:
        ConstraintError: sign condition violated or K₀ = K₁
    """
    check_sign_condition(K0, K1)
    if K0 == K1:
        raise ConstraintError("K0 and K1 coincide")
    system = ksym_constraints(d, K0, exact=exact).stacked(ksym_constraints(d, K1, exact=exact))
    nullspace: NullspaceResult = ksym_nullspace(system)
    eta = product_eta(K0, K1)
    (i, j), divisor = _eta_divisor(eta)
    result = IntersectionResult(nullspace.basis, nullspace.dimension, eta)
    for x in result.elements(d):
        factor, _ = poly_divide(x.entry(i, j), divisor)
        result.factors.append(factor)
        result.residuals.append((eta * factor - x).max_abs())
    im_idx = system.index("Im beta_-1")
    result.admissible = bool(
        nullspace.dimension > 0 and np.abs(nullspace.basis[im_idx]).max() >= RESIDUE_MARGIN
    )
    logger.debug(f"Double K-symmetry d={d}: dimension {nullspace.dimension}, "
                 f"admissible={result.admissible}")
    return result
