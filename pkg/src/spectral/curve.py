"""
Spectral Curves

For a potential ξ the spectral curve is ν² = −det ξ_λ, compactified over
λ = 0 and λ = ∞. All data is read off the polynomial

    a(λ) = λ·(−det ξ_λ) = λ·(α_λ² + β_λγ_λ).

Finite branch points are the odd-multiplicity roots of a. Multiplicities
come from exact square-free factorization (sympy) when the coefficients are
rational, otherwise from clustering the companion-matrix eigenvalues.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import numpy as np
import sympy
from scipy.linalg import companion, eigvals

from src.loops import LaurentMatrix, LaurentPoly, UnitCircleGrid, determinant
from src.potentials import Potential
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)

CLUSTER_TOL = 1e-8
RATIONAL_DENOMINATOR = 10 ** 5
RATIONAL_TOL = 1e-11

BranchPoint = Tuple[complex, int]


@dataclass
class SpectralCurve:
    """Branch data of ν² = −det ξ_λ.

    ``roots`` keeps every finite nonzero root of a with its multiplicity;
    ``branch_points`` only the odd ones. ``reduced`` is set when even
    multiplicities were removed.
    """

    a: LaurentPoly
    roots: List[BranchPoint]
    branch_points: List[BranchPoint]
    branch_at_zero: bool
    branch_at_infinity: bool
    exact: bool
    reduced: bool = False
    genus: int = field(init=False)

    def __post_init__(self):
        self.genus = genus(self)

    def to_json(self):
        return {
            "coefficients": [[float(c.real), float(c.imag)] for c in self.a.to_float().coeffs],
            "lowest_power": self.a.lo,
            "branch_points": [
                {"root": [float(r.real), float(r.imag)], "multiplicity": m}
                for r, m in self.roots
            ],
            "branch_at_zero": self.branch_at_zero,
            "branch_at_infinity": self.branch_at_infinity,
            "reduced": self.reduced,
            "exact": self.exact,
            "genus": self.genus,
        }


def _laurent_of(xi: Union[Potential, LaurentMatrix]) -> LaurentMatrix:
    return xi.to_laurent() if isinstance(xi, Potential) else xi.to_float()


def _rational_coefficients(coeffs: np.ndarray) -> Optional[List[Fraction]]:
    """Rational approximations of real coefficients, or None if that is not faithful."""
    scale = float(np.abs(coeffs).max())
    if np.abs(coeffs.imag).max() > RATIONAL_TOL * scale:
        return None
    out = []
    for c in coeffs.real:
        frac = Fraction(float(c)).limit_denominator(RATIONAL_DENOMINATOR)
        if abs(float(frac) - c) > RATIONAL_TOL * scale:
            return None
        out.append(frac)
    return out


def cluster_roots(roots: np.ndarray, tol: float = CLUSTER_TOL) -> List[BranchPoint]:
    """Group roots with |r₁ − r₂| ≤ tol·max(1, |r₁|); representatives are cluster means."""
    remaining = list(np.asarray(roots, dtype=complex))
    clusters: List[BranchPoint] = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        for r in list(remaining):
            if abs(r - seed) <= tol * max(1.0, abs(seed)):
                members.append(r)
                remaining.remove(r)
        clusters.append((complex(np.mean(members)), len(members)))
    return clusters


def _float_roots(coeffs: np.ndarray, tol: float) -> List[BranchPoint]:
    if coeffs.size < 2:
        return []
    highest_first = coeffs[::-1]
    return cluster_roots(eigvals(companion(highest_first)), tol)


def _exact_roots(coeffs: List[Fraction]) -> List[BranchPoint]:
    lam = sympy.Symbol("lam")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)],
                      lam, domain=sympy.QQ)
    out: List[BranchPoint] = []
    for factor, mult in poly.sqf_list()[1]:
        if factor.degree() < 1:
            continue
        factor_coeffs = np.array([float(c) for c in factor.all_coeffs()])
        if factor.degree() == 1:
            found = [-factor_coeffs[1] / factor_coeffs[0]]
        else:
            found = eigvals(companion(factor_coeffs))
        out.extend((complex(r), int(mult)) for r in found)
    return out


def spectral_curve(xi: Union[Potential, LaurentMatrix], exact: Optional[bool] = None,
                   tol: float = CLUSTER_TOL) -> SpectralCurve:
    """Branch points and genus of ν² = −det ξ_λ.

    Args:
        xi: potential, or any Laurent matrix with exponents ≥ −1
        exact: True forces square-free factorization, False forces clustering,
            None uses the exact path whenever the coefficients are rational
        tol: relative clustering tolerance

    Raises:
        DomainError: det ξ vanishes identically
    """
    x = _laurent_of(xi)
    a = (-determinant(x)).shift(1).to_float()
    if a.is_zero():
        raise DomainError("degenerate determinant")
    coeffs = a.coeffs
    rational = _rational_coefficients(coeffs)
    use_exact = rational is not None if exact is None else exact
    if use_exact:
        if rational is None:
            rational = [Fraction(float(c.real)) for c in coeffs]
        roots = _exact_roots(rational)
    else:
        roots = _float_roots(coeffs, tol)
    branch_points = [(r, m) for r, m in roots if m % 2 == 1]
    reduced = len(branch_points) != len(roots)
    if reduced:
        logger.debug(f"Removed {len(roots) - len(branch_points)} even-multiplicity roots")
    curve = SpectralCurve(
        a=a,
        roots=roots,
        branch_points=branch_points,
        branch_at_zero=(a.lo - 1) % 2 == 1,
        branch_at_infinity=(a.hi - 1) % 2 == 1,
        exact=use_exact,
        reduced=reduced,
    )
    logger.debug(f"Spectral curve: {len(roots)} finite roots, genus {curve.genus}")
    return curve


def genus(curve: SpectralCurve) -> int:
    """(#odd-order branch points including 0 and ∞)/2 − 1.

    Raises:
        DomainError: odd number of odd-order points
    """
    count = len(curve.branch_points) + int(curve.branch_at_zero) + int(curve.branch_at_infinity)
    if count % 2 == 1:
        raise DomainError("inconsistent branching (clustering tolerance?)")
    return count // 2 - 1


def nu_symmetry_residual(curve: SpectralCurve, d: int) -> float:
    """max_k |a_k − conj(a_{2d−k})|, the coefficient form of ν(λ⁻¹) = λ^{1−d}ν(λ)."""
    a = curve.a.coefficients_on(0, 2 * d)
    return float(np.abs(a - np.conj(a[::-1])).max())


def unit_circle_reality_residual(xi: Union[Potential, LaurentMatrix],
                                 grid: Optional[UnitCircleGrid] = None) -> float:
    """max |Im(−det ξ_λ·λ^{1−d})| over the circle grid."""
    x = _laurent_of(xi)
    d = x.hi
    grid = grid or UnitCircleGrid(64)
    lam = grid.points
    values = -determinant(x).evaluate(lam) * lam ** (1 - d)
    return float(np.abs(values.imag).max())
