"""
K-Matrix Spectral Theory

For real boundary constants (A, B) the K-matrix is

    K(λ) = ((4A − 4Bλ, λ − λ⁻¹), (λ − λ⁻¹, 4A − 4Bλ⁻¹)).

This module gives its roots, kernels, eigen-decomposition and the
residues of K⁻¹ at the four roots of det K.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import companion

from src.loops import LaurentMatrix, LaurentPoly, determinant, exact_scalar
from src.utils.errors import DegenerateKMatrixError, DomainError

logger = logging.getLogger(__name__)

ROOT_DEGENERACY_TOL = 1e-8
POLE_EXCLUSION_RADIUS = 1e-2


@dataclass(frozen=True)
class KMatrix:
    """Boundary constants (A, B) of the condition ω_y = e^ω A + e^{−ω} B.

    ``A_exact``/``B_exact`` optionally keep the rational values the
    constants were given as; exact rank computations use them.

    Example:
        >>> K = KMatrix(1.0, 2.0)
        >>> k_eval(K, 1.0)  # 4(A − B)·𝟙
    """

    A: float
    B: float
    A_exact: Optional[Fraction] = field(default=None, compare=False, repr=False)
    B_exact: Optional[Fraction] = field(default=None, compare=False, repr=False)

    @classmethod
    def from_rational(cls, a, b) -> "KMatrix":
        """Build from rationals or strings such as "1/3"."""
        fa, fb = Fraction(a), Fraction(b)
        return cls(float(fa), float(fb), fa, fb)

    @property
    def s_a(self) -> float:
        return float(np.sqrt(4.0 * self.A ** 2 + 1.0))

    @property
    def s_b(self) -> float:
        return float(np.sqrt(4.0 * self.B ** 2 + 1.0))

    def laurent(self, exact: bool = False) -> LaurentMatrix:
        """K as a Laurent matrix with exponents −1..1."""
        a, b = self.A, self.B
        if exact:
            a = exact_scalar(self.A_exact if self.A_exact is not None else self.A)
            b = exact_scalar(self.B_exact if self.B_exact is not None else self.B)
        blocks = [
            [[0, -1], [-1, -4 * b]],
            [[4 * a, 0], [0, 4 * a]],
            [[-4 * b, 1], [1, 0]],
        ]
        return LaurentMatrix(-1, blocks, exact=exact)

    def __call__(self, lam):
        return k_eval(self, lam)


def k_eval(K: KMatrix, lam) -> np.ndarray:
    """K(λ) for scalar λ (shape (2, 2)) or an array of λ (shape (..., 2, 2))."""
    lam = np.asarray(lam, dtype=complex)
    if np.any(lam == 0):
        raise DomainError("λ = 0 is outside the domain of K")
    s = lam - 1.0 / lam
    out = np.empty(lam.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 4 * K.A - 4 * K.B * lam
    out[..., 0, 1] = s
    out[..., 1, 0] = s
    out[..., 1, 1] = 4 * K.A - 4 * K.B / lam
    return out


def k_det(K: KMatrix) -> LaurentPoly:
    return determinant(K.laurent())


def k_inverse(K: KMatrix, lam) -> np.ndarray:
    """K(λ)⁻¹ = adj K(λ) / det K(λ) pointwise."""
    k = k_eval(K, lam)
    adj = np.empty_like(k)
    adj[..., 0, 0] = k[..., 1, 1]
    adj[..., 1, 1] = k[..., 0, 0]
    adj[..., 0, 1] = -k[..., 0, 1]
    adj[..., 1, 0] = -k[..., 1, 0]
    det = k[..., 0, 0] * k[..., 1, 1] - k[..., 0, 1] * k[..., 1, 0]
    return adj / det[..., None, None]


@dataclass(frozen=True)
class RootQuadruple:
    """The four roots ϱ, r, ϱ⁻¹, r⁻¹ of det K (the null set)."""

    varrho: complex
    r: complex
    varrho_inv: complex
    r_inv: complex
    degenerate: bool

    def as_array(self) -> np.ndarray:
        return np.array([self.varrho, self.r, self.varrho_inv, self.r_inv], dtype=complex)

    def to_json(self) -> Dict:
        return {
            "varrho": _pair(self.varrho),
            "r": _pair(self.r),
            "varrho_inv": _pair(self.varrho_inv),
            "r_inv": _pair(self.r_inv),
            "degenerate": self.degenerate,
        }


def _pair(z: complex) -> List[float]:
    z = complex(z)
    return [z.real, z.imag]


def _roots_coincide(roots: np.ndarray, tol: float = ROOT_DEGENERACY_TOL) -> bool:
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) <= tol * max(1.0, abs(roots[i])):
                return True
    return False


def k_roots(K: KMatrix) -> RootQuadruple:
    """Closed-form roots of det K; coinciding roots are flagged, not raised."""
    sa, sb = K.s_a, K.s_b
    varrho = (2 * K.A - sa) / (2 * K.B + sb)
    r = (2 * K.A + sa) / (2 * K.B + sb)
    varrho_inv = (2 * K.A + sa) / (2 * K.B - sb)
    r_inv = (2 * K.A - sa) / (2 * K.B - sb)
    roots = np.array([varrho, r, varrho_inv, r_inv], dtype=complex)
    degenerate = _roots_coincide(roots)
    if degenerate:
        logger.debug(f"Degenerate root quadruple for A={K.A}, B={K.B}")
    return RootQuadruple(complex(varrho), complex(r), complex(varrho_inv), complex(r_inv), degenerate)


def det_quartic(K: KMatrix) -> np.ndarray:
    """Coefficients (highest first) of −λ² det K(λ)."""
    ab = 16.0 * K.A * K.B
    return np.array([1.0, ab, -2.0 * (8 * K.A ** 2 + 8 * K.B ** 2 + 1), ab, 1.0])


def k_roots_companion(K: KMatrix) -> np.ndarray:
    """Roots of −λ² det K from the companion matrix, sorted."""
    roots = np.linalg.eigvals(companion(det_quartic(K)))
    return np.sort_complex(roots.astype(complex))


def k_null_set(K: KMatrix) -> np.ndarray:
    """The null set {ϱ, r, ϱ⁻¹, r⁻¹}, sorted."""
    return np.sort_complex(k_roots(K).as_array())


def near_null_set(K: KMatrix, lam, radius: float = POLE_EXCLUSION_RADIUS) -> np.ndarray:
    """Mask of λ within ``radius`` of a root of det K."""
    lam = np.asarray(lam, dtype=complex)
    roots = k_roots(K).as_array()
    dist = np.abs(lam[..., None] - roots).min(axis=-1)
    return dist < radius


def _unit(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    first = v[np.flatnonzero(np.abs(v) > 1e-15)[0]]
    return v if first > 0 else -v


def _require_simple(K: KMatrix) -> RootQuadruple:
    roots = k_roots(K)
    if roots.degenerate:
        raise DegenerateKMatrixError("degenerate K-matrix")
    return roots


def k_kernels(K: KMatrix) -> Tuple[np.ndarray, np.ndarray]:
    """Unit kernels (ker K(ϱ) = ker K(r), ker K(ϱ⁻¹) = ker K(r⁻¹)).

    Both are independent of A and orthogonal to each other.
    """
    _require_simple(K)
    sb = K.s_b
    return _unit([-sb - 2 * K.B, 1.0]), _unit([sb - 2 * K.B, 1.0])


@dataclass
class KEigenSystem:
    """Eigenvalues μ∓ (Laurent, exponents −1..1) and eigenvectors v, v⊥."""

    mu_minus: LaurentPoly
    mu_plus: LaurentPoly
    v: np.ndarray
    v_perp: np.ndarray
    V: np.ndarray = field(repr=False)

    def diagonalize(self, lam) -> np.ndarray:
        """V·diag(μ₋(λ), μ₊(λ))·V⁻¹."""
        lam = np.asarray(lam, dtype=complex)
        d = np.zeros(lam.shape + (2, 2), dtype=complex)
        d[..., 0, 0] = self.mu_minus(lam)
        d[..., 1, 1] = self.mu_plus(lam)
        return self.V @ d @ np.linalg.inv(self.V)


def k_eigen(K: KMatrix) -> KEigenSystem:
    """μ∓ = 4A − 2B(λ+λ⁻¹) ∓ √(4B²+1)(λ−λ⁻¹) with K v = μ₋ v, K v⊥ = μ₊ v⊥."""
    sb = K.s_b
    mu_minus = LaurentPoly(-1, [-2 * K.B + sb, 4 * K.A, -2 * K.B - sb])
    mu_plus = LaurentPoly(-1, [-2 * K.B - sb, 4 * K.A, -2 * K.B + sb])
    v = _unit([-sb - 2 * K.B, 1.0])
    v_perp = _unit([sb - 2 * K.B, 1.0])
    V = np.column_stack([v, v_perp])
    return KEigenSystem(mu_minus, mu_plus, v, v_perp, V)


@dataclass
class ResidueSet:
    """Residues of K⁻¹ at ϱ, r, ϱ⁻¹, r⁻¹ (in that order)."""

    poles: np.ndarray
    scalar: np.ndarray
    residues: np.ndarray = field(repr=False)

    def pairs(self) -> List[Tuple[complex, np.ndarray]]:
        return list(zip(self.poles, self.residues))


def scalar_residues(K: KMatrix) -> np.ndarray:
    """Residues of μ₋⁻¹ at ϱ, r and of μ₊⁻¹ at ϱ⁻¹, r⁻¹."""
    sa, sb = K.s_a, K.s_b
    ratio = K.A / sa
    return np.array([
        (0.5 - ratio) * (2 * K.B - sb),
        (0.5 + ratio) * (2 * K.B - sb),
        (0.5 + ratio) * (2 * K.B + sb),
        (0.5 - ratio) * (2 * K.B + sb),
    ])


def k_inverse_residues(K: KMatrix) -> ResidueSet:
    """res[K⁻¹, λ₀] = V·diag(res μ∓⁻¹)·V⁻¹; rank one at each root."""
    roots = _require_simple(K)
    eig = k_eigen(K)
    v_inv = np.linalg.inv(eig.V)
    scal = scalar_residues(K)
    residues = np.empty((4, 2, 2), dtype=complex)
    for idx, res in enumerate(scal):
        diag = np.zeros((2, 2))
        # μ₋ vanishes at ϱ, r; μ₊ at ϱ⁻¹, r⁻¹
        diag[0 if idx < 2 else 1, 0 if idx < 2 else 1] = res
        residues[idx] = eig.V @ diag @ v_inv
    return ResidueSet(roots.as_array(), scal, residues)


def contour_residue(fn: Callable[[np.ndarray], np.ndarray], center: complex,
                    radius: float, n_points: int = 256) -> np.ndarray:
    """(1/2πi)∮ fn dλ on a circle around ``center`` by the trapezoid rule."""
    theta = 2 * np.pi * np.arange(n_points) / n_points
    offsets = radius * np.exp(1j * theta)
    values = fn(center + offsets)
    weights = offsets / n_points
    return np.tensordot(weights, values, axes=(0, 0))


def residue_oracle(K: KMatrix, n_points: int = 256) -> np.ndarray:
    """Residues of K⁻¹ at the four roots by contour quadrature."""
    poles = _require_simple(K).as_array()
    out = np.empty((4, 2, 2), dtype=complex)
    for idx, pole in enumerate(poles):
        others = np.delete(np.append(poles, 0.0), idx)
        radius = 0.25 * np.abs(others - pole).min()
        out[idx] = contour_residue(lambda lam: k_inverse(K, lam), pole, radius, n_points)
    return out


def row_reduce(m: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Reduced row echelon form of a 2x2 matrix."""
    m = np.array(m, dtype=complex)
    rows = [r for r in m if np.abs(r).max() > tol]
    if not rows:
        return np.zeros((2, 2), dtype=complex)
    first = rows[0]
    pivot = np.flatnonzero(np.abs(first) > tol)[0]
    first = first / first[pivot]
    if len(rows) == 1 or np.abs(np.linalg.det(m)) <= tol * max(1.0, np.abs(m).max() ** 2):
        return np.vstack([first, np.zeros(2)])
    return np.eye(2, dtype=complex)


def residue_kernel_residuals(K: KMatrix) -> np.ndarray:
    """‖res[K⁻¹, λ₀]·w‖ for w spanning ker K(λ₀⁻¹), per root.

    Also includes ‖K(λ₀⁻¹)w‖ so a single max states the kernel swap.
    """
    res = k_inverse_residues(K)
    v, v_perp = k_kernels(K)
    out = []
    for idx, (pole, r) in enumerate(res.pairs()):
        w = v_perp if idx < 2 else v
        out.append(max(np.linalg.norm(r @ w), np.linalg.norm(k_eval(K, 1.0 / pole) @ w)))
    return np.array(out)


def kernel_eigen_check(xi: LaurentMatrix, K: KMatrix) -> Dict[str, Dict[str, float]]:
    """Check that ker K(λ₀) is an eigenspace of ξ(λ₀) at the four roots.

    For each root the deviation |det[w, ξ(λ₀)w]| / max(1, ‖ξ(λ₀)w‖) is reported
    (w = v at ϱ, r and w = v⊥ at ϱ⁻¹, r⁻¹) together with the eigenvalue
    ⟨w, ξ(λ₀)w⟩. The sign of that eigenvalue at ϱ versus r is not fixed.
    """
    roots = _require_simple(K)
    v, v_perp = k_kernels(K)
    names = ["varrho", "r", "varrho_inv", "r_inv"]
    out: Dict[str, Dict[str, float]] = {}
    for idx, (name, pole) in enumerate(zip(names, roots.as_array())):
        w = v if idx < 2 else v_perp
        image = xi.evaluate(pole) @ w
        deviation = abs(w[0] * image[1] - w[1] * image[0]) / max(1.0, float(np.linalg.norm(image)))
        eigenvalue = complex(w @ image)
        out[name] = {
            "deviation": float(deviation),
            "eigenvalue_re": eigenvalue.real,
            "eigenvalue_im": eigenvalue.imag,
        }
    return out
