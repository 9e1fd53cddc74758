"""
K-Symmetry Constraint System

The condition K ξ + conj(ξ_λ̄)^t K ≡ 0 is real-linear in the 4d + 2 real
unknowns (Re/Im α₀..α_{d−1}, Re/Im β₋₁..β_{d−1}). Each unknown's unit
vector is pushed through the Laurent arithmetic and every coefficient of
every entry is split into real and imaginary rows. The reality rows on α
and the row Re β₋₁ = 0 are stacked on top.

Ranks are decided in exact rational arithmetic (sympy DomainMatrix over QQ)
when the system was assembled exactly, otherwise by SVD with cutoff
1e-9·σ_max.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np
import sympy
from scipy.linalg import orth, svd
from sympy.polys.matrices import DomainMatrix

from src.kmatrix import KMatrix
from src.loops import LaurentMatrix
from src.utils.errors import ConstraintError, RankConditionError
from .potential import (
    Potential,
    ksym_laurent,
    potential_assemble,
    potential_blocks,
    split_vector,
    unknown_layout,
)

logger = logging.getLogger(__name__)

SVD_CUTOFF = 1e-9
GAP_RATIO = 1e2
MAX_REJECTIONS = 100
RESIDUE_MARGIN = 1e-3

ALL_ENTRIES = frozenset({(0, 0), (0, 1), (1, 0), (1, 1)})


@dataclass
class ConstraintSystem:
    """Real linear system whose nullspace is the space of K-symmetric potentials.

    ``tags[i]`` names row i as (group, exponent, entry, part) with group one of
    "reality", "residue", "ksym".
    """

    d: int
    K: KMatrix
    layout: List[str]
    rows: np.ndarray = field(repr=False)
    tags: List[Tuple[str, int, Tuple[int, int], str]] = field(repr=False)
    exact_rows: Optional[List[List[sympy.Expr]]] = field(default=None, repr=False)

    @property
    def n_unknowns(self) -> int:
        return 4 * self.d + 2

    @property
    def exact(self) -> bool:
        return self.exact_rows is not None

    def index(self, name: str) -> int:
        return self.layout.index(name)

    def beta_indices(self, part: str) -> List[int]:
        """Positions of the "Re" or "Im" β coordinates."""
        return [i for i, name in enumerate(self.layout) if name.startswith(f"{part} beta")]

    def alpha_indices(self, part: str) -> List[int]:
        return [i for i, name in enumerate(self.layout) if name.startswith(f"{part} alpha")]

    def subsystem(self, entries: Set[Tuple[int, int]]) -> "ConstraintSystem":
        """Keep reality/residue rows and the K-symmetry rows of the given entries."""
        keep = [i for i, tag in enumerate(self.tags) if tag[0] != "ksym" or tag[2] in entries]
        exact_rows = None if self.exact_rows is None else [self.exact_rows[i] for i in keep]
        return ConstraintSystem(self.d, self.K, self.layout, self.rows[keep],
                                [self.tags[i] for i in keep], exact_rows)

    def stacked(self, other: "ConstraintSystem") -> "ConstraintSystem":
        """Both systems at once (same degree, same unknowns)."""
        if other.d != self.d:
            raise ConstraintError("cannot stack systems of different degree")
        exact_rows = None
        if self.exact_rows is not None and other.exact_rows is not None:
            exact_rows = self.exact_rows + other.exact_rows
        return ConstraintSystem(self.d, self.K, self.layout, np.vstack([self.rows, other.rows]),
                                self.tags + other.tags, exact_rows)


def _unit_laurent(d: int, index: int, exact: bool) -> LaurentMatrix:
    """Potential-shaped Laurent matrix of the index-th unit unknown."""
    zero = sympy.Integer(0) if exact else 0j
    one = sympy.Integer(1) if exact else 1.0
    unit = sympy.I if exact else 1j
    coeffs = [zero] * (2 * d + 1)
    coeffs[index // 2] = unit if index % 2 else one
    alpha, beta = coeffs[:d], coeffs[d:]
    return LaurentMatrix(-1, potential_blocks(d, alpha, beta, exact=exact), exact=exact)


def _re_im(c, exact: bool):
    if exact:
        return sympy.re(c), sympy.im(c)
    return c.real, c.imag


def ksym_constraints(d: int, K: KMatrix, exact: bool = True) -> ConstraintSystem:
    """Assemble the real system for degree d and constants (A, B).

    Args:
        d: degree (≥ 1)
        K: boundary constants
        exact: keep a sympy copy of the rows for rational rank decisions

    Returns:
        ConstraintSystem over the unknowns of ``unknown_layout(d)``
    """
    if d < 1:
        raise ConstraintError("degree must be at least 1")
    n = 4 * d + 2
    layout = unknown_layout(d)
    lo, hi = -2, d + 1
    zero = sympy.Integer(0) if exact else 0.0
    one = sympy.Integer(1) if exact else 1.0

    rows: List[List] = []
    tags: List[Tuple[str, int, Tuple[int, int], str]] = []

    # α_k + conj(α_{d−k−1}) = 0
    for k in range(d):
        j = d - k - 1
        if k > j:
            continue
        re_row = [zero] * n
        re_row[2 * k] += one
        re_row[2 * j] += one
        rows.append(re_row)
        tags.append(("reality", k, (0, 0), "re"))
        if k != j:
            im_row = [zero] * n
            im_row[2 * k + 1] += one
            im_row[2 * j + 1] -= one
            rows.append(im_row)
            tags.append(("reality", k, (0, 0), "im"))

    residue_row = [zero] * n
    residue_row[layout.index("Re beta_-1")] = one
    rows.append(residue_row)
    tags.append(("residue", -1, (0, 1), "re"))

    images = []
    for i in range(n):
        images.append(ksym_laurent(_unit_laurent(d, i, exact), K).blocks_on(lo, hi))
    for e in range(lo, hi + 1):
        for a in range(2):
            for b in range(2):
                parts = [_re_im(images[i][e - lo, a, b], exact) for i in range(n)]
                rows.append([p[0] for p in parts])
                tags.append(("ksym", e, (a, b), "re"))
                rows.append([p[1] for p in parts])
                tags.append(("ksym", e, (a, b), "im"))

    float_rows = np.array([[float(c) for c in row] for row in rows], dtype=float)
    logger.debug(f"Constraint system d={d}: {float_rows.shape[0]} rows, {n} unknowns")
    return ConstraintSystem(d, K, layout, float_rows, tags, rows if exact else None)


@dataclass
class NullspaceResult:
    """Orthonormal float basis (columns) and the nullspace dimension."""

    basis: np.ndarray
    dimension: int
    exact: bool
    singular_values: np.ndarray = field(repr=False)


def _domain_matrix(rows: Sequence[Sequence[sympy.Expr]]) -> DomainMatrix:
    return DomainMatrix.from_Matrix(sympy.Matrix(rows)).to_field()


def exact_rank(rows: Sequence[Sequence[sympy.Expr]]) -> int:
    """Rank over the rationals."""
    if not rows:
        return 0
    return int(_domain_matrix(rows).rank())


def exact_nullspace(rows: Sequence[Sequence[sympy.Expr]], n: int) -> np.ndarray:
    """Orthonormal float basis (columns) of the exact nullspace of the rows."""
    if not rows:
        return np.eye(n)
    kernel = _domain_matrix(rows).nullspace().to_Matrix()
    if kernel.rows == 0:
        return np.zeros((n, 0))
    vectors = np.array([[float(c) for c in kernel.row(i)] for i in range(kernel.rows)], dtype=float)
    return orth(vectors.T)


def float_rank(matrix: np.ndarray, cutoff: float = SVD_CUTOFF, check_gap: bool = True) -> int:
    """Numerical rank with singular-value cutoff relative to σ_max.

    Raises:
        RankConditionError: the gap around the cutoff is not pronounced
    """
    if matrix.size == 0:
        return 0
    s = svd(matrix, compute_uv=False)
    if s[0] == 0.0:
        return 0
    threshold = cutoff * s[0]
    rank = int(np.sum(s > threshold))
    # no singular value may sit within a factor GAP_RATIO of the cutoff
    blurred = (s > threshold / GAP_RATIO) & (s < threshold * GAP_RATIO)
    if check_gap and blurred.any():
        raise RankConditionError("rank ill-conditioned, use rational mode")
    return rank


def ksym_nullspace(system: ConstraintSystem, mode: str = "auto") -> NullspaceResult:
    """Nullspace of the constraint system.

    Args:
        system: assembled ConstraintSystem
        mode: "exact", "float" or "auto" (exact whenever the rows are available)
    """
    _, s, vh = svd(system.rows, full_matrices=True)
    use_exact = mode == "exact" or (mode == "auto" and system.exact)
    if use_exact:
        if not system.exact:
            raise RankConditionError("exact rank requested for a float system")
        basis = exact_nullspace(system.exact_rows, system.n_unknowns)
        rank = system.n_unknowns - basis.shape[1]
        numeric = int(np.sum(s > SVD_CUTOFF * s[0])) if s.size else 0
        if numeric != rank:
            logger.warning(f"Float rank {numeric} differs from exact rank {rank} (d={system.d})")
    else:
        rank = float_rank(system.rows)
        basis = vh[rank:].T.copy()
    return NullspaceResult(basis, system.n_unknowns - rank, use_exact, s)


def expected_dimension(d: int) -> int:
    """(3d − 2)/2 for even d, (3d + 1)/2 for odd d."""
    return (3 * d - 2) // 2 if d % 2 == 0 else (3 * d + 1) // 2


def expected_freedom_split(d: int) -> Tuple[int, int]:
    return ((d - 2) // 2, d) if d % 2 == 0 else ((d - 1) // 2, d + 1)


def freedom_split(system: ConstraintSystem, nullspace: Optional[NullspaceResult] = None) -> Tuple[int, int]:
    """Dimensions of the nullspace projected onto Re β and onto Im β."""
    ns = nullspace or ksym_nullspace(system)
    re_rank = float_rank(ns.basis[system.beta_indices("Re")], check_gap=False)
    im_rank = float_rank(ns.basis[system.beta_indices("Im")], check_gap=False)
    return re_rank, im_rank


def beta_projection_rank(system: ConstraintSystem, nullspace: Optional[NullspaceResult] = None) -> int:
    """Rank of the projection onto all β coordinates (equals the dimension when injective)."""
    ns = nullspace or ksym_nullspace(system)
    idx = system.beta_indices("Re") + system.beta_indices("Im")
    return float_rank(ns.basis[idx], check_gap=False)


def _ball_point(rng: np.random.Generator, k: int) -> np.ndarray:
    direction = rng.normal(size=k)
    direction /= np.linalg.norm(direction)
    return direction * rng.uniform() ** (1.0 / k)


def sample_from_nullspace(system: ConstraintSystem, nullspace: NullspaceResult,
                          rng: np.random.Generator, meta: Optional[dict] = None) -> Potential:
    """Random admissible point of the nullspace (Im β₋₁ ≥ 1e-3)."""
    idx = system.index("Im beta_-1")
    for _ in range(MAX_REJECTIONS):
        x = nullspace.basis @ _ball_point(rng, nullspace.dimension)
        if abs(x[idx]) < RESIDUE_MARGIN:
            continue
        if x[idx] < 0:
            x = -x
        x[system.index("Re beta_-1")] = 0.0
        alpha, beta = split_vector(system.d, x)
        return potential_assemble(system.d, alpha, beta, tol=1e-9, meta=meta)
    raise RankConditionError("nullspace has no admissible residue direction")


def ksym_sample(d: int, K: KMatrix, seed: int, exact: bool = True) -> Potential:
    """Seeded random K-symmetric potential of degree d.

    Example:
        >>> xi = ksym_sample(2, KMatrix(1.0, 2.0), seed=7)
    """
    system = ksym_constraints(d, K, exact=exact)
    nullspace = ksym_nullspace(system)
    rng = np.random.default_rng(seed)
    xi = sample_from_nullspace(system, nullspace, rng,
                               meta={"seed": int(seed), "A": K.A, "B": K.B})
    logger.debug(f"K-symmetric sample d={d}, seed={seed}")
    return xi
