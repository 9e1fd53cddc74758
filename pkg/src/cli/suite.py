"""
Verification Suite

A registry of named checks. Each check computes one residual and is
compared against a tolerance from the run configuration; negative controls
pass when their residual exceeds the tolerance instead.

Every check draws from its own random stream, spawned from the run seed in
registry order, so the report is reproducible.
"""

import logging
import platform
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import scipy

from src.frames import (
    DomainGrid,
    commutant_decompose,
    dressing_matrix,
    dressing_reconstruct,
    frame_field,
    holomorphic_frame,
    iwasawa_dense,
    iwasawa_factor,
    isospectral_residual,
    ksym_report,
    loop_reality_residual,
    mean_curvature_estimate,
    metric_extract,
    row_report,
    sinh_gordon_residual,
    sym_bobenko,
    boundary_residual,
    two_boundary_report,
)
from src.kmatrix import (
    KMatrix,
    J,
    k_commutator,
    k_eigen,
    k_eval,
    k_inverse_residues,
    k_kernels,
    k_null_set,
    k_roots,
    k_roots_companion,
    lemma_u_residual,
    near_null_set,
    product_eta,
    product_reconstruction_residual,
    residue_kernel_residuals,
    residue_oracle,
    u_matrix,
)
from src.loops import UnitCircleGrid
from src.potentials import (
    degree1_chart,
    diagonal_equivalences,
    double_ksym_intersect,
    expected_dimension,
    expected_freedom_split,
    freedom_split,
    ksym_constraints,
    ksym_nullspace,
    ksym_residual,
    offdiag_factorize,
    offdiag_sample,
    potential_scale,
    sample_from_nullspace,
    structural_identities,
    vacuum_potential,
)
from src.spectral import genus, nu_symmetry_residual, spectral_curve, unit_circle_reality_residual
from .config import RunConfig, Tolerances, spawn_rngs

logger = logging.getLogger(__name__)

PROFILES: Dict[str, Dict[str, int]] = {
    "quick": {
        "n_k": 10, "n_lambda": 16, "dim_trials": 2, "dim_degree": 6, "samples": 5,
        "struct_degree": 4, "offdiag_degree": 6, "lemma_points": 100,
        "chain_n": 7, "curvature_n": 17, "circle_n": 64, "truncation": 16,
    },
    "standard": {
        "n_k": 100, "n_lambda": 64, "dim_trials": 20, "dim_degree": 8, "samples": 50,
        "struct_degree": 6, "offdiag_degree": 10, "lemma_points": 1000,
        "chain_n": 9, "curvature_n": 33, "circle_n": 128, "truncation": 32,
    },
}

# (A, B, Im β₋₁, Im β₀) of the degree-1 boundary runs
CHAIN_PARAMETERS = [
    (0.3, 0.2, 0.25, 0.25),
    (-0.2, 0.4, 0.3, 0.2),
    (0.1, -0.3, 0.2, 0.35),
]

# rational K with A/B a power of two keeps scaled off-diagonal curves exact in binary
OFFDIAG_K = KMatrix.from_rational("1/2", "1/4")


@dataclass
class SuiteCheck:
    test_id: str
    anchor: str
    tol_key: str
    run: Callable[["SuiteContext", np.random.Generator], float]
    negative: bool = False


@dataclass
class ReportEntry:
    test_id: str
    anchor: str
    residual: Optional[float]
    tolerance: float
    passed: bool
    error: Optional[str] = None

    def to_json(self) -> Dict[str, Any]:
        out = {
            "test_id": self.test_id,
            "anchor": self.anchor,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
        if self.error:
            out["error"] = self.error
        return out


@dataclass
class VerificationReport:
    """Ordered check results plus environment metadata; passes iff every entry passes."""

    entries: List[ReportEntry] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(entry.passed for entry in self.entries)

    @property
    def n_failed(self) -> int:
        return sum(not entry.passed for entry in self.entries)

    def to_json(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "n_tests": len(self.entries),
            "n_failed": self.n_failed,
            "metadata": self.metadata,
            "tests": [entry.to_json() for entry in self.entries],
        }


class SuiteContext:
    """Run configuration, profile sizes and cached frame fields."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.sizes = dict(PROFILES[config.profile])
        if config.profile == "standard":
            self.sizes["circle_n"] = config.grid.circle_n
            self.sizes["truncation"] = config.grid.truncation
        self._frames: Dict[str, Any] = {}

    @property
    def circle(self) -> UnitCircleGrid:
        return UnitCircleGrid(self.sizes["circle_n"])

    def frames(self, key: str, xi, domain: DomainGrid):
        if key not in self._frames:
            self._frames[key] = frame_field(xi, domain, self.circle, self.sizes["truncation"])
        return self._frames[key]

    def chain_domain(self) -> DomainGrid:
        n = self.sizes["chain_n"]
        return DomainGrid((-0.5, 0.5), (-0.05, 0.05), n, n)


REGISTRY: List[SuiteCheck] = []


def check(test_id: str, anchor: str, tol_key: str, negative: bool = False):
    def register(fn):
        REGISTRY.append(SuiteCheck(test_id, anchor, tol_key, fn, negative))
        return fn
    return register


def _random_k(rng: np.random.Generator) -> KMatrix:
    return KMatrix(float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))


def _rational_k(rng: np.random.Generator) -> KMatrix:
    while True:
        a = Fraction(int(rng.choice([-1, 1]) * rng.integers(1, 10)), int(rng.integers(1, 10)))
        b = Fraction(int(rng.choice([-1, 1]) * rng.integers(1, 10)), int(rng.integers(1, 10)))
        if a != b and a != -b:
            return KMatrix.from_rational(a, b)


def _random_lambda(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.uniform(0.5, 2.0, n) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))


def _max_norm(values: np.ndarray) -> float:
    return float(np.linalg.norm(values, axis=(-2, -1)).max())


# K-matrix algebra

@check("kmat.transpose_conjugation_adjugate", "K = K^t, conj K(λ̄) = K(λ), K(λ⁻¹) = adj K(λ)", "kmat_identity")
def _kmat_properties(ctx, rng):
    worst = 0.0
    for _ in range(ctx.sizes["n_k"]):
        K = _random_k(rng)
        lam = _random_lambda(rng, ctx.sizes["n_lambda"])
        k = k_eval(K, lam)
        kt = np.swapaxes(k, -1, -2)
        adj = np.empty_like(k)
        adj[..., 0, 0], adj[..., 1, 1] = k[..., 1, 1], k[..., 0, 0]
        adj[..., 0, 1], adj[..., 1, 0] = -k[..., 0, 1], -k[..., 1, 0]
        worst = max(worst, _max_norm(k - kt), _max_norm(np.conj(k_eval(K, np.conj(lam))) - k),
                    _max_norm(k_eval(K, 1.0 / lam) - adj))
    return worst


@check("kmat.plus_minus_one", "K(±1) = 4(A∓B)𝟙", "kmat_identity")
def _kmat_pm_one(ctx, rng):
    worst = 0.0
    for _ in range(ctx.sizes["n_k"]):
        K = _random_k(rng)
        worst = max(worst, _max_norm(k_eval(K, 1.0) - 4 * (K.A - K.B) * np.eye(2)),
                    _max_norm(k_eval(K, -1.0) - 4 * (K.A + K.B) * np.eye(2)))
    return worst


@check("kmat.roots_companion", "closed-form roots of det K match the quartic's companion roots", "roots_oracle")
def _kmat_roots(ctx, rng):
    worst = 0.0
    for _ in range(ctx.sizes["n_k"]):
        K = _random_k(rng)
        companion_roots = k_roots_companion(K)
        for root in k_null_set(K):
            worst = max(worst, float(np.abs(companion_roots - root).min()) / max(1.0, abs(root)))
    return worst


@check("kmat.roots_inversion", "ϱ·ϱ⁻¹ = r·r⁻¹ = 1 and det K vanishes on the null set", "roots_oracle")
def _kmat_roots_inversion(ctx, rng):
    worst = 0.0
    for _ in range(ctx.sizes["n_k"]):
        K = _random_k(rng)
        roots = k_roots(K)
        worst = max(worst, abs(roots.varrho * roots.varrho_inv - 1), abs(roots.r * roots.r_inv - 1))
        dets = np.linalg.det(k_eval(K, roots.as_array()))
        worst = max(worst, float(np.abs(dets).max()))
    return worst


@check("kmat.null_set_sign_flip", "null set invariant under (A, B) ↦ (−A, −B)", "roots_oracle")
def _kmat_null_set_flip(ctx, rng):
    worst = 0.0
    for _ in range(ctx.sizes["n_k"]):
        K = _random_k(rng)
        a, b = k_null_set(K), k_null_set(KMatrix(-K.A, -K.B))
        worst = max(worst, max(float(np.abs(b - z).min()) for z in a))
    return worst


@check("kmat.kernels", "kernels of K at the roots are orthogonal and independent of A", "roots_oracle")
def _kmat_kernels(ctx, rng):
    worst = 0.0
    for _ in range(ctx.sizes["n_k"]):
        K = _random_k(rng)
        v, v_perp = k_kernels(K)
        roots = k_roots(K)
        worst = max(worst, abs(float(v @ v_perp)),
                    float(np.linalg.norm(k_eval(K, roots.varrho) @ v)),
                    float(np.linalg.norm(k_eval(K, roots.r) @ v)),
                    float(np.linalg.norm(k_eval(K, roots.varrho_inv) @ v_perp)),
                    float(np.linalg.norm(k_eval(K, roots.r_inv) @ v_perp)))
        w, w_perp = k_kernels(KMatrix(float(rng.uniform(-2, 2)), K.B))
        worst = max(worst, float(np.abs(w - v).max()), float(np.abs(w_perp - v_perp).max()))
    return worst


@check("kmat.mu_symmetry", "μ₋(λ⁻¹) = μ₊(λ)", "kmat_identity")
def _kmat_mu_symmetry(ctx, rng):
    worst = 0.0
    for _ in range(ctx.sizes["n_k"]):
        eig = k_eigen(_random_k(rng))
        worst = max(worst, (eig.mu_minus.invert() - eig.mu_plus).max_abs())
    return worst


@check("kmat.diagonalization", "K = V·diag(μ₋, μ₊)·V⁻¹ and det K = μ₋μ₊", "kmat_identity")
def _kmat_diagonalization(ctx, rng):
    worst = 0.0
    for _ in range(ctx.sizes["n_k"]):
        K = _random_k(rng)
        eig = k_eigen(K)
        lam = _random_lambda(rng, ctx.sizes["n_lambda"])
        k = k_eval(K, lam)
        scale = max(1.0, _max_norm(k))
        worst = max(worst, _max_norm(eig.diagonalize(lam) - k) / scale)
        det_gap = np.abs(np.linalg.det(k) - eig.mu_minus(lam) * eig.mu_plus(lam))
        worst = max(worst, float(det_gap.max()) / scale ** 2)
    return worst


@check("kmat.residues_contour", "residues of K⁻¹ match contour quadrature", "residue_oracle")
def _kmat_residues(ctx, rng):
    worst = 0.0
    for _ in range(max(1, ctx.sizes["n_k"] // 10)):
        K = _random_k(rng)
        worst = max(worst, float(np.abs(k_inverse_residues(K).residues - residue_oracle(K)).max()))
    return worst


@check("kmat.residue_kernel_swap", "kernels of the residues of K⁻¹ are the kernels of K at the inverse root", "roots_oracle")
def _kmat_residue_kernels(ctx, rng):
    worst = 0.0
    for _ in range(ctx.sizes["n_k"]):
        K = _random_k(rng)
        res = k_inverse_residues(K).residues
        worst = max(worst, float(residue_kernel_residuals(K).max()),
                    float(np.abs(np.linalg.det(res)).max()))
    return worst


@check("kmat.commutator", "[K₀, K₁] = 4(λ−λ⁻¹)²(B₀−B₁)J, zero iff B₀ = B₁", "commutator")
def _kmat_commutator(ctx, rng):
    worst = 0.0
    for _ in range(ctx.sizes["n_k"]):
        K0, K1 = _random_k(rng), _random_k(rng)
        lam = _random_lambda(rng, 8)
        expected = (4 * (lam - 1 / lam) ** 2 * (K0.B - K1.B))[:, None, None] * J
        got = k_commutator(K0, K1).evaluate(lam)
        worst = max(worst, _max_norm(got - expected) / max(1.0, _max_norm(expected)))
        same = k_commutator(K0, KMatrix(K1.A, K0.B))
        worst = max(worst, same.max_abs())
    return worst


@check("kmat.product_decomposition", "K₁⁻¹K₀ = p·𝟙 + q·η under A₀B₁ = −A₁B₀", "product")
def _kmat_product(ctx, rng):
    worst = 0.0
    grid = UnitCircleGrid(64).points
    for _ in range(ctx.sizes["n_k"]):
        K0 = _random_k(rng)
        b1 = float(rng.uniform(-2, 2))
        K1 = KMatrix(-K0.A * b1 / K0.B, b1)
        mask = ~(near_null_set(K0, grid) | near_null_set(K1, grid))
        worst = max(worst, product_reconstruction_residual(K0, K1, grid[mask]))
        worst = max(worst, product_eta(K0, K1).trace().max_abs())
    return worst


@check("kmat.lemma_u", "K U_λ − U_{λ⁻¹} K is proportional to the boundary defect", "lemma_u")
def _kmat_lemma_u(ctx, rng):
    worst = 0.0
    for _ in range(ctx.sizes["lemma_points"]):
        K = _random_k(rng)
        omega, omega_y = rng.uniform(-1, 1, 2)
        lam = _random_lambda(rng, 1)
        worst = max(worst, lemma_u_residual(K, omega, omega_y, lam))
    return worst


@check("kmat.u_reality", "star(U_λ) = −U_{λ⁻¹}", "kmat_identity")
def _kmat_u_reality(ctx, rng):
    worst = 0.0
    for _ in range(ctx.sizes["n_k"]):
        omega, omega_y = rng.uniform(-1, 1, 2)
        lam = _random_lambda(rng, ctx.sizes["n_lambda"])
        star_u = np.conj(np.swapaxes(u_matrix(omega, omega_y, np.conj(lam)), -1, -2))
        worst = max(worst, _max_norm(star_u + u_matrix(omega, omega_y, 1.0 / lam)))
    return worst


# potentials

@check("pot.dimension", "nullity (3d−2)/2 for even d, (3d+1)/2 for odd d", "structural")
def _pot_dimension(ctx, rng):
    mismatches = 0
    for d in range(1, ctx.sizes["dim_degree"] + 1):
        for _ in range(ctx.sizes["dim_trials"]):
            ns = ksym_nullspace(ksym_constraints(d, _rational_k(rng), exact=True), mode="exact")
            mismatches += int(ns.dimension != expected_dimension(d))
    return float(mismatches)


@check("pot.freedom_split", "free real and imaginary β-parts of K-symmetric potentials", "structural")
def _pot_freedom(ctx, rng):
    mismatches = 0
    for d in range(1, ctx.sizes["dim_degree"] + 1):
        system = ksym_constraints(d, _rational_k(rng), exact=True)
        mismatches += int(freedom_split(system) != expected_freedom_split(d))
    return float(mismatches)


def _samples(ctx, rng, d: int):
    K = _rational_k(rng)
    system = ksym_constraints(d, K, exact=True)
    ns = ksym_nullspace(system)
    return K, [sample_from_nullspace(system, ns, rng) for _ in range(ctx.sizes["samples"])]


@check("pot.samples_ksymmetric", "sampled potentials satisfy Kξ + star(ξ)K = 0", "structural")
def _pot_samples(ctx, rng):
    worst = 0.0
    for d in range(1, ctx.sizes["struct_degree"] + 1):
        K, xis = _samples(ctx, rng, d)
        worst = max(worst, max(ksym_residual(xi, K) for xi in xis))
    return worst


@check("pot.structural_identities", "Re β_{d−1} = 0, α₀ formula, alternating sum, recursions, kernel eigenspaces", "structural")
def _pot_structural(ctx, rng):
    worst = 0.0
    for d in range(1, ctx.sizes["struct_degree"] + 1):
        K, xis = _samples(ctx, rng, d)
        for xi in xis:
            worst = max(worst, max(structural_identities(xi, K).values()))
    return worst


@check("pot.offdiag_equivalences", "α ≡ 0 forces β + star-β ≡ 0 and γ + star-γ ≡ 0", "structural")
def _pot_offdiag_equivalences(ctx, rng):
    worst = 0.0
    for d in range(1, ctx.sizes["offdiag_degree"] + 1):
        xi = offdiag_sample(d, OFFDIAG_K, int(rng.integers(2 ** 31)))
        worst = max(worst, max(diagonal_equivalences(xi).values()))
    return worst


@check("pot.offdiag_factorization", "off-diagonal K-symmetric potentials factor as p(λ)·core", "factorization")
def _pot_factorization(ctx, rng):
    worst = 0.0
    for d in range(1, ctx.sizes["offdiag_degree"] + 1):
        xi = offdiag_sample(d, OFFDIAG_K, int(rng.integers(2 ** 31)))
        result = offdiag_factorize(xi, OFFDIAG_K)
        worst = max(worst, result.residual, result.remainder)
    return worst


@check("pot.double_ksym_eta", "doubly K-symmetric potentials are multiples of η", "eta_division")
def _pot_double(ctx, rng):
    worst = 0.0
    for d in range(1, 5):
        K0 = _rational_k(rng)
        b1 = Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 10)))
        K1 = KMatrix.from_rational(-K0.A_exact * b1 / K0.B_exact, b1)
        if K1 == K0:
            continue
        result = double_ksym_intersect(d, K0, K1)
        if result.residuals:
            worst = max(worst, max(result.residuals))
    return worst


# spectral curves

@check("spectral.offdiag_genus_one", "off-diagonal K-symmetric potentials have genus one", "structural")
def _spec_genus_one(ctx, rng):
    mismatches = 0
    for d in range(1, ctx.sizes["offdiag_degree"] + 1):
        xi = offdiag_sample(d, OFFDIAG_K, int(rng.integers(2 ** 31)))
        mismatches += int(genus(spectral_curve(xi, exact=True)) != 1)
    return float(mismatches)


@check("spectral.genus_invariance", "multiplying by p(λ)² leaves the spectral curve's genus unchanged", "structural")
def _spec_invariance(ctx, rng):
    mismatches = 0
    for d in range(1, 5):
        xi = offdiag_sample(d, OFFDIAG_K, int(rng.integers(2 ** 31)))
        half = rng.integers(-16, 17, size=2) / 16.0
        half[0] = rng.integers(9, 24) / 16.0
        p = np.convolve([half[0], half[1], half[0]], [half[0], half[1], half[0]])
        scaled = potential_scale(xi, p)
        mismatches += int(genus(spectral_curve(scaled, exact=True)) != genus(spectral_curve(xi, exact=True)))
    return float(mismatches)


@check("spectral.vacuum_genus_zero", "the vacuum curve has genus zero after removing the double root", "structural")
def _spec_vacuum(ctx, rng):
    return float(abs(genus(spectral_curve(vacuum_potential())) - 0))


@check("spectral.nu_symmetry", "ν(λ⁻¹) = λ^{1−d}ν(λ) and −det ξ·λ^{1−d} real on the circle", "structural")
def _spec_nu(ctx, rng):
    worst = 0.0
    for d in range(1, ctx.sizes["struct_degree"] + 1):
        _, xis = _samples(ctx, rng, d)
        for xi in xis[:5]:
            worst = max(worst, nu_symmetry_residual(spectral_curve(xi, exact=False), d),
                        unit_circle_reality_residual(xi))
    return worst


# Iwasawa factorization and frames

def _chain_potential(index: int):
    A, B, b_m1, b_0 = CHAIN_PARAMETERS[index]
    return KMatrix(A, B), degree1_chart(A, B, b_m1, b_0)


@check("frame.iwasawa_residuals", "Φ = F·B with F unitary and B holomorphic in the disk", "iwasawa")
def _frame_iwasawa(ctx, rng):
    worst = 0.0
    for index in range(len(CHAIN_PARAMETERS)):
        _, xi = _chain_potential(index)
        for z in rng.uniform(-0.7, 0.7, 4) + 1j * rng.uniform(-0.7, 0.7, 4):
            factors = iwasawa_factor(holomorphic_frame(xi, z, ctx.circle), ctx.sizes["truncation"])
            worst = max(worst, max(factors.residuals.values()))
    return worst


@check("frame.iwasawa_oracle", "Cholesky and dense Toeplitz solves give the same unitary factor", "iwasawa")
def _frame_oracle(ctx, rng):
    z = complex(0.3, 0.2)
    Phi = holomorphic_frame(vacuum_potential(), z, ctx.circle)
    N = ctx.sizes["truncation"]
    a, b = iwasawa_factor(Phi, N), iwasawa_dense(Phi, N)
    return float(np.abs(a.F.values - b.F.values).max())


@check("frame.isospectral", "det ζ = det ξ and conj(F_{1/λ̄})^t = F_λ⁻¹ over the domain", "iwasawa")
def _frame_isospectral(ctx, rng):
    K, xi = _chain_potential(0)
    frames = ctx.frames("chain0", xi, ctx.chain_domain())
    return max(isospectral_residual(frames), loop_reality_residual(frames))


@check("frame.vacuum_metric", "the vacuum metric is flat: ω ≡ 0", "vacuum_omega")
def _frame_vacuum_metric(ctx, rng):
    n = ctx.sizes["curvature_n"]
    frames = ctx.frames("vacuum", vacuum_potential(), DomainGrid((-1, 1), (-1, 1), n, n))
    return float(np.abs(metric_extract(frames)).max())


@check("frame.vacuum_mean_curvature", "the vacuum immersion is a cylinder of mean curvature H", "mean_curvature")
def _frame_vacuum_curvature(ctx, rng):
    # difference error on the cylinder is about H·h²/4, so the patch is kept small
    n = ctx.sizes["curvature_n"]
    frames = ctx.frames("vacuum_patch", vacuum_potential(), DomainGrid((-0.125, 0.125), (-0.125, 0.125), n, n))
    H = ctx.config.H
    immersion = sym_bobenko(frames, ctx.config.lam0, H)
    return float(np.abs(np.abs(mean_curvature_estimate(immersion)) - abs(H)).max())


@check("frame.sinh_gordon_order", "Δω + sinh ω = 0 with second-order discretization error", "convergence_ratio")
def _frame_sinh_gordon(ctx, rng):
    _, xi = _chain_potential(0)
    residuals = []
    for n in (9, 17):
        frames = frame_field(xi, DomainGrid((-0.5, 0.5), (-0.5, 0.5), n, n), ctx.circle,
                             ctx.sizes["truncation"])
        omega = metric_extract(frames)
        residuals.append(sinh_gordon_residual(omega, frames.domain.h_x, frames.domain.h_y))
    return abs(residuals[0] / residuals[1] - 4.0)


def _chain_reports(ctx):
    reports = []
    for index in range(len(CHAIN_PARAMETERS)):
        K, xi = _chain_potential(index)
        frames = ctx.frames(f"chain{index}", xi, ctx.chain_domain())
        reports.append((K, xi, frames, ksym_report(frames, xi, K)))
    return reports


@check("frame.phi_symmetry", "KΦ(z) = star(Φ(z̄))⁻¹K for all z", "phi_sym")
def _frame_phi(ctx, rng):
    return max(report["phi_sym"] for *_, report in _chain_reports(ctx))


@check("frame.boundary_symmetries", "K F_λ = F_{λ⁻¹}K, K B = star(B)⁻¹K, Kζ + star(ζ)K = 0 on y = 0", "row_sym")
def _frame_row(ctx, rng):
    return max(max(report[k] for k in ("frame_sym", "b_sym", "zeta_sym")) for *_, report in _chain_reports(ctx))


@check("frame.family_symmetry", "λ-derivative of the frame symmetry on y = 0", "family_sym")
def _frame_family(ctx, rng):
    return max(report["family_sym"] for *_, report in _chain_reports(ctx))


@check("frame.boundary_condition", "ω_y = e^ω A + e^{−ω} B along y = 0", "boundary")
def _frame_boundary(ctx, rng):
    worst = 0.0
    for K, xi, frames, _ in _chain_reports(ctx):
        worst = max(worst, boundary_residual(metric_extract(frames), K, frames))
    return worst


@check("frame.negative_control", "a potential that is not K-symmetric breaks ζ-symmetry on y = 0", "negative_control",
       negative=True)
def _frame_negative(ctx, rng):
    _, xi = _chain_potential(0)
    K_other, _ = _chain_potential(1)
    frames = ctx.frames("chain0", xi, ctx.chain_domain())
    row = frames.domain.row_index(0.0, exact=True)
    return row_report(frames, K_other, row)["zeta_sym"]


# two-boundary dressing

def _vacuum_pair_frames(ctx):
    return ctx.frames("vacuum_strip", vacuum_potential(), DomainGrid((-0.5, 0.5), (-0.5, 0.5), 5, 5))


@check("dress.trivial", "K₁ = K₀ and y₁ = 0 give C = 𝟙", "dressing")
def _dress_trivial(ctx, rng):
    K, xi = _chain_potential(0)
    frames = ctx.frames("chain0", xi, ctx.chain_domain())
    dd = dressing_matrix(frames, K, K, 0.0)
    return float(np.linalg.norm(dd.C.values - np.eye(2), axis=(-2, -1))[dd.valid].max())


@check("dress.det_unitary", "det C = 1 and C unitary on the circle", "dressing")
def _dress_det(ctx, rng):
    K, xi = _chain_potential(0)
    frames = ctx.frames("chain0", xi, ctx.chain_domain())
    y1 = float(frames.domain.ys[-1])
    dd = dressing_matrix(frames, K, KMatrix(-K.A, -K.B), y1)
    return max(dd.residuals["det"], dd.residuals["unitarity"])


@check("dress.z_independence", "C is constant along a line where the second boundary condition holds", "z_independence")
def _dress_z(ctx, rng):
    frames = _vacuum_pair_frames(ctx)
    dd = dressing_matrix(frames, KMatrix(0.25, -0.25), KMatrix(-0.25, 0.25), 0.0)
    return dd.residuals["z_independence"]


@check("dress.k1pkf2", "K₁ζ + star(ζ)K₁ = F_{λ⁻¹}⁻¹K₀[K₀⁻¹C⁻¹K₁, ξ]F", "k1pkf2")
def _dress_identity(ctx, rng):
    K, xi = _chain_potential(0)
    frames = ctx.frames("chain0", xi, ctx.chain_domain())
    y1 = float(frames.domain.ys[-1])
    return two_boundary_report(xi, K, _chain_potential(1)[0], y1, frames)["k1pkf2"]


@check("dress.commutant", "M = f·𝟙 + g·ξ, det M = f² − g²ν², f(λ⁻¹) = f(λ), divisor of μ⁰₋/μ¹₋", "dressing")
def _dress_commutant(ctx, rng):
    frames = _vacuum_pair_frames(ctx)
    dd = dressing_matrix(frames, KMatrix(0.25, -0.25), KMatrix(0.5, -0.5), 0.0)
    result = commutant_decompose(dd, frames.xi, tol=ctx.config.tolerances.commutant)
    dressing_reconstruct(dd, frames.xi, result)
    keys = ("reconstruction", "eigen_route", "det_identity", "f_symmetry", "divisor")
    return max(max(result.residuals[k] for k in keys), dd.residuals["reconstruct"])


@check("dress.eigen_ratio", "f ∓ gν = μ⁰∓/μ¹∓ when M = 𝟙 (K₁ = K₀, y₁ = 0)", "commutant")
def _dress_eigen_ratio(ctx, rng):
    frames = _vacuum_pair_frames(ctx)
    K = KMatrix(0.25, -0.25)
    dd = dressing_matrix(frames, K, K, 0.0)
    return commutant_decompose(dd, frames.xi, tol=ctx.config.tolerances.commutant).residuals["mu_ratio"]


@check("dress.complementary", "complementary constants: (f − gν)(f + gν) = 1", "dressing")
def _dress_complementary(ctx, rng):
    frames = _vacuum_pair_frames(ctx)
    dd = dressing_matrix(frames, KMatrix(0.25, -0.25), KMatrix(-0.25, 0.25), 0.0)
    result = commutant_decompose(dd, frames.xi, tol=ctx.config.tolerances.commutant)
    return max(result.residuals["det_identity"], result.residuals["complementary_det"])


def list_checks() -> List[Dict[str, str]]:
    return [{"test_id": c.test_id, "anchor": c.anchor, "tolerance": c.tol_key} for c in REGISTRY]


def _evaluate(entry_check: SuiteCheck, ctx: SuiteContext, rng: np.random.Generator,
              tolerances: Tolerances) -> ReportEntry:
    tol = float(getattr(tolerances, entry_check.tol_key))
    try:
        residual = float(entry_check.run(ctx, rng))
    except Exception as e:
        logger.warning(f"Check {entry_check.test_id} raised {type(e).__name__}: {e}")
        return ReportEntry(entry_check.test_id, entry_check.anchor, None, tol, False,
                           f"{type(e).__name__}: {e}")
    if not np.isfinite(residual):
        passed = False
    elif entry_check.negative:
        passed = residual > tol
    else:
        passed = residual <= tol
    return ReportEntry(entry_check.test_id, entry_check.anchor, residual, tol, passed)


def run_suite(config: RunConfig, only: Optional[List[str]] = None) -> VerificationReport:
    """Run every registered check (or those whose id starts with an entry of ``only``).

    Library errors inside a check are recorded as failed entries; the suite
    always completes.
    """
    ctx = SuiteContext(config)
    rngs = spawn_rngs(config.seed, len(REGISTRY))
    report = VerificationReport(metadata={
        "seed": config.seed,
        "profile": config.profile,
        "tolerances": config.tolerances.model_dump(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "platform": platform.platform(),
    })
    for suite_check, rng in zip(REGISTRY, rngs):
        if only and not any(suite_check.test_id.startswith(prefix) for prefix in only):
            continue
        entry = _evaluate(suite_check, ctx, rng, config.tolerances)
        mark = "✓" if entry.passed else "✗"
        residual = "error" if entry.residual is None else f"{entry.residual:.2e}"
        logger.info(f"{mark} {entry.test_id}: {residual} (tol {entry.tolerance:.0e})")
        report.entries.append(entry)
    logger.info(f"Suite finished: {len(report.entries) - report.n_failed}/{len(report.entries)} passed")
    return report
