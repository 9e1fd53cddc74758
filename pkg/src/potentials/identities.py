"""
Structural Identities of K-Symmetric Potentials

Coefficient identities every K-symmetric potential satisfies, evaluated
as named residuals so a sample can be audited against them.
"""

import logging
from typing import Dict

import numpy as np

from src.kmatrix import KMatrix, kernel_eigen_check
from src.utils.errors import ConstraintError
from .potential import Potential, ksym_residual

logger = logging.getLogger(__name__)

KSYM_PRECONDITION_TOL = 1e-9


def alpha_recursion_residual(xi: Potential, K: KMatrix) -> float:
    """max_k |4B·Re[α_{k+1}−α_{k−1}] − Re[β_{d−k}−β_{d−k−2}] + Re[β_{k−1}−β_{k+1}]|, k = −1..d+1."""
    d, B = xi.d, K.B
    worst = 0.0
    for k in range(-1, d + 2):
        value = (4 * B * (xi.alpha_at(k + 1) - xi.alpha_at(k - 1)).real
                 - (xi.beta_at(d - k) - xi.beta_at(d - k - 2)).real
                 + (xi.beta_at(k - 1) - xi.beta_at(k + 1)).real)
        worst = max(worst, abs(value))
    return worst


def beta_recursion_residual(xi: Potential, K: KMatrix) -> float:
    """max_k |i·Im[α_{k+1}−α_{k−1}] + 2A(β_k−β_{d−k−1}) + 2B(β_{d−k−2}−β_{k−1})|, k = −1..d+1."""
    d, A, B = xi.d, K.A, K.B
    worst = 0.0
    for k in range(-1, d + 2):
        value = (1j * (xi.alpha_at(k + 1) - xi.alpha_at(k - 1)).imag
                 + 2 * A * (xi.beta_at(k) - xi.beta_at(d - k - 1))
                 + 2 * B * (xi.beta_at(d - k - 2) - xi.beta_at(k - 1)))
        worst = max(worst, abs(value))
    return worst


def alternating_beta_sum(xi: Potential) -> complex:
    """Σ_{k=−1}^{d−1} (−1)^{k+1} β_k."""
    signs = np.array([(-1) ** j for j in range(xi.d + 1)])
    return complex(np.sum(signs * xi.beta))


def structural_identities(xi: Potential, K: KMatrix) -> Dict[str, float]:
    """Named residuals of the structural identities.

    Always present: ``re_top`` (|Re β_{d−1}|), ``kernel_eigen`` (worst deviation of
    ξ(λ₀)w from span(w) over the four roots), ``alpha_recursion`` and
    ``beta_recursion``. ``alpha0`` is added for imaginary potentials and
    ``alt_sum`` for even d with a nonzero diagonal.

    Raises:
        ConstraintError: xi is not K-symmetric for K
    """
    if ksym_residual(xi, K) > KSYM_PRECONDITION_TOL:
        raise ConstraintError("input not K-symmetric")
    d = xi.d
    report: Dict[str, float] = {
        "re_top": abs(xi.beta_at(d - 1).real),
        "alpha_recursion": alpha_recursion_residual(xi, K),
        "beta_recursion": beta_recursion_residual(xi, K),
    }
    eigen = kernel_eigen_check(xi.to_laurent(), K)
    report["kernel_eigen"] = max(entry["deviation"] for entry in eigen.values())
    if xi.is_imaginary():
        expected = -2 * K.A * xi.beta_at(-1) - 2 * K.B * xi.beta_at(d - 1)
        report["alpha0"] = abs(xi.alpha_at(0) - expected)
    if d % 2 == 0 and not xi.is_offdiagonal():
        report["alt_sum"] = abs(alternating_beta_sum(xi))
    logger.debug(f"Structural identities (d={d}): {report}")
    return report


def diagonal_equivalences(xi: Potential) -> Dict[str, float]:
    """‖α + star-α‖, ‖β + star-β‖, ‖γ + star-γ‖ as coefficient maxima.

    On real-coefficient exponents star acts as conjugation, so each entry is
    twice the largest real part.
    """
    return {
        "alpha": float(np.abs(xi.alpha + np.conj(xi.alpha)).max(initial=0.0)),
        "beta": float(np.abs(xi.beta + np.conj(xi.beta)).max()),
        "gamma": float(np.abs(xi.gamma + np.conj(xi.gamma)).max()),
    }
