"""The K-symmetry constraint system, its nullspace and the structural identities."""

import numpy as np
import pytest
import sympy

from src.kmatrix import KMatrix
from src.potentials import (
    ConstraintSystem,
    alternating_beta_sum,
    double_ksym_intersect,
    exact_rank,
    expected_dimension,
    expected_freedom_split,
    float_rank,
    freedom_split,
    ksym_constraints,
    ksym_nullspace,
    ksym_residual,
    ksym_sample,
    structural_identities,
    unknown_layout,
    vacuum_potential,
)
from src.utils.errors import ConstraintError, RankConditionError

K_RATIONAL = KMatrix.from_rational("1/3", "1/2")


def test_expected_dimension_table():
    assert [expected_dimension(d) for d in range(1, 9)] == [2, 2, 5, 5, 8, 8, 11, 11]
    assert expected_freedom_split(4) == (1, 4)
    assert expected_freedom_split(5) == (2, 6)


@pytest.mark.parametrize("d", range(1, 9))
def test_nullspace_dimension(d):
    ns = ksym_nullspace(ksym_constraints(d, K_RATIONAL, exact=True), mode="exact")
    assert ns.exact
    assert ns.dimension == expected_dimension(d)
    assert ns.basis.shape == (4 * d + 2, ns.dimension)


@pytest.mark.parametrize("d", range(1, 7))
def test_freedom_split(d):
    system = ksym_constraints(d, K_RATIONAL, exact=True)
    assert freedom_split(system) == expected_freedom_split(d)


def test_float_system_agrees_with_exact():
    system = ksym_constraints(4, KMatrix(0.3, -0.7), exact=False)
    assert system.exact_rows is None
    assert ksym_nullspace(system, mode="float").dimension == expected_dimension(4)


def test_exact_mode_needs_exact_rows():
    system = ksym_constraints(2, KMatrix(0.3, -0.7), exact=False)
    with pytest.raises(RankConditionError):
        ksym_nullspace(system, mode="exact")


def test_exact_basis_survives_marginal_float_gap():
    # σ = 1e-10 sits within the gap band of the 1e-9 cutoff
    exact_rows = [
        [sympy.Integer(1)] + [sympy.Integer(0)] * 5,
        [sympy.Integer(0), sympy.Rational(1, 10 ** 10)] + [sympy.Integer(0)] * 4,
        [sympy.Integer(0)] * 2 + [sympy.Integer(1)] * 2 + [sympy.Integer(0)] * 2,
    ]
    rows = np.array([[float(c) for c in row] for row in exact_rows])
    system = ConstraintSystem(1, K_RATIONAL, unknown_layout(1), rows,
                              [("reality", 0, (0, 0), "re")] * 3, exact_rows)
    with pytest.raises(RankConditionError, match="ill-conditioned"):
        ksym_nullspace(system, mode="float")
    ns = ksym_nullspace(system, mode="exact")
    assert ns.dimension == 3
    assert np.allclose(ns.basis.T @ ns.basis, np.eye(3), atol=1e-14)
    assert np.abs(rows @ ns.basis).max() < 1e-14
    assert np.abs(ns.basis[:2]).max() < 1e-15
    assert np.allclose(ns.basis[2], -ns.basis[3], atol=1e-14)


def test_degree_zero_rejected():
    with pytest.raises(ConstraintError, match="degree must be at least 1"):
        ksym_constraints(0, K_RATIONAL)


def test_rank_helpers():
    assert exact_rank([[1, 2], [2, 4]]) == 1
    assert exact_rank([]) == 0
    assert float_rank(np.diag([1.0, 1e-14])) == 1
    assert float_rank(np.zeros((3, 3))) == 0


def test_float_rank_refuses_blurred_gap():
    with pytest.raises(RankConditionError, match="ill-conditioned"):
        float_rank(np.diag([1.0, 1e-8, 1e-14]))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_samples_are_ksymmetric_and_seeded(d):
    a = ksym_sample(d, K_RATIONAL, seed=5)
    b = ksym_sample(d, K_RATIONAL, seed=5)
    assert np.array_equal(a.beta, b.beta)
    assert ksym_residual(a, K_RATIONAL) < 1e-9
    assert a.beta[0].imag > 0 and a.beta[0].real == 0


def test_degree_two_alternating_sum():
    for seed in range(5):
        xi = ksym_sample(2, K_RATIONAL, seed=seed)
        assert abs(alternating_beta_sum(xi)) < 1e-9


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_structural_identities_hold_on_samples(d):
    xi = ksym_sample(d, K_RATIONAL, seed=100 + d)
    report = structural_identities(xi, K_RATIONAL)
    assert {"re_top", "alpha_recursion", "beta_recursion", "kernel_eigen"} <= set(report)
    assert max(report.values()) < 1e-9


def test_structural_identities_require_ksymmetry():
    with pytest.raises(ConstraintError, match="not K-symmetric"):
        structural_identities(vacuum_potential(), KMatrix(1.0, 1.0))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_double_ksymmetry_factors_through_eta(d):
    result = double_ksym_intersect(d, KMatrix(1, 1), KMatrix(2, -2))
    assert len(result.residuals) == result.dimension
    assert all(r <= 1e-9 for r in result.residuals)


def test_double_ksymmetry_needs_sign_condition():
    with pytest.raises(ConstraintError, match="trace obstruction"):
        double_ksym_intersect(2, KMatrix(1, 1), KMatrix(1, 1))
