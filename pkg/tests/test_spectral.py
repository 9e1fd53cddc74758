"""Spectral curves: branch points, genus and the reality symmetries of −det ξ."""

import numpy as np
import pytest

from src.kmatrix import KMatrix
from src.loops import LaurentMatrix
from src.potentials import degree2_chart, offdiag_sample, potential_scale, vacuum_potential
from src.spectral import (
    cluster_roots,
    genus,
    nu_symmetry_residual,
    spectral_curve,
    unit_circle_reality_residual,
)
from src.utils.errors import DomainError

OFFDIAG_K = KMatrix.from_rational("1/2", "1/4")


def test_vacuum_curve():
    curve = spectral_curve(vacuum_potential())
    assert np.allclose(curve.a.coefficients_on(0, 2), [-1 / 16, -2 / 16, -1 / 16])
    assert curve.branch_at_zero and curve.branch_at_infinity
    assert curve.reduced
    assert curve.branch_points == []
    assert curve.genus == 0


def test_degree_one_offdiag_curve():
    curve = spectral_curve(offdiag_sample(1, OFFDIAG_K, seed=0), exact=True)
    weight = curve.a.coefficient(1) / -5
    assert np.allclose(curve.a.coefficients_on(0, 2), weight * np.array([2, -5, 2]))
    assert sorted(r.real for r, _ in curve.branch_points) == pytest.approx([0.5, 2.0])
    assert curve.genus == 1


@pytest.mark.parametrize("d", range(1, 7))
def test_offdiag_potentials_have_genus_one(d):
    xi = offdiag_sample(d, OFFDIAG_K, seed=d)
    assert genus(spectral_curve(xi, exact=True)) == 1


def test_exact_and_float_paths_agree():
    xi = offdiag_sample(1, OFFDIAG_K, seed=12)
    assert spectral_curve(xi, exact=True).genus == spectral_curve(xi, exact=False).genus


def test_scaling_does_not_change_genus():
    xi = offdiag_sample(2, OFFDIAG_K, seed=5)
    scaled = potential_scale(xi, [0.75, 0.5, 0.75])
    assert spectral_curve(scaled, exact=True).genus == spectral_curve(xi, exact=True).genus


def test_nu_symmetry_and_circle_reality():
    for xi in (vacuum_potential(), degree2_chart(0.3, 0.2, 0.4, 0.7)):
        curve = spectral_curve(xi, exact=False)
        assert nu_symmetry_residual(curve, xi.d) < 1e-12
        assert unit_circle_reality_residual(xi) < 1e-12


def test_degenerate_determinant():
    nilpotent = LaurentMatrix(0, [[[0, 1], [0, 0]]])
    with pytest.raises(DomainError, match="degenerate determinant"):
        spectral_curve(nilpotent)


def test_cluster_roots_merges_close_roots():
    clusters = cluster_roots(np.array([1.0, 1.0 + 1e-12, 2.0]))
    multiplicities = sorted(m for _, m in clusters)
    assert multiplicities == [1, 2]


def test_curve_json():
    data = spectral_curve(vacuum_potential()).to_json()
    assert data["genus"] == 0
    assert data["lowest_power"] == 0
    assert data["branch_at_zero"] is True
