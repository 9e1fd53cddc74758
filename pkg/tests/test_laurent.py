"""Laurent polynomials, Laurent matrices and unit-circle sampling."""

import numpy as np
import pytest
import sympy

from src.loops import (
    LaurentMatrix,
    LaurentPoly,
    LoopSample,
    UnitCircleGrid,
    circle_sample,
    commutator,
    determinant,
    fourier_coefficients,
    involution_invert,
    involution_star,
    laurent_product,
    loop_derivative,
    loop_evaluate,
    poly_divide,
)
from src.utils.errors import DomainError


def _random_matrix(rng, lo, hi):
    blocks = rng.normal(size=(hi - lo + 1, 2, 2)) + 1j * rng.normal(size=(hi - lo + 1, 2, 2))
    return LaurentMatrix(lo, blocks)


def test_product_keeps_interior_zero():
    p = LaurentPoly(0, [1, 1]) * LaurentPoly(-1, [1, -1])
    assert (p.lo, p.hi) == (-1, 1)
    assert p.coefficient(0) == 0
    assert p.coefficient(1) == pytest.approx(-1)


def test_zero_is_canonical():
    p = LaurentPoly(-3, [1, 2, 3])
    z = p - p
    assert z.is_zero()
    assert z.lo == 0


def test_float_trim_drops_negligible_ends():
    p = LaurentPoly(0, [1e-20, 1.0, 1e-20])
    assert p.lo == 1 and p.hi == 1


def test_exact_mode_stays_rational():
    p = LaurentPoly(0, [sympy.Rational(1, 3)], exact=True) * 3
    assert p.exact
    assert p.coefficient(0) == 1


def test_evaluate_invert_and_derivative():
    p = LaurentPoly(-1, [2, 0, 3])  # 2/λ + 3λ
    assert p(2.0) == pytest.approx(1.0 + 6.0)
    assert p.invert()(2.0) == pytest.approx(4.0 + 1.5)
    assert p.derivative()(2.0) == pytest.approx(-0.5 + 3.0)


def test_matrix_product_matches_pointwise_product():
    rng = np.random.default_rng(1)
    a, b = _random_matrix(rng, -2, 1), _random_matrix(rng, -1, 3)
    lam = 0.4 + 0.9j
    assert np.allclose(laurent_product(a, b)(lam), a(lam) @ b(lam), atol=1e-12)


def test_involutions_evaluate_as_defined():
    rng = np.random.default_rng(2)
    x = _random_matrix(rng, -1, 2)
    lam = 0.3 + 0.7j
    assert np.allclose(involution_star(x)(lam), np.conj(x(np.conj(lam))).T, atol=1e-12)
    assert np.allclose(involution_invert(x)(lam), x(1 / lam), atol=1e-12)


def test_determinant_and_commutator():
    rng = np.random.default_rng(3)
    x = _random_matrix(rng, -1, 1)
    lam = 1.3 - 0.2j
    assert determinant(x)(lam) == pytest.approx(np.linalg.det(x(lam)))
    assert commutator(x, LaurentMatrix.identity()).max_abs() < 1e-12


def test_poly_divide_exact_quotient():
    q, r = poly_divide(LaurentPoly(0, [-1, 0, 1]), LaurentPoly(0, [-1, 1]))
    assert r.is_zero()
    assert q.allclose(LaurentPoly(0, [1, 1]))


def test_poly_divide_by_zero():
    with pytest.raises(ZeroDivisionError):
        poly_divide(LaurentPoly(0, [1]), LaurentPoly.zero())


def test_grid_size_must_be_power_of_two():
    with pytest.raises(DomainError):
        UnitCircleGrid(12)


def test_grid_is_closed_under_inversion():
    grid = UnitCircleGrid(16)
    assert np.allclose(grid.points[grid.inverse_index], np.conj(grid.points))


def test_fourier_coefficients_recover_band_limited_loop():
    rng = np.random.default_rng(4)
    x = _random_matrix(rng, -3, 3)
    sample = circle_sample(x, UnitCircleGrid(32))
    assert fourier_coefficients(sample, (-3, 3)).allclose(x, atol=1e-12)


def test_band_too_wide():
    sample = circle_sample(LaurentMatrix.identity(), UnitCircleGrid(8))
    with pytest.raises(DomainError, match="band too wide"):
        fourier_coefficients(sample, (-6, 6))


def test_interpolation_and_derivative_off_grid():
    rng = np.random.default_rng(5)
    x = _random_matrix(rng, -2, 2)
    sample = circle_sample(x, UnitCircleGrid(32))
    lam = np.exp(0.37j)
    dx = LaurentMatrix.from_entries([[e.derivative() for e in row] for row in x.entries()])
    assert np.allclose(loop_evaluate(sample, lam), x(lam), atol=1e-10)
    assert np.allclose(loop_derivative(sample, lam), dx(lam), atol=1e-9)


def test_loop_sample_shape_is_checked():
    with pytest.raises(ValueError):
        LoopSample(UnitCircleGrid(8), np.zeros((4, 2, 2)))
