"""
Loop Algebra

Laurent polynomials, 2x2 Laurent matrices and their samples on the unit circle.
"""

from .laurent import (
    LaurentPoly,
    LaurentMatrix,
    laurent_product,
    involution_star,
    involution_invert,
    determinant,
    adjugate,
    commutator,
    exact_scalar,
    poly_divide,
)
from .circle import (
    UnitCircleGrid,
    LoopSample,
    circle_sample,
    fourier_blocks,
    fourier_coefficients,
    loop_evaluate,
    loop_derivative,
    loop_derivative_sample,
)

__all__ = [
    'LaurentPoly', 'LaurentMatrix', 'laurent_product', 'involution_star',
    'involution_invert', 'determinant', 'adjugate', 'commutator', 'exact_scalar', 'poly_divide',
    'UnitCircleGrid', 'LoopSample', 'circle_sample', 'fourier_blocks',
    'fourier_coefficients', 'loop_evaluate', 'loop_derivative', 'loop_derivative_sample',
]
