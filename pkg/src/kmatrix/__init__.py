"""
K-Matrices

Boundary K-matrices, their spectral theory and products of two of them.
"""

from .kmatrix import (
    KMatrix,
    k_eval,
    k_det,
    k_inverse,
    RootQuadruple,
    k_roots,
    k_roots_companion,
    k_null_set,
    near_null_set,
    det_quartic,
    k_kernels,
    KEigenSystem,
    k_eigen,
    ResidueSet,
    scalar_residues,
    k_inverse_residues,
    contour_residue,
    residue_oracle,
    row_reduce,
    residue_kernel_residuals,
    kernel_eigen_check,
)
from .products import (
    J,
    k_commutator,
    sign_condition_residual,
    check_sign_condition,
    ProductDecomposition,
    product_eta,
    k_product_decompose,
    product_reconstruction_residual,
    k_diagonal_ratio,
)
from .boundary import u_laurent, u_matrix, lemma_u_residual

__all__ = [
    'KMatrix', 'k_eval', 'k_det', 'k_inverse', 'RootQuadruple', 'k_roots',
    'k_roots_companion', 'k_null_set', 'near_null_set', 'det_quartic', 'k_kernels',
    'KEigenSystem', 'k_eigen', 'ResidueSet', 'scalar_residues', 'k_inverse_residues',
    'contour_residue', 'residue_oracle', 'row_reduce', 'residue_kernel_residuals', 'kernel_eigen_check',
    'J', 'k_commutator', 'sign_condition_residual', 'check_sign_condition',
    'ProductDecomposition', 'product_eta', 'k_product_decompose',
    'product_reconstruction_residual', 'k_diagonal_ratio',
    'u_laurent', 'u_matrix', 'lemma_u_residual',
]
