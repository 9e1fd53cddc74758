"""
Potentials

Finite-gap potentials, the K-symmetry constraint system and its nullspace,
structural identities, explicit charts and the off-diagonal factorization.
"""

from .potential import (
    Potential,
    potential_blocks,
    potential_assemble,
    vacuum_potential,
    unknown_layout,
    split_vector,
    ksym_laurent,
    ksym_residual,
    save_potential,
    load_potential,
    potential_from_json,
)
from .constraints import (
    ConstraintSystem,
    NullspaceResult,
    ALL_ENTRIES,
    ksym_constraints,
    ksym_nullspace,
    exact_rank,
    exact_nullspace,
    float_rank,
    expected_dimension,
    expected_freedom_split,
    freedom_split,
    beta_projection_rank,
    sample_from_nullspace,
    ksym_sample,
)
from .identities import (
    alpha_recursion_residual,
    beta_recursion_residual,
    alternating_beta_sum,
    structural_identities,
    diagonal_equivalences,
)
from .charts import (
    degree1_chart,
    degree2_chart,
    degree3_chart,
    imaginary_alpha_from_beta,
    offdiag_core,
    FactorizationResult,
    offdiag_factorize,
    potential_from_laurent,
    offdiag_sample,
    potential_scale,
    IntersectionResult,
    double_ksym_intersect,
)

__all__ = [
    'Potential', 'potential_blocks', 'potential_assemble', 'vacuum_potential',
    'unknown_layout', 'split_vector', 'ksym_laurent', 'ksym_residual',
    'save_potential', 'load_potential', 'potential_from_json',
    'ConstraintSystem', 'NullspaceResult', 'ALL_ENTRIES', 'ksym_constraints',
    'ksym_nullspace', 'exact_rank', 'exact_nullspace', 'float_rank', 'expected_dimension',
    'expected_freedom_split', 'freedom_split', 'beta_projection_rank',
    'sample_from_nullspace', 'ksym_sample',
    'alpha_recursion_residual', 'beta_recursion_residual', 'alternating_beta_sum',
    'structural_identities', 'diagonal_equivalences',
    'degree1_chart', 'degree2_chart', 'degree3_chart', 'imaginary_alpha_from_beta',
    'offdiag_core', 'FactorizationResult', 'offdiag_factorize', 'potential_from_laurent',
    'offdiag_sample', 'potential_scale', 'IntersectionResult', 'double_ksym_intersect',
]
