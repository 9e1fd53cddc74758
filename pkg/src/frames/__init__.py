"""
Frames and Surfaces

Iwasawa factorization of holomorphic frames, frame fields over a domain
grid, Sym–Bobenko immersions, K-symmetry residuals and two-boundary dressing.
"""

from .iwasawa import (
    DEFAULT_TRUNCATION,
    IwasawaFactors,
    holomorphic_frame,
    toeplitz_system,
    iwasawa_factor,
    iwasawa_dense,
)
from .field import DomainGrid, FrameField, frame_field
from .surface import (
    SU2_BASIS,
    ImmersionGrid,
    su2_coordinates,
    sym_bobenko,
    metric_calibration,
    check_vacuum_calibration,
    metric_extract,
    metric_from_immersion,
    sinh_gordon_residual,
    boundary_derivative,
    boundary_residual,
    mean_curvature_estimate,
    conformality_residual,
)
from .symmetry import (
    k_derivative,
    phi_symmetry,
    frame_symmetry,
    positive_symmetry,
    killing_field,
    zeta_symmetry,
    family_symmetry,
    isospectral_residual,
    loop_reality_residual,
    row_report,
    ksym_report,
)
from .dressing import (
    DressingData,
    CommutantResult,
    dressing_at,
    dressing_matrix,
    commutant_decompose,
    dressing_reconstruct,
    ratio_divisor,
    two_boundary_report,
)

__all__ = [
    'DEFAULT_TRUNCATION', 'IwasawaFactors', 'holomorphic_frame', 'toeplitz_system',
    'iwasawa_factor', 'iwasawa_dense',
    'DomainGrid', 'FrameField', 'frame_field',
    'SU2_BASIS', 'ImmersionGrid', 'su2_coordinates', 'sym_bobenko', 'metric_calibration',
    'check_vacuum_calibration', 'metric_extract', 'metric_from_immersion', 'sinh_gordon_residual',
    'boundary_derivative',
    'boundary_residual', 'mean_curvature_estimate', 'conformality_residual',
    'k_derivative', 'phi_symmetry', 'frame_symmetry', 'positive_symmetry', 'killing_field',
    'zeta_symmetry', 'family_symmetry', 'isospectral_residual', 'loop_reality_residual',
    'row_report', 'ksym_report',
    'DressingData', 'CommutantResult', 'dressing_at', 'dressing_matrix',
    'commutant_decompose', 'dressing_reconstruct', 'ratio_divisor', 'two_boundary_report',
]
