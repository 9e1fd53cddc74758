"""
Spectral Curves

Branch points, square-free reduction and genus of ν² = −det ξ_λ.
"""

from .curve import (
    SpectralCurve,
    spectral_curve,
    cluster_roots,
    genus,
    nu_symmetry_residual,
    unit_circle_reality_residual,
)

__all__ = [
    'SpectralCurve', 'spectral_curve', 'cluster_roots', 'genus',
    'nu_symmetry_residual', 'unit_circle_reality_residual',
]
