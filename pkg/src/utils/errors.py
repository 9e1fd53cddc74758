"""
Error Types

One exception family for the whole package. Library code raises these,
the command layer in src/cli maps them to exit codes.
"""


class CMCError(Exception):
    """Base class for every error raised by the package."""


class DomainError(CMCError, ValueError):
    """Argument outside the numeric domain (λ = 0, H = 0, band too wide...)."""


class DegenerateKMatrixError(CMCError):
    """The root quadruple of det K is not four simple roots."""


class ConstraintError(CMCError, ValueError):
    """Reality, residue, sign or symmetry precondition failed."""


class RankConditionError(CMCError):
    """Rank decision or nullspace sampling could not be made reliably."""


class FactorizationError(CMCError):
    """Iwasawa factorization broke down (Gram matrix or normalization)."""


class CommutantError(CMCError):
    """M does not commute with the potential at the second boundary."""


class GridError(CMCError, ValueError):
    """A required row is missing from the domain grid."""


class CalibrationError(CMCError):
    """The metric calibration does not flatten the vacuum."""
