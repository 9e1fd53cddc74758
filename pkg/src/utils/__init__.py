"""
Utility Modules

Provides logging, the error hierarchy and the result store.
"""

from .logger import setup_logging, get_logger
from .errors import (
    CMCError,
    DomainError,
    DegenerateKMatrixError,
    ConstraintError,
    RankConditionError,
    FactorizationError,
    CommutantError,
    CalibrationError,
    GridError,
)
from .result_store import ResultStore

__all__ = [
    'setup_logging', 'get_logger', 'ResultStore',
    'CMCError', 'DomainError', 'DegenerateKMatrixError', 'ConstraintError',
    'RankConditionError', 'FactorizationError', 'CommutantError', 'CalibrationError', 'GridError',
]
