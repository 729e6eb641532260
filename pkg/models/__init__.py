"""
Models package for digital net discrepancy computations
"""

from .errors import (
    NetError,
    ParameterError,
    DomainError,
    UnsupportedError
)
from .types import (
    Rational,
    Family,
    BitMatrix,
    ShiftVector,
    NetSpec,
    DyadicPointSet,
    EvalPoint,
    HaarIndex,
    RegionId,
    ShiftParams,
    TriParams,
    MCEstimate,
    OrderDiagnostics,
    BilykReport,
    AuditBranch,
    AuditReport,
    Mismatch,
    SuiteResult,
    SweepRow,
    SearchResult,
    CommandRequest,
    CommandResult
)

__all__ = [
    'NetError',
    'ParameterError',
    'DomainError',
    'UnsupportedError',
    'Rational',
    'Family',
    'BitMatrix',
    'ShiftVector',
    'NetSpec',
    'DyadicPointSet',
    'EvalPoint',
    'HaarIndex',
    'RegionId',
    'ShiftParams',
    'TriParams',
    'MCEstimate',
    'OrderDiagnostics',
    'BilykReport',
    'AuditBranch',
    'AuditReport',
    'Mismatch',
    'SuiteResult',
    'SweepRow',
    'SearchResult',
    'CommandRequest',
    'CommandResult'
]
