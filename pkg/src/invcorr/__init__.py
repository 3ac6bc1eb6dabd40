"""Effective inverse of the correspondence between finite sets and shift-invariant measures."""

from .errors import (AuditFailure, BudgetExceeded, DegenerateOracle, DomainError, EmptyResult,
                     GenericityFailure, InsufficientPrefix, InvCorrError, LengthTooSmall,
                     NonStationary, NoUniqueStationary, ScheduleTooShort, SpecParseError,
                     SupportTooLarge, VerifyFailure, WeightError)
from .generic import check_generic
from .inverse import build, pad_to, verify
from .measure import (FiniteMPS, MeasureOracle, bernoulli, empirical, invariance_audit, markov,
                      mixture, pushforward)
from .words import Word, concat, density, occurrence_positions, prefix_frequency

__version__ = "0.1.0"

__all__ = [
    "AuditFailure", "BudgetExceeded", "DegenerateOracle", "DomainError", "EmptyResult",
    "GenericityFailure", "InsufficientPrefix", "InvCorrError", "LengthTooSmall",
    "NonStationary", "NoUniqueStationary", "ScheduleTooShort", "SpecParseError",
    "SupportTooLarge", "VerifyFailure", "WeightError",
    "check_generic", "build", "pad_to", "verify",
    "FiniteMPS", "MeasureOracle", "bernoulli", "empirical", "invariance_audit", "markov",
    "mixture", "pushforward",
    "Word", "concat", "density", "occurrence_positions", "prefix_frequency",
]
