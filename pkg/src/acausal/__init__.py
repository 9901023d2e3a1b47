"""Exact tools for logically consistent classical processes without a
predefined causal order: the process polytope, its vertices, consistency
checks, signaling taxonomy, causal games and their linear programs.
"""
from .errors import (AcausalError, BudgetExceededError, ClaimFalsifiedError, DimensionError,
                     InconsistentEnvironmentError, InvalidInputError)
from .scenario import (DeterministicFunction, DeterministicLocalOp, EnvironmentProcess,
                       LocalOperation, Scenario)

__version__ = "0.1.0"

__all__ = [
    "AcausalError",
    "BudgetExceededError",
    "ClaimFalsifiedError",
    "DeterministicFunction",
    "DeterministicLocalOp",
    "DimensionError",
    "EnvironmentProcess",
    "InconsistentEnvironmentError",
    "InvalidInputError",
    "LocalOperation",
    "Scenario",
]
