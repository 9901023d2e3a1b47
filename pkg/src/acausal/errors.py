"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes, so each class carries the code it
should surface as.
"""


class AcausalError(Exception):
    exit_code = 2


class DimensionError(AcausalError, ValueError):
    """Operands have incompatible shapes."""


class InvalidInputError(AcausalError, ValueError):
    """Malformed value, table or file."""


class InconsistentEnvironmentError(AcausalError):
    """Composition with local operations failed to normalize.

    ``deficit`` is ``total - 1`` for the offending input, so a causal loop
    shows up as a positive deficit and a grandfather paradox as ``-1``.
    """

    def __init__(self, message, deficit=None, inputs=None):
        super().__init__(message)
        self.deficit = deficit
        self.inputs = inputs


class BudgetExceededError(AcausalError):
    exit_code = 3


class ClaimFalsifiedError(AcausalError):
    """An internal assertion that should hold by construction did not."""

    exit_code = 4
