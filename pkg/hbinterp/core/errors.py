"""
Exception hierarchy for hbinterp.

Input and invariant violations derive from DomainError (exit code 2 on the
command line); numerical failures such as exhausted iteration budgets derive
from HbError directly (exit code 3).
"""

from typing import Any, Optional, Sequence


class HbError(Exception):
    """Base exception for all hbinterp errors."""

    exit_code: int = 3


class DomainError(HbError, ValueError):
    """A value violates a domain invariant (not finite, outside the disk, ...)."""

    exit_code = 2


class PoleProximityError(DomainError):
    """Evaluation point lies within the pole guard of a rational factor."""


class PreconditionError(DomainError):
    """The inputs do not satisfy an operation's precondition."""


class FactorizationError(DomainError):
    """Spectral factorization impossible for the given data."""


class SingularityError(HbError):
    """Function is not analytic at a requested boundary point."""

    exit_code = 2


class DivisionResidualError(HbError):
    """Synthetic division by (z - zeta) left a residual above tolerance."""


class NonConvergenceError(HbError):
    """An iteration, quadrature or bisection did not converge."""

    def __init__(self, message: str, last_values: Optional[Sequence[Any]] = None):
        super().__init__(message)
        self.last_values = list(last_values) if last_values is not None else []
