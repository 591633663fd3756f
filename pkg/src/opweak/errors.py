"""Exception types."""
from __future__ import annotations


class OpweakError(Exception):
    """Base class for library errors."""


class InputError(OpweakError, ValueError):
    """Malformed or out-of-contract input."""


class HypothesisViolation(InputError):
    """Input does not satisfy the structural hypotheses of a construction."""


class EigenConvergenceError(OpweakError, RuntimeError):
    """Jacobi sweeps did not reduce the off-diagonal mass below threshold."""

    def __init__(self, message: str, residual: float, sweeps: int):
        super().__init__(f"{message} (relative off-diagonal residual {residual:.3e} after {sweeps} sweeps)")
        self.residual = residual
        self.sweeps = sweeps
