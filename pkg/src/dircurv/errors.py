"""Exception hierarchy for graph input, connectivity, and numerics."""

from __future__ import annotations


class GraphFormatError(ValueError):
    """Input text or JSON does not describe a valid simple directed graph."""


class NotStronglyConnectedError(ValueError):
    """The requested analysis requires a strongly connected graph."""


class NumericalError(RuntimeError):
    """A numerical routine failed to meet its accuracy contract."""


class SingularMatrixError(NumericalError):
    """A linear system is singular to working precision."""

    def __init__(self, message: str, *, pivot: float | None = None,
                 residual: float | None = None):
        super().__init__(message)
        self.pivot = pivot
        self.residual = residual


class PerronConvergenceError(NumericalError):
    """The stationary-vector solve did not reach the required residual."""

    def __init__(self, message: str, *, residual: float):
        super().__init__(message)
        self.residual = residual
