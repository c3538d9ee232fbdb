"""
Wronsk Exceptions

Every error raised by the engines derives from WronskError (itself a
ValueError). `exit_code` tells the CLI how to terminate:
    2: bad input (unknown potential, bad parameters, syntax, degenerate data)
    1: numerical failure (overflow, no convergence, missing bracket)
"""

from typing import Optional


class WronskError(ValueError):
    """Base class for all wronsk errors."""
    exit_code = 1


# ---------------------------------------------------------------------------
# INPUT ERRORS (exit 2)
# ---------------------------------------------------------------------------

class CatalogError(WronskError):
    """Unknown built-in potential name."""
    exit_code = 2


class ParameterError(WronskError):
    """Missing, non-positive or out-of-range parameter."""
    exit_code = 2


class ExpressionSyntaxError(WronskError):
    """Potential expression does not follow the grammar."""
    exit_code = 2

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class DegenerateInputError(WronskError):
    """Input that defines nothing, e.g. the (0, 0) mixture."""
    exit_code = 2


class GridError(ParameterError):
    """Invalid grid or a coordinate outside the integrated lattice."""


# ---------------------------------------------------------------------------
# NUMERICAL ERRORS (exit 1)
# ---------------------------------------------------------------------------

class IllPosedPotentialError(WronskError):
    """Potential is non-finite at a probe point."""


class TailError(WronskError):
    """Potential does not settle to its limit inside the clamp window."""


class IntegrationError(WronskError):
    """Non-finite data met while integrating."""


class DivergenceOverflowError(IntegrationError):
    """State magnitude exceeded the overflow guard."""

    def __init__(self, node: int, x: float):
        super().__init__(
            f"Solution overflow at node {node} (x = {x:.6g}); "
            "shrink the interval or raise the energy"
        )
        self.node = node
        self.x = x


class ContinuumError(WronskError):
    """Energy above the asymptotic limit: no convergent/divergent split."""


class UnsupportedDiagnosticError(WronskError):
    """Diagnostic undefined in the current basis mode."""


class BracketError(WronskError):
    """Root-finding bracket without a sign change."""


class ConvergenceError(WronskError):
    """Iteration budget exhausted before the bracket shrank to tolerance."""

    def __init__(self, message: str, bracket: Optional[tuple[float, float]] = None):
        super().__init__(message)
        self.bracket = bracket


class StateIndexError(WronskError):
    """Requested state index beyond the number of bound states found."""
