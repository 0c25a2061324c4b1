"""Exception types shared across the package.

The split mirrors the CLI exit codes: configuration-class errors (bad inputs,
misaligned grids, out-of-range parameters) exit with 2, convergence-class
errors (iteration budgets exhausted, bisection caps hit) exit with 3, and
I/O problems exit with 4 (plain OSError, nothing custom needed).
"""


class ConfigurationError(ValueError):
    """Inputs are structurally wrong (misaligned grid, unknown variant, bad flag combination)."""


class ResolutionError(ConfigurationError):
    """The requested grid resolution is too coarse to carry the stencil."""


class ValidationError(ValueError):
    """A value fails a documented precondition (negative strength, zero density, ...)."""


class DomainError(ValueError):
    """A point or parameter lies outside the mathematical domain of the operation."""


class SizeCapError(ValueError):
    """A dense-path request exceeds the hard problem-size cap."""


class ConvergenceError(RuntimeError):
    """An iterative solve did not reach its tolerance.

    Carries best-so-far diagnostics so callers can report partial results.
    """

    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class CapError(ConvergenceError):
    """A bracketing search hit its cap without finding a crossing."""
