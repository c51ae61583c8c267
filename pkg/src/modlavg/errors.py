"""Exception types shared across the package."""


class PoleError(ValueError):
    """Evaluation requested at a pole of the function."""


class DomainError(ValueError):
    """Argument outside the supported domain (e.g. on a branch cut)."""


class ConvergenceError(RuntimeError):
    """A series or transformation failed to converge."""


class AccuracyError(RuntimeError):
    """A quadrature result did not meet the requested tolerance."""


class WindowError(ValueError):
    """An enumeration window was too small to contain the support."""


class InvariantViolation(ValueError):
    """Loaded data failed a structural invariant check."""


class InsufficientCoefficients(ValueError):
    """Not enough series coefficients for the requested accuracy."""
