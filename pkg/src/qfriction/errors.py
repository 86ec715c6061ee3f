"""Exception types shared across the package."""


class QFrictionError(Exception):
    """Base class for package errors."""


class InvalidConfigError(QFrictionError, ValueError):
    """Physical parameters violate their invariants."""


class DomainError(QFrictionError, ValueError):
    """Arguments outside the domain where a formula is defined."""


class PoleError(QFrictionError, ZeroDivisionError):
    """Evaluation exactly on a pole of a response function."""


class InstabilityError(QFrictionError):
    """Requested a steady-state quantity at an unstable parameter point."""

    def __init__(self, eta, gamma, gamma_c):
        self.eta = eta
        self.gamma = gamma
        self.gamma_c = gamma_c
        super().__init__(
            f"no steady state: eta={eta!r}, Gamma={gamma!r} <= Gamma_c={gamma_c!r}"
        )


class ConvergenceError(QFrictionError):
    """Adaptive procedure hit its budget before meeting the tolerance.

    The best available estimate is kept on the exception.
    """

    def __init__(self, message, value=None, err=None):
        super().__init__(message)
        self.value = value
        self.err = err


class BracketError(QFrictionError, ValueError):
    """Root-finding interval does not bracket a sign change."""


class FitError(QFrictionError, ValueError):
    """Regression input is degenerate."""
