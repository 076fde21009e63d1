"""Exception types shared across the package."""


class FridgeQpcError(Exception):
    """Base class for all errors raised by fridge_qpc."""


class ConfigError(FridgeQpcError):
    """Invalid run configuration.  Carries the offending field path."""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


class NonUniqueSteadyState(FridgeQpcError):
    """The Liouvillian has a degenerate null space (no unique fixed point)."""


class QuadratureFailure(FridgeQpcError):
    """Adaptive quadrature exhausted its subdivision budget before reaching
    the requested tolerance."""


class StructureError(FridgeQpcError):
    """Population dynamics do not close on themselves (coherences couple in);
    the generator was built outside the regime the caller assumed."""


class UnstableDynamics(FridgeQpcError):
    """The reduced population generator is not strictly relaxing; two-time
    correlation machinery would diverge."""


class SignConditionViolated(FridgeQpcError):
    """The detuning and the dot-lead level offset do not have opposite signs,
    so the measurement-rate threshold for cooling is not meaningful."""


class NumericalFailure(FridgeQpcError):
    """A single-point evaluation failed; carries the failing parameters."""
