"""Exception types shared across the package."""


class ExcisimError(Exception):
    """Base class for all package-specific errors."""


class IncompatibleUnits(ExcisimError):
    """Conversion or scaling requested between different dimension classes."""


class DomainError(ExcisimError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ShapeError(ExcisimError, ValueError):
    """Array dimensions do not match the declared model size."""


class ValidationError(ExcisimError, ValueError):
    """Structurally invalid input (e.g. asymmetric coupling matrix)."""


class ConvergenceError(ExcisimError, RuntimeError):
    """An iterative solver failed to reach its tolerance."""


class MissingDisorderSpec(ExcisimError):
    """Disorder sampling requested on a model without a disorder sigma."""


class IntegrationError(ExcisimError, RuntimeError):
    """Adaptive quadrature failed to converge."""


class StepError(ExcisimError, RuntimeError):
    """Time integrator could not meet its tolerance."""


class GridError(ExcisimError, ValueError):
    """Time grid does not satisfy the propagator's requirements."""


class HorizonError(ExcisimError, ValueError):
    """Requested horizon time lies outside the computed grid."""


class SingularCoupler(ExcisimError, ZeroDivisionError):
    """Coupler detuning is zero; effective coupling undefined."""


class UnreachableCoupling(ExcisimError, ValueError):
    """No coupler splitting can produce the requested effective coupling."""


class SchemaError(ExcisimError, ValueError):
    """Configuration or input file does not match its published schema."""
