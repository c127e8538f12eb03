"""Exception types shared across the package."""


class ToolkitError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(ToolkitError, ValueError):
    """Operands have incompatible dimensions."""


class CapacityError(ToolkitError, ValueError):
    """Requested dimension exceeds the supported maximum."""


class ShapeError(ToolkitError, ValueError):
    """Array does not have the required shape (square, power-of-two, ...)."""


class ContractViolationError(ToolkitError, ValueError):
    """Input breaks a documented precondition (hermiticity, positivity, trace)."""


class AnnihilationError(ToolkitError, ArithmeticError):
    """Operation output has near-zero trace, so normalization is undefined."""


class DomainError(ToolkitError, ValueError):
    """Scalar argument lies outside its permitted range."""


class EndpointSingularityError(DomainError):
    """Evaluation requested at a parameter endpoint where a logarithm diverges."""


class RootNotFoundError(ToolkitError, RuntimeError):
    """No sign change was found on the search grid.

    The ``grid`` and ``values`` attributes hold the scanned points for
    diagnosis when set by the solver.
    """

    def __init__(self, message, grid=None, values=None):
        super().__init__(message)
        self.grid = grid
        self.values = values


class FeasibilityError(ToolkitError, RuntimeError):
    """A constraint system has no real solution for the requested inputs."""


class InternalNumericError(ToolkitError, RuntimeError):
    """A computed quantity failed an internal consistency check."""
