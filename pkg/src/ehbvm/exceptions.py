"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedOrderError(ValueError):
    """Requested quadrature order is not supported."""


class ConfigurationError(ValueError):
    """A method configuration is invalid, or invalid for the given problem."""


class SingularityError(ArithmeticError):
    """A problem callback was evaluated at a singular state."""


class ProblemValidationError(ValueError):
    """A Hamiltonian problem failed its consistency checks."""


class GridMismatchError(ValueError):
    """Two series that must share a time grid do not."""


class ReferenceConsistencyError(RuntimeError):
    """The reference oracle disagreed with itself under step halving."""


class AlphaOverflowWarning(RuntimeWarning):
    """Recovered conservation multipliers are implausibly large."""
