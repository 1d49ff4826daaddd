"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class PreconditionError(ValueError):
    """Input data violates a precondition of a check (support, symmetry, normalization)."""


class SolverError(RuntimeError):
    """An eigen- or quadrature solver failed to reach the requested accuracy."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class RefinementError(RuntimeError):
    """Dyadic refinement did not terminate within the depth cap."""


class PartitionError(ValueError):
    """A mass oracle is inconsistent (negative or non-additive)."""
