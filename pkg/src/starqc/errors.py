"""Exception hierarchy shared across the package."""


class StarQCError(Exception):
    """Base class for all package errors."""


class ContractViolation(StarQCError, ValueError):
    """Caller broke an input contract (wrong dimension, nonpositive parameter...)."""


class DomainError(ContractViolation):
    """Argument outside the domain of a scalar function."""


class PreconditionError(StarQCError):
    """A documented precondition does not hold (missing minimizer, point outside K...)."""


class NonfiniteStencilError(StarQCError):
    """A finite-difference stencil touched a point where the function is +inf."""


class DegenerateRayError(ContractViolation):
    """Ray restriction requested with y equal to the base point."""


class ConstructionError(StarQCError):
    """A function builder rejected its inputs; ``witness`` holds the offending input."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class TMaxTooSmallError(StarQCError):
    """Sublevel set is not captured inside the bisection bracket."""


class InsufficientSmoothSamplesError(StarQCError):
    """Every sampled point was filtered out as nonsmooth."""


class ConfigError(StarQCError, ValueError):
    """Solver configuration outside the parameter window of its convergence theorem."""


class UsageError(StarQCError):
    """Bad CLI usage or unknown identifier."""


class UnsupportedDimensionError(UsageError):
    """Operation defined only in a fixed dimension (plots are planar)."""
