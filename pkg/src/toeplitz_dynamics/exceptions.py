"""Exception hierarchy shared across the package."""


class ToeplitzDynamicsError(Exception):
    """Base class for all package errors."""


class NotHermitian(ToeplitzDynamicsError, ValueError):
    pass


class NoConvergence(ToeplitzDynamicsError, RuntimeError):
    pass


class BadDimension(ToeplitzDynamicsError, ValueError):
    pass


class DimensionMismatch(ToeplitzDynamicsError, ValueError):
    pass


class InvalidParams(ToeplitzDynamicsError, ValueError):
    pass


class OutOfRange(ToeplitzDynamicsError, ValueError):
    pass


class NegativeEigenvalue(ToeplitzDynamicsError, ValueError):
    pass


class ZeroStartVector(ToeplitzDynamicsError, ValueError):
    pass


class LengthMismatch(ToeplitzDynamicsError, ValueError):
    pass


class ConfigError(ToeplitzDynamicsError, ValueError):
    """Raised for malformed sweep configuration; message names the field/line."""


class OptimizerFailure(UserWarning):
    """Emitted when local refinement of the discord minimisation does worse
    than the coarse grid it started from. The coarse minimum is kept."""
