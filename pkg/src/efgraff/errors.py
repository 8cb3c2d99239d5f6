"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or mutually incompatible inputs."""


class ConditioningError(InputError):
    """A matrix that must be invertible is singular at the working tolerance."""


class DegeneracyError(RuntimeError):
    """An internal postcondition failed, usually a sign of an inconsistent tolerance regime."""
