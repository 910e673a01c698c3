"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A distribution parameter lies outside its domain."""


class EmptyInputError(ValueError):
    """An operation received an empty vector."""


class InsufficientSampleError(ValueError):
    """An operation needs at least two observations."""


class InvalidPmfError(ValueError):
    """A vector that should be a probability mass function is not one."""
