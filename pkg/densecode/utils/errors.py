class DenseCodeError(Exception):
    """Base class for all errors raised by densecode."""


class RejectedInputError(DenseCodeError, ValueError):
    """Input violates a documented invariant (shape, dims, party sets, probabilities...)."""


class PositivityError(RejectedInputError):
    """A matrix has an eigenvalue below the negative tolerance."""


class UnsupportedDimensionError(RejectedInputError):
    """The requested measure is not available for the given local dimensions."""


class ConfigError(RejectedInputError):
    """A sweep or evaluation configuration combines incompatible options."""
