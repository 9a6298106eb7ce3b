"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class CapabilityError(NotImplementedError):
    """The requested operation is not available for this model or dimension."""


class DegenerateInputError(ValueError):
    """The data carry no usable information (e.g. a constant column)."""


class FitError(RuntimeError):
    """Parameter estimation failed; ``diagnostics`` describes the optimizer state."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ExperimentAborted(RuntimeError):
    """Too many repetitions of a Monte Carlo experiment failed."""
