"""Shared exception types."""


class AccuracyError(RuntimeError):
    """An oracle computation could not certify the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ConfigurationError(RuntimeError):
    """A cell plan or tail certification could not be constructed."""


class SaturationError(RuntimeError):
    """A budget search exhausted its cap without reaching the target."""
