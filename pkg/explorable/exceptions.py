class ExplorableError(Exception):
    """Base class for every error raised by this package."""


class InvalidInstanceError(ExplorableError, ValueError):
    """An instance, vertex record or instance file violates the model."""


class DuplicateQueryError(ExplorableError, RuntimeError):
    """A vertex was queried twice within one session."""


class SizeLimitError(ExplorableError, ValueError):
    """An exhaustive routine was asked to work on an instance above its size guard."""


class PreconditionError(ExplorableError, RuntimeError):
    """A structural routine was called on a session in the wrong state."""


class UnknownFamilyError(ExplorableError, KeyError):
    """No generator or adversary is registered under the requested name."""


class IncompatiblePredictionError(ExplorableError, ValueError):
    """A learned mandatory set was handed to an algorithm that needs predicted weights."""
