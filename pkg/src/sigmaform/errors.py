"""Error types shared across the package."""


class SigmaFormError(Exception):
    """Base class for all package errors."""


class InputError(SigmaFormError, ValueError):
    """Malformed or inconsistent user input."""


class ResourceError(SigmaFormError):
    """A configured size or search budget would be exceeded."""


class PreconditionError(SigmaFormError, ValueError):
    """An operation was called outside its documented preconditions."""


class IndeterminateError(SigmaFormError):
    """A computation needed a definite membership verdict and got Unknown."""

    def __init__(self, message, blocking=None):
        super().__init__(message)
        self.blocking = blocking
