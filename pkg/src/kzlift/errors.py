"""Exception hierarchy shared by all modules."""


class KZError(Exception):
    """Base class for every error raised by the package."""


class StructuralError(KZError):
    """Malformed input: dangling ids, wrong endpoints, missing witnesses."""


class PreconditionError(KZError):
    """An operation was called on input outside its stated domain."""


class ResourceError(KZError):
    """A bounded enumeration would exceed its configured budget."""


class InconsistencyError(KZError):
    """A solve that should have a unique solution produced none.

    ``trace`` lists the pasting steps that were checked before the failure.
    """

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)


class CompositionUndefined(KZError):
    """Span composition needs a pullback that does not exist."""


class ConfigurationError(KZError):
    """Unknown suite, selector, doctrine or monad name."""
