"""Exception hierarchy shared by all modules."""


class SpinWeaveError(Exception):
    """Base class for every error raised by spinweave."""


class SizeError(SpinWeaveError, ValueError):
    """A requested system or enumeration exceeds a configured cap."""


class DomainError(SpinWeaveError, ValueError):
    """An argument lies outside the set of values the operation accepts."""


class PreconditionError(SpinWeaveError, ValueError):
    """An input matrix does not satisfy a numerical precondition.

    ``deviation`` carries the offending max-entry norm when one applies.
    """

    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


class CommutationError(PreconditionError):
    """Two operators that must commute do not."""

    def __init__(self, message, pair=None, deviation=None):
        super().__init__(message, deviation)
        self.pair = pair


class DegeneracyError(SpinWeaveError, ValueError):
    """A set of operators fails to resolve a degeneracy it was meant to lift."""

    def __init__(self, message, label=None, multiplicity=None):
        super().__init__(message)
        self.label = label
        self.multiplicity = multiplicity


class ConstructionError(SpinWeaveError, RuntimeError):
    """Independent constructions of the same operator disagree."""

    def __init__(self, message, name=None, deviation=None):
        super().__init__(message)
        self.name = name
        self.deviation = deviation


class UnsupportedError(DomainError):
    """The request is well formed but falls outside what the construction covers."""
