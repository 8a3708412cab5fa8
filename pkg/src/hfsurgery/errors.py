"""Exception types shared across the package."""


class InvalidSequenceError(ValueError):
    """A value list does not form an abstract delta sequence."""


class InvalidSplitError(ValueError):
    """A refinement split violates the sign or sum conditions."""


class InternalInconsistencyError(RuntimeError):
    """An internal cross-check failed; this signals a bug, not bad input."""


class DecompositionError(InternalInconsistencyError):
    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class NotNegativeDefiniteError(ValueError):
    pass


class SearchOverflowError(RuntimeError):
    def __init__(self, message, size):
        super().__init__(message)
        self.size = size


class ParityMismatchError(ValueError):
    pass


class TruncationInstabilityError(InternalInconsistencyError):
    pass


class HypothesisNotMetError(ValueError):
    pass


class RelativeGradingError(ValueError):
    """An operation needs an absolutely graded module."""
