"""Exception types raised by the toolkit."""


class InvalidArgumentError(ValueError):
    """An argument is outside the domain of the operation."""


class ConstraintViolationError(ValueError):
    """A design constraint (e.g. minimum ray offset) is not met."""


class EmptySelectionError(ValueError):
    """An operation needs at least one selected port."""


class ZeroBeamformerError(ValueError):
    """SINR is undefined for an all-zero combiner."""


class CapExceededError(RuntimeError):
    """Exhaustive search would enumerate more candidates than allowed."""

    def __init__(self, candidates: int, cap: int):
        self.candidates = candidates
        self.cap = cap
        super().__init__(
            f"exhaustive search needs {candidates} candidates, cap is {cap}")
