"""Exception types shared across the package."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured size cap."""


class CapExceededError(ResourceLimitError):
    """The kappa search ran past its block-ordinal cap without finding a repeat.

    ``progress`` is the last block ordinal that was fully checked.
    """

    def __init__(self, n, cap, progress):
        self.n = n
        self.cap = cap
        self.progress = progress
        super().__init__(
            f"no repeated block of length {n} among the first {cap} blocks "
            f"(checked through ordinal {progress})"
        )


class ParityError(ValueError):
    """An odd block length was required."""


class InfeasibleParametersError(ValueError):
    """No decomposition satisfies the lemma's hypotheses at these parameters."""
