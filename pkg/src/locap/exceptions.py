"""Exception types shared across the package."""


class DimensionCapExceeded(ValueError):
    """Requested Fock basis is larger than the configured cap."""


class InvalidModeSplit(ValueError):
    """Alice/Bob mode split leaves one party without modes."""


class SizeCapExceeded(ValueError):
    """Input exceeds the hard size limit of an exact algorithm."""


class BasisMismatch(ValueError):
    """Operator and state were built over different Fock bases."""


class InconclusiveGap(RuntimeError):
    """Singular-value gap too small to certify a rank estimate.

    Carries the offending estimate in ``.estimate``; raising call sites
    should suggest a larger sample count.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
