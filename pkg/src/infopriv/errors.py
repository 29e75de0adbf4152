"""Exception hierarchy shared by every infopriv module."""


class InfoPrivError(Exception):
    """Base class for library errors."""


class DimensionError(InfoPrivError, ValueError):
    """Shapes, coordinates or index sets do not fit together."""


class DistributionError(InfoPrivError, ValueError):
    """A mass vector or channel row is negative or not normalized."""


class ConditioningError(InfoPrivError, ValueError):
    """Conditioning on an event of probability zero."""


class InfeasibleError(InfoPrivError):
    """A method would exceed its enumeration cap.

    ``cap`` names the limit that was hit and ``fallback`` the method the
    caller should try instead.
    """

    def __init__(self, message, cap=None, fallback=None):
        super().__init__(message)
        self.cap = cap
        self.fallback = fallback


class SamplingError(InfoPrivError):
    """Rejection sampling gave up before finding an admissible sample."""
