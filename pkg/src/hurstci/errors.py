"""Exception hierarchy shared by every hurstci module."""


class HurstCIError(Exception):
    """Base class for all library errors."""

    code = "error"


class DomainError(HurstCIError, ValueError):
    """An argument lies outside the domain where a formula is defined."""

    code = "domain"


class InfeasibleError(DomainError):
    """The half-width ``a`` is too large for the requested ``n`` and ``H*``."""

    code = "infeasible"


class DegeneratePathError(DomainError):
    """The statistic S_n vanished, so ``log S_n`` is undefined."""

    code = "degenerate_path"


class BelowRangeError(DomainError):
    """A value passed to the inverse of g_n lies below its range."""

    code = "below_range"


class SimulationError(HurstCIError, RuntimeError):
    """The covariance could not be factorised for exact sampling."""

    code = "simulation"


class PathFormatError(HurstCIError, ValueError):
    """A path file could not be parsed or does not sit on the grid k/n."""

    code = "path_format"

    def __init__(self, message, kind="parse", row=None):
        super().__init__(message)
        self.kind = kind
        self.row = row
