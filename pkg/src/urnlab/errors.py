"""Exception types shared across the package."""


class UrnLabError(Exception):
    """Base class for all urnlab errors."""


class ZeroProbabilityError(UrnLabError, ValueError):
    """A conditioning event (or reweighting) has zero probability."""


class CapExceededError(UrnLabError):
    """An enumeration or DP state space is larger than the configured cap."""


class DimensionError(UrnLabError, ValueError):
    """Inputs do not match the dimensions of the model or space."""
