"""Exception types shared across the package."""


class ControlSimError(Exception):
    """Base class for all package-specific failures."""


class ConfigError(ControlSimError):
    """A scenario configuration could not be parsed or validated."""


class NumericDomainError(ControlSimError):
    """A numeric routine left its valid domain (failed bracket, barrier overflow)."""


class DivergedError(ControlSimError):
    """A simulation produced a non-finite quantity."""

    def __init__(self, quantity: str, t: float):
        self.quantity = quantity
        self.t = t
        super().__init__(f"non-finite value in {quantity!r} at t={t:.6g}")
