"""
Exception hierarchy for stabledrift.
Every validation failure raises a subclass of StableDriftError; the domain
errors also derive from ValueError so callers can catch either.
"""


class StableDriftError(Exception):
    """Base class for all stabledrift errors"""


class DomainError(StableDriftError, ValueError):
    """A parameter lies outside its admissible range"""


class EmptyInputError(DomainError):
    """An operation needing samples received none"""


class GridMismatchError(DomainError):
    """Paths that must share a time grid do not"""


class WindowError(DomainError):
    """A kernel window reaches outside [0, T]"""


class ResolutionError(DomainError):
    """Too few grid points fall inside a kernel window"""


class SmoothnessError(DomainError):
    """A derivative beyond the multiplier's smoothness was requested"""


class KernelError(StableDriftError, ValueError):
    """Kernel construction or certification failed"""


class ConfigError(StableDriftError, ValueError):
    """A study configuration is missing a key or violates a study hypothesis"""

    def __init__(self, message: str, key: str = None):
        super().__init__(message)
        self.key = key


class AcceptanceError(StableDriftError):
    """A study finished but its acceptance verdict failed"""
