"""Exception types shared across the package."""


class InnervarError(Exception):
    """Base class for all package-specific failures."""


class DimensionMismatch(InnervarError):
    """State or ambient dimensions of the supplied objects do not agree."""


class NonInvertible(InnervarError):
    """Newton inversion of a deformation map failed (t too large)."""


class UnsupportedBoundary(InnervarError):
    """Operation requires a closed interface but the surface has boundary."""


class TubeTooNarrow(InnervarError):
    """Requested tubular width exceeds the focal distance of the surface."""


class EpsilonTooLarge(InnervarError):
    """Interface width parameter does not fit the tubular neighborhood."""


class StiffTail(InnervarError):
    """Profile ODE stalled before the tail tolerance was reached."""


class DegenerateReference(InnervarError):
    """Reference field has (numerically) zero flux through the interface."""


class ConfigError(InnervarError):
    """Experiment configuration is malformed or references unknown builders."""


class NumericalFailure(InnervarError):
    """An experiment ran but failed its numerical pass criterion."""
