"""Exception hierarchy for the simulation toolkit."""


class ComToolError(Exception):
    """Base class for all toolkit errors."""


class InvalidParameterError(ComToolError):
    """A physical parameter violates its validity domain."""


class ConfigError(ComToolError):
    """Malformed configuration document (unknown key, bad value, ...)."""


class DegenerateExpansionError(ComToolError):
    """Coupling expansion is singular (perfect mirror at a node/antinode)."""


class NoPhysicalRootError(ComToolError):
    """The mean-field fixed-point polynomial has no admissible root."""


class NearSingularSofteningError(ComToolError):
    """Selected mean-field root sits on the softening pole omega_m/(2 g_2)."""


class NoSteadyStateError(ComToolError):
    """Lyapunov solve requested for a non-Hurwitz drift matrix."""


class InvalidCovarianceError(ComToolError):
    """Covariance matrix fails a physicality or shape requirement."""


class InternalConsistencyError(ComToolError):
    """Two independent methods disagree beyond tolerance."""
