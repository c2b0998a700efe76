"""Exception types shared across the package.

Every error raised on purpose by this package derives from Vertex19Error so
callers can catch the whole family at once.
"""


class Vertex19Error(Exception):
    pass


class DegenerateParameter(Vertex19Error):
    """Model parameters violate a nondegeneracy requirement (p in {0, 1, -1},
    a vanishing inhomogeneity, or q**2 == zeta)."""


class ZeroArgument(Vertex19Error):
    """A spectral argument that must be nonzero was zero."""


class DegenerateSample(Vertex19Error):
    """A sampled parameter tuple hits a vanishing denominator of the
    relation or coefficient being evaluated."""


class OmegaZero(Vertex19Error):
    """Division by omega/omega-bar at one of its roots; caller must
    resample."""


class TooLarge(Vertex19Error):
    """Brute-force enumeration bound exceeded."""


class NonUniqueSolution(Vertex19Error):
    """Kernel dimension of the assembled linear system is not 1."""


class NormalizationFailure(Vertex19Error):
    """The designated unit coefficient vanishes in the kernel vector."""


class BackendMismatch(Vertex19Error):
    """Independent prime-field eliminations disagree on the kernel."""


class ConfigError(Vertex19Error):
    """Invalid command-line or run configuration."""


class IoError(Vertex19Error):
    """Report emission failed."""
