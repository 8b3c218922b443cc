"""Exception and warning types shared across the package."""


class SmoothlabError(Exception):
    """Base class for all package errors."""


class GridMismatchError(SmoothlabError):
    """Two grid functions do not live on the same grid."""


class DomainMarginError(SmoothlabError):
    """A region (plus any required difference margin) leaves the valid domain.

    The message always names the violated margin so callers can report it.
    """


class EmptyDomainError(SmoothlabError):
    """An operation required a nonempty valid domain."""


class SmoothnessTagError(SmoothlabError):
    """Numerical differentiation was requested on samples not tagged smooth."""


class LatticeError(SmoothlabError):
    """A translation lattice is inadmissible for the requested operation."""


class ConfigError(SmoothlabError):
    """Invalid run configuration or command-line input."""


class DegenerateScaleWarning(UserWarning):
    """A modulus was evaluated at a scale below the grid spacing (returns 0)."""
