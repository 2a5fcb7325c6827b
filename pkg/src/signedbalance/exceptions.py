"""Exception types shared across the package."""


class EdgeListError(ValueError):
    """Malformed or inconsistent edge-list input."""


class ConvergenceDomainError(ValueError):
    """The spectral shift lies at or inside the spectrum, so the walk sums diverge."""
