"""Default resource caps shared across the package."""

DEFAULT_VERTEX_CAP = 10_000
DEFAULT_DIM_CAP = 200_000
DEFAULT_LP_BASIS_CAP = 2_000


class CapExceeded(ValueError):
    """A requested computation exceeds a configured resource cap."""
