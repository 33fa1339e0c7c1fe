"""Exception types shared across the package."""


class BeadpathError(Exception):
    """Base class for all beadpath errors."""


class InvalidPolygon(BeadpathError):
    """Input polygon is degenerate, self-intersecting or mis-wound."""


class InvalidInterpolation(BeadpathError):
    """Beading interpolation requested between incompatible beadings."""


class WidthUnreachable(BeadpathError):
    """Requested bead width demands a non-positive volumetric flow."""
