"""Exception types raised across the package.

Everything numerical-input related derives from ValueError so callers can
catch broad misuse cheaply; conditions that signal an inconclusive or
inconsistent computation derive from RuntimeError.
"""


class DegenerateBase(ValueError):
    """Side lengths violate the strict triangle inequality or are not positive."""


class VertexCollision(ValueError):
    """Observer coincides with a base vertex, so viewing angles are undefined."""


class NotOnSurface(ValueError):
    """Cosine triple is not on the realizable surface within tolerance."""


class NotOnEllipse(ValueError):
    """Point does not lie on the requested angle-plane ellipse, or the arc is undefined there."""


class EmptyRegion(ValueError):
    """Region label names a surface region that is empty for this base."""


class IdenticallyZero(ValueError):
    """All polynomial coefficients vanish within tolerance; roots are undefined."""


class Inconsistent(ValueError):
    """Distance triple does not correspond to any planar point within tolerance."""


class InvalidGrid(ValueError):
    """Sampling grid is too coarse to be meaningful."""


class AmbiguousBand(RuntimeError):
    """Input sits on a region boundary where nearby interpretations disagree.

    Reported instead of silently guessing a side.
    """


class BoundaryHit(RuntimeError):
    """A brute-force minimum landed on the search boundary; enlarge the radius."""


class IoFailure(RuntimeError):
    """Export could not write its output file."""
