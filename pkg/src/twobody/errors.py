"""Exception types shared across the package."""


class TwoBodyError(Exception):
    """Base class for all package-specific errors."""


class UnrealizableFamily(TwoBodyError):
    """No matrix model is shipped for this space family."""


class EigenstructureMismatch(TwoBodyError):
    """Eigenspace dimensions of the squared geodesic bracket disagree with
    the multiplicities of the space."""


class UnsupportedModel(TwoBodyError):
    """No embedded (sphere/hyperboloid) model for this family."""


class DegenerateBlock(TwoBodyError):
    """A metric block is numerically singular."""


class BoundaryReached(TwoBodyError):
    """Integration hit a radial-interval guard. Carries the partial trajectory."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class NonFiniteState(TwoBodyError):
    """Integration produced a non-finite state. Carries the partial trajectory."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class DegenerateCenter(TwoBodyError):
    """The mass-center equation has no isolated solution (e.g. equal masses
    at antipodal points: any equator point solves it, with zero mass)."""


class NoBracket(TwoBodyError):
    """A root-finding scan found no sign change. Carries the scanned interval."""

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class NonConvergence(TwoBodyError):
    """Iterative minimisation exceeded its iteration cap."""
