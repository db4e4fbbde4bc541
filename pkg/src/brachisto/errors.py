"""Exception types shared across the solver modules."""


class BrachistoError(Exception):
    """Base class for all library errors."""


class OutOfRange(BrachistoError):
    """A scalar argument is outside its documented domain."""


class CurveNotAdmissible(BrachistoError):
    """A curve sample leaves the closed unit disk (beyond tolerance 1e-9)."""


class EmptyCurve(BrachistoError):
    """A curve has fewer than two samples or zero total arc length."""


class NonPositiveD(OutOfRange):
    """The angular-momentum-like family parameter D must be positive."""


class OutOfSector(BrachistoError):
    """Requested terminal angle lies outside the reachable smooth sector."""


class NoMidAngleCrossing(BrachistoError):
    """Symmetrization needs a sample crossing the half-angle theta_f / 2."""


class InadmissiblePerturbation(BrachistoError):
    """A variation would push the curve outside the admissible region."""


class CornerAtEndpoint(BrachistoError):
    """Corner-condition residuals are defined at interior parameters only."""


class NotOnBoundary(BrachistoError):
    """Constrained terminal point is not on the half-annulus boundary."""


class NegativeSpan(BrachistoError):
    """An angular span came out negative (inconsistent arc endpoints)."""


class OutsideDomain(BrachistoError):
    """A point lies outside the annulus the operation is defined on."""


class Unreachable(BrachistoError):
    """The oracle target has no finite-time grid path from the source."""


class InsufficientCoverage(BrachistoError):
    """A value grid node has no deposited sample within three grid cells."""


class GridTooCoarse(BrachistoError):
    """Too few interior nodes survive the residual exclusion bands."""
