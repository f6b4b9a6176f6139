"""Exception hierarchy shared by every cfbi module."""


class CircleFitError(Exception):
    """Base class for all errors raised by cfbi."""


class DegenerateTriplet(CircleFitError):
    """Three points are (numerically) collinear; no unique circle exists."""


class EmptyAccumulator(CircleFitError):
    """No vote landed in the accumulator."""


class InsufficientPoints(CircleFitError):
    """Fewer than three points were supplied to a fitter."""


class NoAcceptedCandidate(CircleFitError):
    """A randomized baseline exhausted its budget without an acceptable circle."""


class SingularSystem(CircleFitError):
    """The least-squares system is rank deficient (e.g. collinear input)."""


class SeparationInfeasible(CircleFitError):
    """Outlier rejection sampling could not satisfy the separation constraint."""


class EmptyList(CircleFitError):
    """Aggregation was requested over zero reports."""


class MissingCell(CircleFitError):
    """Detectors were evaluated on grids that do not match."""


class IncompleteGrid(CircleFitError):
    """A heatmap was requested for a grid with missing cells."""


class ImageError(CircleFitError):
    """Base class for edge-image loading failures."""


class FileMissing(ImageError, FileNotFoundError):
    pass


class MalformedHeader(ImageError):
    pass


class UnsupportedFormat(ImageError):
    pass
