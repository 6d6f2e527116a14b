"""Exception hierarchy.

Every error raised on purpose by the package derives from ``PathModelError``,
which is itself a ``ValueError`` so callers that only care about bad input can
catch that.
"""


class PathModelError(ValueError):
    """Base class for all data and validation errors."""


class DegenerateInputError(PathModelError):
    """Input has no spread (zero covariance) or is otherwise unusable."""


class InsufficientDataError(PathModelError):
    """Too few teaching sets, points or keypoints for the requested operation."""


class SingularCovarianceError(PathModelError):
    """A covariance matrix is not positive definite."""


class CorrectionRangeError(PathModelError):
    """A correction cannot be placed inside the model's keypoint sequence."""


class FileFormatError(PathModelError):
    """A persisted file is malformed or violates its schema."""
