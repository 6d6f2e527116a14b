"""Canonical Gaussian path models for 3-D paths taught by demonstration.

Typical flow: :func:`build_model` from a handful of teaching polylines,
collect models in a :class:`ModelLibrary`, :func:`recognize` a single
demonstration against it, then :meth:`RecognitionResult.localize` the
winning model into the demonstration's frame or :func:`correct_path` it.
"""

from .canonical import CanonicalParams, CanonicalSet, canonicalize_group, canonicalize_single, decanonicalize
from .correct import CorrectionResult, correct_path, locate_redundant_range
from .decimate import Keypoints, rdp, vw
from .errors import (
    CorrectionRangeError,
    DegenerateInputError,
    FileFormatError,
    InsufficientDataError,
    PathModelError,
    SingularCovarianceError,
)
from .gmodel import (
    GaussianPathModel,
    KeypointGaussian,
    ModelLibrary,
    Variant,
    build_model,
    keypoint_stats,
    make_variants,
)
from .recognize import ConfusionMatrix, RecognitionResult, confusion_matrix, loglikelihood, recognize, score_model
from .tune import TuneCurve, tune_epsilon

__all__ = [
    "CanonicalParams", "CanonicalSet", "canonicalize_group", "canonicalize_single", "decanonicalize",
    "CorrectionResult", "correct_path", "locate_redundant_range",
    "Keypoints", "rdp", "vw",
    "CorrectionRangeError", "DegenerateInputError", "FileFormatError", "InsufficientDataError",
    "PathModelError", "SingularCovarianceError",
    "GaussianPathModel", "KeypointGaussian", "ModelLibrary", "Variant", "build_model", "keypoint_stats",
    "make_variants",
    "ConfusionMatrix", "RecognitionResult", "confusion_matrix", "loglikelihood", "recognize", "score_model",
    "TuneCurve", "tune_epsilon",
]

__version__ = "0.1.0"
