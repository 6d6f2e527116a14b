"""Scoring demonstrations against a model library."""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass

import numpy as np

from .canonical import CanonicalParams, canonicalize_single, decanonicalize
from .decimate import Keypoints, vw_elimination_order, vw_from_order
from .errors import InsufficientDataError, PathModelError, SingularCovarianceError
from .geom3 import gaussian_smooth
from .gmodel import GaussianPathModel, KeypointGaussian, ModelLibrary, Variant

log = logging.getLogger(__name__)

_LOG_2PI = math.log(2.0 * math.pi)
# Eq. 1 rank; regularized covariances are always full rank.
_DIM = 3


def loglikelihood(x, g: KeypointGaussian) -> float:
    """Log-density of a 3-D normal with mean ``g.mu`` and covariance ``g.sigma`` at ``x``."""
    sigma = np.asarray(g.sigma, dtype=float)
    try:
        chol = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        raise SingularCovarianceError("singular covariance") from None
    diff = np.asarray(x, dtype=float) - np.asarray(g.mu, dtype=float)
    z = np.linalg.solve(chol, diff)
    logdet = 2.0 * np.log(np.diag(chol)).sum()
    return float(-0.5 * (z @ z) - 0.5 * (_DIM * _LOG_2PI + logdet))


def keypoint_scores(points, model: GaussianPathModel) -> np.ndarray:
    """Per-keypoint log-likelihoods of ``points`` (same length as the model)."""
    pts = np.asarray(points.points if isinstance(points, Keypoints) else points, dtype=float)
    if len(pts) != model.keypoint_count:
        raise InsufficientDataError(
            f"demonstration has {len(pts)} keypoints, model {model.name!r} has {model.keypoint_count}"
        )
    inv_chol, logdet = model._factors
    z = np.einsum("kij,kj->ki", inv_chol, pts - model.means)
    return -0.5 * np.einsum("ki,ki->k", z, z) - 0.5 * (_DIM * _LOG_2PI + logdet)


def score_model(demo_keypoints, model: GaussianPathModel) -> float:
    """Summed keypoint log-likelihood of a decimated demonstration under ``model``."""
    return float(keypoint_scores(demo_keypoints, model).sum())


@dataclass(frozen=True, eq=False)
class RankedCandidate:
    name: str
    variant: Variant
    score: float
    model: GaussianPathModel
    keypoints: Keypoints | None
    # True when the demonstration was too short to be decimated to this model
    too_short: bool = False


@dataclass(frozen=True, eq=False)
class RecognitionResult:
    ranked: list[RankedCandidate]
    demo_params: CanonicalParams
    canonical_demo: np.ndarray

    @property
    def best(self) -> RankedCandidate:
        return self.ranked[0]

    def best_for(self, name: str) -> RankedCandidate:
        """Highest-scoring variant of the model called ``name``."""
        for cand in self.ranked:
            if cand.name == name:
                return cand
        raise KeyError(name)

    def localize(self, name: str | None = None) -> np.ndarray:
        """Keypoint means of the best (or named) model in demonstration coordinates."""
        cand = self.best if name is None else self.best_for(name)
        return decanonicalize(cand.model.means, self.demo_params)


def recognize(demo, library: ModelLibrary, filter_sigma: float | None = None) -> RecognitionResult:
    """Rank every library candidate (all variants) against one demonstration.

    ``filter_sigma`` defaults to the sigma the library was built with.
    Candidates needing more keypoints than the demonstration has score
    ``-inf`` and are flagged ``too_short``.
    """
    if filter_sigma is None:
        filter_sigma = library.filter_sigma
    canon = canonicalize_single(demo)
    smoothed = gaussian_smooth(canon.points, filter_sigma)
    # The VW elimination order does not depend on the target count, so one
    # pass serves every candidate.
    order = vw_elimination_order(smoothed)
    by_count: dict[int, Keypoints] = {}
    scored = []
    for pos, cand in enumerate(library.candidates):
        n = cand.keypoint_count
        if n > len(smoothed):
            log.info("demo too short for %s (%d > %d points)", cand.name, n, len(smoothed))
            scored.append((-math.inf, pos, cand, None, True))
            continue
        if n not in by_count:
            by_count[n] = vw_from_order(smoothed, order, n)
        kps = by_count[n]
        scored.append((score_model(kps, cand), pos, cand, kps, False))
    # Stable sort on score keeps insertion order among ties.
    scored.sort(key=lambda item: -item[0])
    ranked = [
        RankedCandidate(cand.name, cand.variant, score, cand, kps, short)
        for score, _, cand, kps, short in scored
    ]
    return RecognitionResult(ranked=ranked, demo_params=canon.params, canonical_demo=smoothed)


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Best score per (model row, demonstration column)."""

    model_names: list[str]
    demo_labels: list[str]
    scores: np.ndarray

    @property
    def argmax(self) -> list[str]:
        """Winning model name for each demonstration column."""
        return [self.model_names[int(i)] for i in np.argmax(self.scores, axis=0)]

    def misclassifications(self) -> int:
        return sum(1 for lab, win in zip(self.demo_labels, self.argmax) if lab != win)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["model", *self.demo_labels])
        for name, row in zip(self.model_names, self.scores):
            w.writerow([name, *(repr(float(v)) for v in row)])
        w.writerow(["argmax", *self.argmax])
        return buf.getvalue()


def confusion_matrix(demos, library: ModelLibrary, filter_sigma: float | None = None) -> ConfusionMatrix:
    """Score each labelled demonstration against each model (max over its variants)."""
    demos = list(demos)
    if not demos:
        raise PathModelError("no demonstrations given")
    names = library.names
    scores = np.full((len(names), len(demos)), -math.inf)
    row = {n: i for i, n in enumerate(names)}
    for j, (_, demo) in enumerate(demos):
        result = recognize(demo, library, filter_sigma)
        for cand in result.ranked:
            i = row[cand.name]
            scores[i, j] = max(scores[i, j], cand.score)
    return ConfusionMatrix(model_names=names, demo_labels=[lab for lab, _ in demos], scores=scores)
