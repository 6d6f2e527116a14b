"""Sweeping the RDP tolerance for one path model.

For every tolerance on a grid the model is rebuilt, a labelled
demonstration is scored against it and against every other model, and the
tolerance with the largest margin between the correct score and the best
incorrect one is selected.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, PathModelError
from .gmodel import DEFAULT_FILTER_SIGMA, ModelLibrary, build_model
from .recognize import recognize


@dataclass(frozen=True, eq=False)
class TuneCurve:
    epsilons: list[float]
    correct_scores: list[float]
    best_incorrect_scores: list[float]
    keypoint_counts: list[int]
    valid: list[bool]
    selected_epsilon: float

    @property
    def differences(self) -> list[float]:
        return [c - b for c, b in zip(self.correct_scores, self.best_incorrect_scores)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["epsilon", "keypoint_count", "correct", "best_incorrect", "difference", "valid"])
        for row in zip(self.epsilons, self.keypoint_counts, self.correct_scores,
                       self.best_incorrect_scores, self.differences, self.valid):
            eps, n, c, b, d, ok = row
            w.writerow([repr(eps), n, repr(c), repr(b), repr(d), int(ok)])
        return buf.getvalue()


def parse_grid(text: str) -> list[float]:
    """Parse ``start:stop:step`` into an inclusive ascending grid."""
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise PathModelError(f"grid must look like start:stop:step, got {text!r}") from None
    if not (step > 0 and stop >= start):
        raise PathModelError(f"grid needs step > 0 and stop >= start, got {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def tune_epsilon(
    teaching_sets,
    demo,
    other_models,
    epsilon_grid,
    filter_sigma: float = DEFAULT_FILTER_SIGMA,
    name: str = "target",
) -> TuneCurve:
    """Score the correct model against the others over a grid of RDP tolerances.

    Ties in the margin go to the smaller tolerance. Grid points whose model
    cannot be scored (fewer than 2 keypoints, or more keypoints than the
    demonstration has) are marked invalid and never selected.
    """
    grid = [float(e) for e in epsilon_grid]
    if not grid:
        raise PathModelError("empty epsilon grid")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise PathModelError("epsilon grid must be ascending")
    others = list(other_models)
    if not others:
        raise PathModelError("need at least one other model")
    if name in {m.name for m in others}:
        raise PathModelError(f"model name {name!r} clashes with another model")
    teaching_sets = list(teaching_sets)

    correct, incorrect, counts, valid = [], [], [], []
    for eps in grid:
        model = build_model(teaching_sets, eps, filter_sigma, name=name)
        lib = ModelLibrary((model, *others), filter_sigma=filter_sigma)
        result = recognize(demo, lib)
        good = max(c.score for c in result.ranked if c.name == name)
        bad = max(c.score for c in result.ranked if c.name != name)
        correct.append(good)
        incorrect.append(bad)
        counts.append(model.keypoint_count)
        valid.append(model.keypoint_count >= 2 and math.isfinite(good))

    margins = np.array([c - b if ok else -math.inf for c, b, ok in zip(correct, incorrect, valid)])
    if not any(valid):
        raise InsufficientDataError("no valid grid point: every tolerance failed")
    # argmax returns the first maximum, i.e. the smallest tolerance
    selected = grid[int(np.argmax(margins))]
    return TuneCurve(grid, correct, incorrect, counts, valid, selected)
