"""JSON persistence for path sets and model libraries.

Both formats carry ``format_version: 1``. Floats are written with ``repr``
precision, so a save/load roundtrip is exact. Loading validates everything
and raises :class:`~pathmodel.errors.FileFormatError` with the offending
field path.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import FileFormatError, PathModelError
from .gmodel import REGULARIZATION, GaussianPathModel, ModelLibrary, Variant

FORMAT_VERSION = 1
SYMMETRY_TOL = 1e-12


@dataclass(eq=False)
class PathSet:
    label: str
    sets: list[np.ndarray] = field(default_factory=list)


def _dump(path, obj) -> None:
    text = json.dumps(obj, indent=1, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def _read(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileFormatError(f"{path}: cannot read file: {exc}") from None
    try:
        obj = json.loads(text, parse_constant=lambda c: float("nan"))
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise FileFormatError(f"{path}: top level must be an object")
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise FileFormatError(f"{path}: unknown format_version {version!r} (expected {FORMAT_VERSION})")
    return obj


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise FileFormatError(f"{where}: missing field {key!r}")
    return obj[key]


def _number(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise FileFormatError(f"{where}: expected a number, got {type(v).__name__}")
    v = float(v)
    if not math.isfinite(v):
        raise FileFormatError(f"{where}: non-finite value")
    return v


def _array(v, shape: tuple[int, ...], where: str) -> np.ndarray:
    """Strictly parse nested lists of numbers into an array of ``shape`` (-1 = any length)."""

    def walk(x, depth, path):
        if depth == len(shape):
            return _number(x, path)
        if not isinstance(x, list):
            raise FileFormatError(f"{path}: expected a list")
        if shape[depth] != -1 and len(x) != shape[depth]:
            raise FileFormatError(f"{path}: expected {shape[depth]} entries, got {len(x)}")
        return [walk(item, depth + 1, f"{path}[{i}]") for i, item in enumerate(x)]

    return np.array(walk(v, 0, where), dtype=float)


def save_path_set(path, data: PathSet) -> None:
    _dump(
        path,
        {
            "format_version": FORMAT_VERSION,
            "label": data.label,
            "sets": [np.asarray(s, dtype=float).tolist() for s in data.sets],
        },
    )


def load_path_set(path) -> PathSet:
    obj = _read(path)
    label = _require(obj, "label", str(path))
    if not isinstance(label, str):
        raise FileFormatError(f"{path}: label must be a string")
    raw = _require(obj, "sets", str(path))
    if not isinstance(raw, list):
        raise FileFormatError(f"{path}: sets must be a list")
    sets = []
    for i, s in enumerate(raw):
        where = f"{path}: sets[{i}]"
        if not isinstance(s, list):
            raise FileFormatError(f"{where}: expected a list")
        if len(s) < 2:
            raise FileFormatError(f"{where}: set length < 2")
        sets.append(_array(s, (-1, 3), where))
    return PathSet(label=label, sets=sets)


def _model_to_json(m: GaussianPathModel) -> dict:
    return {
        "name": m.name,
        "rdp_epsilon": m.rdp_epsilon,
        "keypoint_count": m.keypoint_count,
        "teaching_set_count": m.teaching_set_count,
        "keypoints": [{"mu": mu.tolist(), "sigma": sig.tolist()} for mu, sig in zip(m.means, m.covariances)],
        "variant": {"flip_axis": m.variant.flip_axis, "reversed": m.variant.reversed},
    }


def save_library(path, lib: ModelLibrary) -> None:
    _dump(
        path,
        {
            "format_version": FORMAT_VERSION,
            "filter_sigma": lib.filter_sigma,
            "models": [_model_to_json(m) for m in lib.models],
        },
    )


def _model_from_json(obj, where: str) -> GaussianPathModel:
    if not isinstance(obj, dict):
        raise FileFormatError(f"{where}: expected an object")
    name = _require(obj, "name", where)
    if not isinstance(name, str) or not name:
        raise FileFormatError(f"{where}.name: expected a non-empty string")
    eps = _number(_require(obj, "rdp_epsilon", where), f"{where}.rdp_epsilon")
    count = _require(obj, "keypoint_count", where)
    teach = _require(obj, "teaching_set_count", where)
    for key, val in (("keypoint_count", count), ("teaching_set_count", teach)):
        if isinstance(val, bool) or not isinstance(val, int) or val < 0:
            raise FileFormatError(f"{where}.{key}: expected a non-negative integer")
    kps = _require(obj, "keypoints", where)
    if not isinstance(kps, list):
        raise FileFormatError(f"{where}.keypoints: expected a list")
    if len(kps) != count:
        raise FileFormatError(f"{where}: keypoint_count {count} does not match {len(kps)} keypoints")
    if count < 2:
        raise FileFormatError(f"{where}: a model needs at least 2 keypoints")
    means, covs = [], []
    for i, kp in enumerate(kps):
        kw = f"{where}.keypoints[{i}]"
        if not isinstance(kp, dict):
            raise FileFormatError(f"{kw}: expected an object")
        means.append(_array(_require(kp, "mu", kw), (3,), f"{kw}.mu"))
        sig = _array(_require(kp, "sigma", kw), (3, 3), f"{kw}.sigma")
        if np.max(np.abs(sig - sig.T)) > SYMMETRY_TOL:
            raise FileFormatError(f"{kw}.sigma: covariance is not symmetric")
        # PD with the regularization floor (small slack for rounding)
        if np.linalg.eigvalsh(sig)[0] < REGULARIZATION * (1 - 1e-6):
            raise FileFormatError(f"{kw}.sigma: covariance is not positive definite above the regularization floor")
        covs.append(sig)
    var = _require(obj, "variant", where)
    if not isinstance(var, dict):
        raise FileFormatError(f"{where}.variant: expected an object")
    try:
        variant = Variant(var.get("flip_axis"), bool(var.get("reversed")))
    except PathModelError as exc:
        raise FileFormatError(f"{where}.variant: {exc}") from None
    if not variant.is_base:
        raise FileFormatError(f"{where}.variant: stored models must be base models")
    return GaussianPathModel(
        name=name,
        means=np.array(means),
        covariances=np.array(covs),
        variant=variant,
        rdp_epsilon=eps,
        teaching_set_count=teach,
    )


def load_library(path) -> ModelLibrary:
    obj = _read(path)
    sigma = _number(_require(obj, "filter_sigma", str(path)), f"{path}: filter_sigma")
    if sigma < 0:
        raise FileFormatError(f"{path}: filter_sigma must be >= 0")
    models = _require(obj, "models", str(path))
    if not isinstance(models, list):
        raise FileFormatError(f"{path}: models must be a list")
    if not models:
        raise FileFormatError(f"{path}: empty library")
    parsed = [_model_from_json(m, f"{path}: models[{i}]") for i, m in enumerate(models)]
    try:
        return ModelLibrary(tuple(parsed), filter_sigma=sigma)
    except PathModelError as exc:
        raise FileFormatError(f"{path}: {exc}") from None
