"""Polyline decimation.

``rdp`` (Ramer-Douglas-Peucker) finds how many keypoints a path needs for a
given tolerance; ``vw`` (Visvalingam-Whyatt) reduces a path to an exact
keypoint count.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, PathModelError
from .geom3 import as_polyline, segment_distances, triangle_area


@dataclass(frozen=True, eq=False)
class Keypoints:
    """A subsequence of a source polyline, with the indices it was taken from."""

    points: np.ndarray
    source_indices: np.ndarray

    def __len__(self) -> int:
        return len(self.source_indices)


def _subsequence(arr: np.ndarray, keep) -> Keypoints:
    idx = np.asarray(sorted(keep), dtype=np.intp)
    return Keypoints(points=arr[idx], source_indices=idx)


def rdp(points, epsilon: float) -> Keypoints:
    """Ramer-Douglas-Peucker simplification.

    A point survives when its distance to the current chord is strictly
    greater than ``epsilon``. Endpoints are always kept.
    """
    arr = as_polyline(points, min_points=2)
    if epsilon < 0:
        raise PathModelError(f"epsilon must be >= 0, got {epsilon}")
    keep = [0, len(arr) - 1]
    stack = [(0, len(arr) - 1)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        d = segment_distances(arr[lo + 1 : hi], arr[lo], arr[hi])
        k = int(np.argmax(d))
        if d[k] > epsilon:
            mid = lo + 1 + k
            keep.append(mid)
            stack.append((lo, mid))
            stack.append((mid, hi))
    return _subsequence(arr, keep)


def vw_elimination_order(points) -> list[int]:
    """Order in which Visvalingam-Whyatt removes the interior points.

    The smallest triangle (ties: smallest index) is removed first and the
    areas of its surviving neighbours are recomputed. Stopping after ``k``
    removals gives the ``len - k`` point simplification.
    """
    arr = as_polyline(points, min_points=2)
    n = len(arr)
    pts = [tuple(p) for p in arr.tolist()]
    prev = list(range(-1, n - 1))
    nxt = list(range(1, n + 1))
    area = [0.0] * n
    heap = []
    for i in range(1, n - 1):
        area[i] = triangle_area(pts[i - 1], pts[i], pts[i + 1])
        heap.append((area[i], i))
    heapq.heapify(heap)
    removed = [False] * n
    order = []
    while heap:
        a, i = heapq.heappop(heap)
        if removed[i] or a != area[i]:
            continue
        removed[i] = True
        order.append(i)
        p, q = prev[i], nxt[i]
        nxt[p] = q
        prev[q] = p
        for j in (p, q):
            if 0 < j < n - 1:
                area[j] = triangle_area(pts[prev[j]], pts[j], pts[nxt[j]])
                heapq.heappush(heap, (area[j], j))
    return order


def vw_from_order(points: np.ndarray, order: list[int], target_count: int) -> Keypoints:
    """Apply a precomputed elimination order to reach ``target_count`` points."""
    n = len(points)
    if not 2 <= target_count <= n:
        raise InsufficientDataError(
            f"target count {target_count} outside [2, {n}] for a {n}-point polyline"
        )
    dropped = set(order[: n - target_count])
    return _subsequence(points, (i for i in range(n) if i not in dropped))


def vw(points, target_count: int) -> Keypoints:
    """Visvalingam-Whyatt simplification down to exactly ``target_count`` points."""
    arr = as_polyline(points, min_points=2)
    if not 2 <= target_count <= len(arr):
        raise InsufficientDataError(
            f"target count {target_count} outside [2, {len(arr)}] for a {len(arr)}-point polyline"
        )
    return vw_from_order(arr, vw_elimination_order(arr), target_count)
