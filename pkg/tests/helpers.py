import numpy as np

from pathmodel import synth
from pathmodel.geom3 import point_segment_distance, triangle_area
from pathmodel.gmodel import ModelLibrary, build_model

LIBRARY_EPSILON = 0.05


def random_rotation(rng) -> np.ndarray:
    """Uniformly random proper rotation (QR of a Gaussian matrix)."""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_similarity(points, rng, scale_range=(0.5, 2.0)):
    rot = random_rotation(rng)
    scale = rng.uniform(*scale_range)
    shift = rng.uniform(-10, 10, size=3)
    return scale * np.asarray(points) @ rot.T + shift


def random_polyline(rng, n):
    return np.cumsum(rng.normal(size=(n, 3)), axis=0)


def shape_library(kinds, epsilon=LIBRARY_EPSILON):
    models = []
    for i, kind in enumerate(kinds):
        sets = synth.teaching_sets(synth.ShapeSpec(kind), count=8, noise_fraction=0.02, seed=100 * i)
        models.append(build_model(sets, epsilon, name=kind))
    return ModelLibrary(tuple(models))


def rdp_reference(pts, eps, lo=None, hi=None):
    """Textbook recursive RDP, scalar distances, first maximum wins."""
    if lo is None:
        lo, hi = 0, len(pts) - 1
        return sorted({lo, hi} | set(rdp_reference(pts, eps, lo, hi)))
    best, best_d = None, -1.0
    for i in range(lo + 1, hi):
        d = point_segment_distance(pts[i], pts[lo], pts[hi])
        if d > best_d:
            best, best_d = i, d
    if best is None or not best_d > eps:
        return []
    return rdp_reference(pts, eps, lo, best) + [best] + rdp_reference(pts, eps, best, hi)


def vw_reference(pts, n):
    """Rescan every surviving triangle each round; smallest area, then smallest index."""
    alive = list(range(len(pts)))
    while len(alive) > n:
        areas = [(triangle_area(pts[alive[j - 1]], pts[alive[j]], pts[alive[j + 1]]), alive[j])
                 for j in range(1, len(alive) - 1)]
        _, victim = min(areas)
        alive.remove(victim)
    return alive
