import numpy as np
import pytest

from pathmodel.decimate import rdp, vw
from pathmodel.canonical import canonicalize_group
from pathmodel.errors import InsufficientDataError, PathModelError
from pathmodel.geom3 import gaussian_smooth
from pathmodel.gmodel import (
    FLIP_ROTATIONS,
    REGULARIZATION,
    GaussianPathModel,
    ModelLibrary,
    Variant,
    build_model,
    keypoint_stats,
    make_variant,
    make_variants,
    teaching_keypoints,
)
from pathmodel.synth import ShapeSpec, gen_shape, teaching_sets

EPS = 0.05


@pytest.fixture(scope="module")
def half_circle_sets():
    return teaching_sets(ShapeSpec("half_circle"), count=8, seed=7)


@pytest.fixture(scope="module")
def half_circle_model(half_circle_sets):
    return build_model(half_circle_sets, EPS, name="half_circle")


def test_identical_sets_give_floor_covariance():
    clean = gen_shape(ShapeSpec("parabola", n_points=80))
    model = build_model([clean] * 4, EPS)
    for cov in model.covariances:
        np.testing.assert_allclose(cov, REGULARIZATION * np.eye(3), atol=1e-20)
    canon, _ = canonicalize_group([clean] * 4)
    smooth = gaussian_smooth(canon[0].points, 2.0)
    n = len(rdp(smooth, EPS))
    assert model.keypoint_count == n
    np.testing.assert_allclose(model.means, vw(smooth, n).points, atol=1e-12)


def test_noisy_model_invariants(half_circle_sets, half_circle_model):
    model = half_circle_model
    canon, _ = canonicalize_group(half_circle_sets)
    first = gaussian_smooth(canon[0].points, 2.0)
    assert model.keypoint_count == len(rdp(first, EPS))
    assert model.teaching_set_count == 8 and model.rdp_epsilon == EPS
    for cov in model.covariances:
        np.testing.assert_array_equal(cov, cov.T)
        assert np.linalg.eigvalsh(cov).min() >= REGULARIZATION * (1 - 1e-6)
    # means inside the per-set bounding box of their keypoints
    stacked = np.stack([k.points for k in teaching_keypoints(half_circle_sets, EPS)])
    assert np.all(model.means >= stacked.min(axis=0) - 1e-12)
    assert np.all(model.means <= stacked.max(axis=0) + 1e-12)


def test_build_is_deterministic(half_circle_sets, half_circle_model):
    again = build_model(half_circle_sets, EPS, name="half_circle")
    np.testing.assert_array_equal(again.means, half_circle_model.means)
    np.testing.assert_array_equal(again.covariances, half_circle_model.covariances)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_build_rejects_few_sets(half_circle_sets, m):
    with pytest.raises(InsufficientDataError, match="need >= 4"):
        build_model(half_circle_sets[:m], EPS)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_unregularized_rank_bound(half_circle_sets, m):
    kps = teaching_keypoints(half_circle_sets[:m], EPS)
    for i in range(len(kps[0])):
        sigma = keypoint_stats(kps, i, regularization=0.0).sigma
        assert np.sum(np.linalg.eigvalsh(sigma) > 1e-12) <= m - 1


def test_keypoint_stats_examples():
    g = keypoint_stats([np.array([[0.0, 0, 0]]), np.array([[2.0, 0, 0]])], 0)
    np.testing.assert_allclose(g.mu, [1, 0, 0])
    np.testing.assert_allclose(g.sigma, np.diag([2.0, 0, 0]) + REGULARIZATION * np.eye(3), atol=1e-15)

    same = [np.array([[1.0, 2, 3]])] * 3
    np.testing.assert_allclose(keypoint_stats(same, 0).sigma, REGULARIZATION * np.eye(3), atol=1e-20)

    corners = [np.array([[x, y, 0.0]]) for x, y in [(1, 1), (1, -1), (-1, 1), (-1, -1)]]
    g = keypoint_stats(corners, 0)
    # (1 + 1 + 1 + 1) / (4 - 1) along x and y, xy terms cancel
    np.testing.assert_allclose(g.mu, [0, 0, 0])
    np.testing.assert_allclose(g.sigma, np.diag([4 / 3, 4 / 3, 0]) + REGULARIZATION * np.eye(3), atol=1e-15)


def test_keypoint_stats_mismatched():
    with pytest.raises(PathModelError, match="mismatched"):
        keypoint_stats([np.zeros((3, 3)), np.zeros((4, 3))], 0)


def test_variants(half_circle_model):
    variants = make_variants(half_circle_model)
    assert len(variants) == 8
    assert len({v.variant for v in variants}) == 8
    assert variants[0].variant == Variant()
    np.testing.assert_array_equal(variants[0].means, half_circle_model.means)
    with pytest.raises(PathModelError):
        make_variants(variants[3])


def test_flip_examples():
    model = GaussianPathModel("m", np.array([[1.0, 2, 3], [0, 0, 1]]), np.stack([np.diag([1.0, 2, 3])] * 2))
    flipped = make_variant(model, "z", False)
    np.testing.assert_array_equal(flipped.means[0], [-1, -2, 3])
    for axis in ("x", "y", "z"):
        np.testing.assert_array_equal(make_variant(model, axis, False).covariances, model.covariances)


def test_flip_twice_and_reverse_twice(half_circle_model):
    for axis in ("x", "y", "z"):
        once = make_variant(half_circle_model, axis, True)
        rot = FLIP_ROTATIONS[axis]
        back_means = (once.means @ rot.T)[::-1]
        back_covs = (rot @ once.covariances @ rot.T)[::-1]
        np.testing.assert_allclose(back_means, half_circle_model.means, atol=1e-12)
        np.testing.assert_allclose(back_covs, half_circle_model.covariances, atol=1e-12)


def test_flips_form_a_group():
    rx, ry, rz = (FLIP_ROTATIONS[a] for a in "xyz")
    np.testing.assert_array_equal(rx @ ry, rz)
    for r in (rx, ry, rz):
        np.testing.assert_array_equal(r @ r, np.eye(3))
        assert np.linalg.det(r) == 1


def test_library(half_circle_model):
    lib = ModelLibrary((half_circle_model,))
    assert len(lib.candidates) == 8
    assert lib["half_circle"] is half_circle_model
    with pytest.raises(PathModelError, match="empty library"):
        ModelLibrary(())
    with pytest.raises(PathModelError, match="duplicate"):
        ModelLibrary((half_circle_model, half_circle_model))
