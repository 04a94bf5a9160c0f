"""Unit tests for box clouds, hyperplane cuts and box fitting."""

from __future__ import annotations

import numpy as np
import pytest

from src.simulators.clouds import (
    Hyperplane,
    PartialCloudSimulator,
    bounding_radius,
    face_labels,
    fit_box,
    hyperplane_cut,
    make_box_cloud,
    normalize_unit_radius,
    random_cut,
    read_xyz,
    rotate_z,
    write_xyz,
)
from src.utils.errors import EmptyCutError

EXTENTS = np.array([0.5, 0.8, 0.3])


def test_cube_faces_receive_area_proportional_counts():
    p = 6000
    pc = make_box_cloud(np.ones(3), 0.0, p, seed=0)
    local = pc.copy()
    local[:, 2] -= 1.0
    counts = [
        np.sum(np.isclose(local[:, axis], sign, atol=1e-12))
        for axis in range(3)
        for sign in (1.0, -1.0)
    ]
    sigma = np.sqrt(p * (1 / 6) * (5 / 6))
    assert all(abs(c - p / 6) <= 4 * sigma for c in counts)


def test_points_lie_on_exactly_one_face():
    pc = make_box_cloud(EXTENTS, 0.4, 2000, seed=1)
    assert np.all(face_labels(pc, EXTENTS, 0.4) == 1)


def test_box_rests_on_the_plane():
    pc = make_box_cloud(EXTENTS, 0.4, 2000, seed=1)
    assert abs(pc[:, 2].min()) <= 1e-9


def test_yaw_equals_rotation_of_unyawed_box():
    a = rotate_z(make_box_cloud(EXTENTS, 0.0, 500, seed=4), 0.7)
    b = make_box_cloud(EXTENTS, 0.7, 500, seed=4)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_far_cut_is_identity():
    pc = make_box_cloud(EXTENTS, 0.0, 300, seed=2)
    np.testing.assert_array_equal(hyperplane_cut(pc, np.array([1.0, 0.0, 0.0]), 10.0), pc)


def test_cut_at_floor_keeps_bottom_face():
    pc = make_box_cloud(EXTENTS, 0.3, 3000, seed=2)
    kept = hyperplane_cut(pc, np.array([0.0, 0.0, 1.0]), 0.0)
    assert kept.shape[0] > 0
    np.testing.assert_allclose(kept[:, 2], 0.0, atol=1e-12)


def test_cut_partitions_the_cloud():
    pc = make_box_cloud(EXTENTS, 0.3, 1000, seed=2)
    plane = Hyperplane(np.array([0.6, 0.0, 0.8]), 0.1)
    kept = plane.apply(pc)
    dropped = pc[~plane.keep_mask(pc)]
    assert kept.shape[0] + dropped.shape[0] == pc.shape[0]


def test_cut_removing_everything_faults():
    pc = make_box_cloud(EXTENTS, 0.0, 100, seed=2)
    with pytest.raises(EmptyCutError):
        hyperplane_cut(pc, np.array([0.0, 0.0, 1.0]), -1.0)


def test_random_cut_keeps_enough_points():
    pc = make_box_cloud(EXTENTS, 0.0, 500, seed=3)
    plane, kept = random_cut(pc, np.random.default_rng(0))
    assert kept.shape[0] >= 50
    np.testing.assert_array_equal(kept, plane.apply(pc))


def test_partial_simulator_returns_empty_when_too_few_points():
    pc = make_box_cloud(EXTENTS, 0.0, 100, seed=2)
    sim = PartialCloudSimulator(Hyperplane(np.array([0.0, 0.0, 1.0]), -1.0), min_points=5)
    assert sim(pc).shape == (0, 3)


def test_fit_box_recovers_extents_and_yaw():
    pc = make_box_cloud(EXTENTS, -0.3, 2000, seed=5)
    h, yaw = fit_box(pc)
    np.testing.assert_allclose(h, EXTENTS, atol=5e-3)
    assert yaw == pytest.approx(-0.3, abs=2e-3)


def test_xyz_round_trip_is_exact(tmp_path):
    pc = make_box_cloud(EXTENTS, 0.2, 50, seed=6)
    write_xyz(tmp_path / "c.xyz", pc)
    np.testing.assert_array_equal(read_xyz(tmp_path / "c.xyz"), pc)


def test_normalised_cloud_has_unit_radius():
    pc = make_box_cloud(EXTENTS, 0.2, 400, seed=6) * 3.0 + 5.0
    assert bounding_radius(normalize_unit_radius(pc)) == pytest.approx(1.0)
