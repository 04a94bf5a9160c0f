"""Unit tests for score functions, Chamfer distances and diversity."""

from __future__ import annotations

import math

import numpy as np
import pytest

from src.protocols.schemas import ScoreSpec
from src.scoring.chamfer import chamfer_k, diversity
from src.scoring.scores import grasp_score, ik_score, pc_score, toy_score
from src.simulators.grasp import ContactObservation
from src.simulators.kinematics import IkObservation
from src.utils.errors import PreconditionError


def _contacts(points, mask=None):
    points = np.asarray(points, dtype=float)
    mask = np.ones(points.shape[0], dtype=bool) if mask is None else np.asarray(mask)
    return ContactObservation(np.where(mask[:, None], points, np.nan), mask)


def _brute_force_chamfer(a, b):
    def sq(p, q):
        dx, dy, dz = p[0] - q[0], p[1] - q[1], p[2] - q[2]
        return dx * dx + dy * dy + dz * dz

    forward = math.fsum(min(sq(p, q) for q in b) for p in a)
    backward = math.fsum(min(sq(q, p) for p in a) for q in b)
    return forward + backward


# -- grasp ---------------------------------------------------------------------


def test_grasp_identical_observations_score_one():
    o = _contacts([[0.1, 0.2, 0.3], [0.0, -0.5, 0.2]], [True, False])
    assert grasp_score(o, o) == 1.0


def test_grasp_score_is_one_minus_mean_distance():
    observed = _contacts([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    simulated = _contacts([[0.4, 0.0, 0.0], [1.0, 0.6, 0.0]])
    assert grasp_score(simulated, observed) == pytest.approx(0.5)


def test_grasp_score_clips_at_zero():
    observed = _contacts([[0.0, 0.0, 0.0]])
    assert grasp_score(_contacts([[1.7, 0.0, 0.0]]), observed) == 0.0


def test_grasp_missing_contact_counts_as_unit_distance():
    observed = _contacts([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    simulated = _contacts([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]], [True, False])
    assert grasp_score(simulated, observed) == pytest.approx(0.5)


def test_grasp_contact_scale_sets_the_distance_unit():
    observed = _contacts([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    simulated = _contacts([[0.1, 0.0, 0.0], [1.0, 0.1, 0.0]])
    assert grasp_score(simulated, observed, scale=0.25) == pytest.approx(0.6)
    assert grasp_score(simulated, observed, scale=0.05) == 0.0


def test_grasp_missing_contact_costs_a_full_scale_unit():
    observed = _contacts([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    simulated = _contacts([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]], [True, False])
    assert grasp_score(simulated, observed, scale=0.25) == pytest.approx(0.5)


def test_grasp_score_built_from_spec_uses_its_contact_scale():
    score = ScoreSpec(kind="grasp", fingers=1, contact_scale=0.5).build()
    assert score(_contacts([[0.25, 0.0, 0.0]]), _contacts([[0.0, 0.0, 0.0]])) == pytest.approx(0.5)


def test_grasp_finger_count_mismatch_faults():
    with pytest.raises(PreconditionError):
        grasp_score(_contacts([[0.0, 0.0, 0.0]]), _contacts([[0.0, 0.0, 0.0]] * 2))


# -- ik ------------------------------------------------------------------------


def test_ik_collision_scores_zero():
    assert ik_score(IkObservation(True, (1.0, 1.0)), (1.0, 1.0)) == 0.0


def test_ik_exact_reach_scores_one():
    assert ik_score(IkObservation(False, (1.0, 1.0)), (1.0, 1.0)) == 1.0


def test_ik_score_halves_at_log_two():
    assert ik_score(IkObservation(False, (math.log(2.0), 0.0)), (0.0, 0.0)) == pytest.approx(0.5)


# -- chamfer -------------------------------------------------------------------


def test_chamfer_self_distance_is_zero():
    a = np.random.default_rng(0).normal(size=(30, 3))
    assert chamfer_k(a, a, 1) == 0.0


def test_chamfer_two_points():
    assert chamfer_k(np.array([[0.0, 0.0, 0.0]]), np.array([[1.0, 0.0, 0.0]]), 1) == 2.0


def test_chamfer_k1_equals_brute_force_exactly():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = rng.normal(size=(rng.integers(5, 25), 3))
        b = rng.normal(size=(rng.integers(5, 25), 3))
        assert chamfer_k(a, b, 1) == _brute_force_chamfer(a, b)


def test_chamfer_is_symmetric():
    rng = np.random.default_rng(2)
    a, b = rng.normal(size=(20, 3)), rng.normal(size=(15, 3))
    for k in (1, 3, 5):
        assert chamfer_k(a, b, k) == chamfer_k(b, a, k)


def test_chamfer_needs_k_points():
    with pytest.raises(PreconditionError):
        chamfer_k(np.zeros((2, 3)), np.zeros((10, 3)), 5)


def test_pc_score_values():
    a = np.random.default_rng(3).normal(size=(12, 3))
    assert pc_score(a, a, 0.1, 1) == 1.0
    assert pc_score(a, a, 0.1, 5) < 1.0
    b = a + np.array([1.0, 0.0, 0.0])
    assert pc_score(b, a, 0.1, 1) < pc_score(a + np.array([0.1, 0.0, 0.0]), a, 0.1, 1)


def test_pc_score_of_chamfer_ten_is_inverse_e():
    a = np.array([[0.0, 0.0, 0.0]])
    b = np.array([[math.sqrt(5.0), 0.0, 0.0]])
    assert pc_score(b, a, 0.1, 1) == pytest.approx(math.exp(-1.0))


def test_diversity_properties():
    rng = np.random.default_rng(4)
    clouds = [rng.normal(size=(10, 3)) for _ in range(4)]
    assert diversity([clouds[0]] * 3) == 0.0
    assert diversity(clouds[:2]) == chamfer_k(clouds[0], clouds[1], 1)
    assert diversity(clouds) == diversity(clouds[::-1])
    with pytest.raises(PreconditionError):
        diversity(clouds[:1])


# -- ranges --------------------------------------------------------------------


def test_scores_stay_in_unit_interval():
    """Fuzz every score kind with random observation pairs."""
    rng = np.random.default_rng(5)
    for _ in range(2000):
        k = 5
        m1, m2 = rng.random(k) > 0.2, rng.random(k) > 0.2
        g = grasp_score(_contacts(rng.normal(size=(k, 3)), m1), _contacts(rng.normal(size=(k, 3)), m2))
        i = ik_score(IkObservation(bool(rng.random() < 0.3), tuple(rng.normal(size=2) * 3)), tuple(rng.normal(size=2)))
        t = toy_score(rng.normal(size=1) * 3, 1.0)
        assert 0.0 <= g <= 1.0 and 0.0 <= i <= 1.0 and 0.0 <= t <= 1.0
    for _ in range(200):
        a, b = rng.normal(size=(8, 3)) * 2, rng.normal(size=(8, 3))
        assert 0.0 <= pc_score(a, b, 0.1, 5) <= 1.0


def test_built_chamfer_score_handles_empty_cuts():
    score = ScoreSpec(kind="chamfer", k_nn=5).build()
    observed = np.random.default_rng(6).normal(size=(20, 3))
    assert score(np.zeros((0, 3)), observed) == 0.0
    assert score(observed[:3], observed) == 0.0
    assert 0.0 < score(observed, observed) < 1.0


def test_built_ik_score_uses_observed_goal():
    score = ScoreSpec(kind="ik").build()
    assert score(IkObservation(False, (1.0, 0.0)), IkObservation(False, (1.0, 0.0))) == 1.0
