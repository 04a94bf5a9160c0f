"""Unit tests for configuration validation."""

from __future__ import annotations

import pytest
from pydantic import ValidationError

from src.protocols.schemas import ExperimentConfig, MaceConfig


def test_defaults_select_four_of_sixty_four():
    assert MaceConfig().elite_count == 4


def test_empty_elite_set_is_rejected():
    with pytest.raises(ValidationError):
        MaceConfig(N=8, q=0.1)


def test_zero_iterations_are_allowed():
    assert MaceConfig(T=0).T == 0


def test_unknown_fields_are_rejected():
    with pytest.raises(ValidationError):
        MaceConfig(iterations=10)


@pytest.mark.parametrize(
    "data",
    [
        {"domain": "toy", "score": {"kind": "ik"}},
        {"domain": "ik", "score": {"kind": "ik"}},
        {"domain": "grasp", "score": {"kind": "grasp", "fingers": 3}},
        {"domain": "toy", "score": {"kind": "toy", "target": 5.0}},
        {"domain": "pc_complete", "score": {"kind": "chamfer", "tau": 0.0}},
    ],
)
def test_inconsistent_experiments_are_rejected(data):
    with pytest.raises(ValidationError):
        ExperimentConfig.model_validate(data)


def test_consistent_experiment(tmp_path):
    config = ExperimentConfig.model_validate(
        {"domain": "ik", "score": {"kind": "ik"}, "ik": {"prior_path": str(tmp_path / "prior.json")}}
    )
    assert config.method == "mace"
    assert config.ik.chain.link_lengths == [1.0, 0.8, 0.6, 0.4]


@pytest.mark.parametrize(
    "domain,kind,expected",
    [
        ("ik", "ik", {"T": 375, "N": 64, "M": 4, "q": 1 / 16, "learning_rate": 2e-5}),
        ("grasp", "grasp", {"T": 150, "N": 256, "M": 32, "q": 1 / 16, "learning_rate": 2e-4}),
        ("pc_complete", "chamfer", {"T": 100, "N": 256, "M": 128, "q": 1 / 32, "learning_rate": 1e-3}),
    ],
)
def test_domains_fill_their_own_tuning_defaults(domain, kind, expected, tmp_path):
    config = ExperimentConfig.model_validate(
        {"domain": domain, "score": {"kind": kind}, "ik": {"prior_path": str(tmp_path / "prior.json")}}
    )
    assert {name: getattr(config.mace, name) for name in expected} == expected


def test_grasp_defaults_shape_the_prior_and_score():
    config = ExperimentConfig.model_validate({"domain": "grasp", "score": {"kind": "grasp"}})
    assert config.cloud.sigma_z == 0.2
    assert config.cloud.object_latent is not None
    assert config.score.contact_scale == 0.25
    pc = ExperimentConfig.model_validate({"domain": "pc_complete", "score": {"kind": "chamfer"}})
    assert pc.cloud.sigma_z == 1.0
    assert pc.cloud.object_latent is None


def test_explicit_values_win_over_domain_defaults():
    config = ExperimentConfig.model_validate(
        {
            "domain": "grasp",
            "score": {"kind": "grasp", "contact_scale": 1.0},
            "mace": {"N": 32},
            "cloud": {"sigma_z": 1.0},
        }
    )
    assert config.mace.N == 32
    assert config.mace.M == 32
    assert config.cloud.sigma_z == 1.0
    assert config.score.contact_scale == 1.0


def test_second_diagonal_preset_has_five_fingers():
    config = ExperimentConfig.model_validate(
        {"domain": "grasp", "score": {"kind": "grasp"}, "cloud": {"finger_preset": "diagonal_minus_x"}}
    )
    assert config.score.fingers == 5
