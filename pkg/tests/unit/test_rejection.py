"""Unit tests for the rejection-sampling oracle."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.stats import ks_2samp

from src.adapt.rejection import accept_above, compare_to_oracle, rejection_posterior
from src.utils.errors import RejectionInfeasibleError
from tests.helpers import TOY_TARGET, identity, toy_prior, toy_score


def _constant(value):
    return lambda x, target: value


def test_unit_score_accepts_prior_samples():
    prior = toy_prior()
    result = rejection_posterior(prior.sample, identity, _constant(1.0), TOY_TARGET, n_accepted=500, rng=0)
    assert result.acceptance_rate == 1.0
    reference = prior.sample(500, np.random.default_rng(99))
    assert ks_2samp(result.samples[:, 0], reference[:, 0]).pvalue > 0.01


def test_half_score_accepts_half():
    result = rejection_posterior(toy_prior().sample, identity, _constant(0.5), TOY_TARGET, n_accepted=2000, rng=1)
    sigma = np.sqrt(0.25 / result.n_draws)
    assert abs(result.acceptance_rate - 0.5) <= 3 * sigma
    assert result.samples.shape[0] == 2000


def test_zero_score_is_infeasible():
    with pytest.raises(RejectionInfeasibleError):
        rejection_posterior(
            toy_prior().sample, identity, _constant(0.0), TOY_TARGET, n_accepted=10, rng=2, max_draws=10_000
        )


def test_window_rule_keeps_only_close_samples():
    rule = accept_above(np.exp(-0.05))
    result = rejection_posterior(toy_prior().sample, identity, toy_score, TOY_TARGET, rule, n_accepted=50, rng=3)
    assert np.all(np.abs(result.samples[:, 0] - TOY_TARGET) <= 0.05 + 1e-12)


def test_identical_sets_compare_equal():
    x = np.random.default_rng(4).normal(size=(40, 1))
    comparison = compare_to_oracle(x, x)
    assert comparison.mean_z == 0.0
    assert comparison.std_z == 0.0
    assert comparison.within()


def test_a_spread_mismatch_is_flagged_even_when_means_agree():
    rng = np.random.default_rng(5)
    narrow = rng.normal(0.0, 0.1, size=(2000, 1))
    wide = rng.normal(0.0, 1.0, size=(2000, 1))
    comparison = compare_to_oracle(narrow, wide)
    assert comparison.mean_z < 3.0
    assert comparison.std_z > 3.0
    assert not comparison.within()


def test_stddev_standard_error_matches_the_normal_formula():
    rng = np.random.default_rng(6)
    a = rng.normal(0.0, 1.0, size=(5000, 1))
    b = rng.normal(0.0, 1.1, size=(5000, 1))
    # se of each std is about 1/sqrt(2n) = 0.01, so a 0.1 gap sits near 7 standard errors
    assert 3.0 < compare_to_oracle(a, b).std_z < 11.0
