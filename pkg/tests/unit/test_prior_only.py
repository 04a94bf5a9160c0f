"""Unit tests for best-of-prior sampling."""

from __future__ import annotations

import numpy as np

from src.adapt.prior_only import prior_only_best
from tests.helpers import TOY_TARGET, identity, toy_prior, toy_score


def _constant_one(x, target):
    return 1.0


def test_constant_score_returns_the_first_sample():
    prior = toy_prior()
    best = prior_only_best(prior, identity, _constant_one, TOY_TARGET, batches=3, n=8, rng=5)
    first = prior.sample(8, np.random.default_rng(5))[0]
    assert best.index == 0
    np.testing.assert_array_equal(best.sample, first)


def test_returned_score_is_the_maximum_of_the_dump():
    prior = toy_prior()
    best = prior_only_best(prior, identity, toy_score, TOY_TARGET, batches=4, n=16, rng=1)
    assert best.score == best.scores.max()
    assert best.index == int(np.argmax(best.scores))
    rescored = np.array([toy_score(x, TOY_TARGET) for x in best.samples])
    np.testing.assert_array_equal(rescored, best.scores)
    assert best.wall_clock >= 0.0


def test_more_batches_never_lower_the_best_score():
    prior = toy_prior()
    few = prior_only_best(prior, identity, toy_score, TOY_TARGET, batches=2, n=16, rng=2)
    many = prior_only_best(prior, identity, toy_score, TOY_TARGET, batches=4, n=16, rng=2)
    assert many.score >= few.score
