"""Rejection-sampling posterior oracle used to check tuned models.

A prior draw is accepted according to its score, so for scores in [0, 1]
the accepted set follows the score-weighted prior.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from src.adapt.protocols import ScoreFunction, Simulator, score_batch, simulate_batch
from src.utils.errors import PreconditionError, RejectionInfeasibleError
from src.utils.seeding import SeedLike, as_generator

logger = logging.getLogger(__name__)

AcceptRule = Callable[[np.ndarray, np.random.Generator], np.ndarray]
PriorSampler = Callable[[int, np.random.Generator], np.ndarray]


def accept_with_probability(scores: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    return rng.random(scores.shape[0]) < scores


def accept_above(threshold: float) -> AcceptRule:
    """Deterministic window: accept scores at or above ``threshold``."""

    def rule(scores: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        return scores >= threshold

    return rule


@dataclass
class RejectionResult:
    samples: np.ndarray
    acceptance_rate: float
    n_draws: int


def rejection_posterior(
    prior_sampler: PriorSampler,
    simulator: Simulator,
    score: ScoreFunction,
    observation: Any,
    accept_rule: AcceptRule = accept_with_probability,
    n_accepted: int = 1000,
    rng: SeedLike = None,
    *,
    batch_size: int = 4096,
    max_draws: int = 10_000_000,
    min_acceptance: float = 1e-5,
) -> RejectionResult:
    if n_accepted < 1:
        raise PreconditionError("n_accepted must be at least 1")
    rng = as_generator(rng)
    accepted: list[np.ndarray] = []
    n_kept = 0
    draws = 0
    while n_kept < n_accepted and draws < max_draws:
        size = min(batch_size, max_draws - draws)
        samples = prior_sampler(size, rng)
        scores = score_batch(score, simulate_batch(simulator, samples), observation)
        if np.any((scores < 0) | (scores > 1)):
            raise PreconditionError("acceptance needs scores in [0, 1]")
        keep = accept_rule(scores, rng)
        accepted.append(samples[keep])
        n_kept += int(keep.sum())
        draws += size

    rate = n_kept / draws
    if n_kept < n_accepted:
        if rate < min_acceptance:
            raise RejectionInfeasibleError(
                f"acceptance rate {rate:.3g} after {draws} draws is below {min_acceptance:g}"
            )
        logger.warning("rejection oracle hit the draw cap with %d of %d samples", n_kept, n_accepted)
    return RejectionResult(np.concatenate(accepted)[:n_accepted], rate, draws)


ORACLE_TOLERANCE = 3.0


@dataclass(frozen=True)
class OracleComparison:
    """Per-statistic gaps between tuned and oracle samples, in standard errors (worst dimension)."""

    mean_z: float
    std_z: float

    def within(self, tolerance: float = ORACLE_TOLERANCE) -> bool:
        return self.mean_z < tolerance and self.std_z < tolerance


def _std_and_se(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # delta method: Var(s) ~ (m4 - s^4) / (4 n s^2)
    n = x.shape[0]
    s = x.std(axis=0, ddof=1)
    m4 = ((x - x.mean(axis=0)) ** 4).mean(axis=0)
    var_s = np.maximum(m4 - s**4, 0.0) / (4.0 * n * np.where(s > 0, s * s, math.inf))
    return s, np.sqrt(var_s)


def _z(gap: np.ndarray, se: np.ndarray) -> float:
    return float((np.abs(gap) / np.where(se > 0, se, math.inf)).max())


def compare_to_oracle(samples: np.ndarray, oracle: np.ndarray) -> OracleComparison:
    """Mean and stddev differences between two sample sets in units of their standard errors."""
    a = np.asarray(samples, dtype=float).reshape(len(samples), -1)
    b = np.asarray(oracle, dtype=float).reshape(len(oracle), -1)
    if a.shape[0] < 2 or b.shape[0] < 2:
        raise PreconditionError("oracle comparison needs at least two samples per set")
    mean_se = np.sqrt(a.var(axis=0, ddof=1) / a.shape[0] + b.var(axis=0, ddof=1) / b.shape[0])
    (sa, se_a), (sb, se_b) = _std_and_se(a), _std_and_se(b)
    return OracleComparison(
        mean_z=_z(a.mean(axis=0) - b.mean(axis=0), mean_se),
        std_z=_z(sa - sb, np.sqrt(se_a**2 + se_b**2)),
    )
