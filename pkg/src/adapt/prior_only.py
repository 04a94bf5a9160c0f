"""Best-of-batches sampling from an untuned model."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Any

import numpy as np

from src.adapt.protocols import ScoreFunction, Simulator, TunableModel, score_batch, simulate_batch
from src.utils.errors import PreconditionError
from src.utils.seeding import SeedLike, as_generator


@dataclass
class BestSample:
    sample: np.ndarray
    observation: Any
    score: float
    index: int
    scores: np.ndarray
    samples: np.ndarray | None
    wall_clock: float


def prior_only_best(
    model: TunableModel,
    simulator: Simulator,
    score: ScoreFunction,
    observation: Any,
    batches: int,
    n: int,
    rng: SeedLike = None,
    *,
    keep_samples: bool = True,
) -> BestSample:
    """Draw ``batches`` batches of ``n`` samples and return the highest-scoring one.

    The first maximal sample wins. Batches are drawn in order from one
    stream, so more batches only ever extend the evaluated set.
    """
    if batches < 1 or n < 1:
        raise PreconditionError("batches and n must be at least 1")
    rng = as_generator(rng)
    start = time.perf_counter()
    all_scores: list[np.ndarray] = []
    all_samples: list[np.ndarray] = []
    best: tuple[float, int, np.ndarray, Any] | None = None
    for b in range(batches):
        samples = model.sample(n, rng)
        observations = simulate_batch(simulator, samples)
        scores = score_batch(score, observations, observation)
        i = int(np.argmax(scores))
        if best is None or scores[i] > best[0]:
            best = (float(scores[i]), b * n + i, samples[i], observations[i])
        all_scores.append(scores)
        if keep_samples:
            all_samples.append(samples)
    elapsed = time.perf_counter() - start
    assert best is not None
    return BestSample(
        sample=best[2],
        observation=best[3],
        score=best[0],
        index=best[1],
        scores=np.concatenate(all_scores),
        samples=np.concatenate(all_samples) if keep_samples else None,
        wall_clock=elapsed,
    )
