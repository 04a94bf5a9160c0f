"""Pieces shared by the MACE loop and the importance-sampling baseline."""

from __future__ import annotations

import logging
import math
import time
from collections import defaultdict
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Optional

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from src.adapt.protocols import ScoreFunction, Simulator, TunableModel, score_batch, simulate_batch, take
from src.models.optim import Adam
from src.protocols.schemas import MaceConfig
from src.utils.errors import AllZeroScoresError, NumericalFault

logger = logging.getLogger(__name__)

SuccessFn = Callable[[list], float]


class PhaseTimer:
    """Accumulates wall-clock seconds per named phase."""

    def __init__(self) -> None:
        self.totals: dict[str, float] = defaultdict(float)

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.totals[name] += time.perf_counter() - start

    def as_dict(self) -> dict[str, float]:
        return dict(self.totals)


@dataclass
class ScoredBatch:
    samples: np.ndarray
    observations: list
    scores: np.ndarray
    attempts: int
    skipped: bool = False


def _draw_once(
    model: TunableModel,
    simulator: Simulator,
    score: ScoreFunction,
    observation: Any,
    n: int,
    rng: np.random.Generator,
    timer: PhaseTimer,
) -> tuple[np.ndarray, list, np.ndarray]:
    with timer.phase("sample"):
        samples = model.sample(n, rng)
    with timer.phase("simulate"):
        observations = simulate_batch(simulator, samples)
    with timer.phase("score"):
        scores = score_batch(score, observations, observation)
    if not np.all(np.isfinite(scores)):
        raise NumericalFault("score function returned a non-finite value")
    return samples, observations, scores


def draw_scored_batch(
    model: TunableModel,
    simulator: Simulator,
    score: ScoreFunction,
    observation: Any,
    cfg: MaceConfig,
    rng: np.random.Generator,
    timer: PhaseTimer,
    t: int,
) -> ScoredBatch:
    """Sample, simulate and score ``cfg.N`` samples, applying the all-zero policy."""

    def attempt() -> tuple[np.ndarray, list, np.ndarray]:
        samples, observations, scores = _draw_once(model, simulator, score, observation, cfg.N, rng, timer)
        if not np.any(scores > 0):
            raise AllZeroScoresError(f"iteration {t}: all {cfg.N} scores are zero")
        return samples, observations, scores

    if cfg.zero_score_policy == "fault":
        return ScoredBatch(*attempt(), attempts=1)
    if cfg.zero_score_policy == "skip":
        samples, observations, scores = _draw_once(model, simulator, score, observation, cfg.N, rng, timer)
        return ScoredBatch(samples, observations, scores, attempts=1, skipped=not np.any(scores > 0))

    for attempt_ctx in Retrying(
        stop=stop_after_attempt(cfg.max_zero_score_retries),
        retry=retry_if_exception_type(AllZeroScoresError),
        reraise=True,
    ):
        with attempt_ctx:
            result = attempt()
            attempts = attempt_ctx.retry_state.attempt_number
    if attempts > 1:
        logger.info("iteration %d: resampled %d times after all-zero scores", t, attempts - 1)
    return ScoredBatch(*result, attempts=attempts)


def ascend(
    model: TunableModel,
    stats: Any,
    weights: np.ndarray,
    cfg: MaceConfig,
    rng: np.random.Generator,
    timer: PhaseTimer,
    t: int,
) -> TunableModel:
    """``cfg.M`` Adam ascent steps on the weighted objective, fresh optimizer state."""
    n = weights.shape[0]
    size = max(1, math.floor(cfg.minibatch_fraction * n))
    optimizer = Adam(cfg.learning_rate)
    theta = model.params.copy()
    with timer.phase("optimize"):
        for step in range(cfg.M):
            idx = np.sort(rng.choice(n, size=size, replace=False)) if size < n else np.arange(n)
            try:
                values, grad = model.weighted_grad(take(stats, idx), weights[idx])
            except NumericalFault as exc:
                context = {**exc.context, "iteration": t, "step": step, "snapshot": model.snapshot()}
                raise NumericalFault("objective became non-finite", **context) from exc
            if not (np.all(np.isfinite(values)) and np.all(np.isfinite(grad))):
                raise NumericalFault("objective became non-finite", iteration=t, step=step, snapshot=model.snapshot())
            theta = optimizer.step(theta, grad / size)
            model = model.with_params(theta)
    return model


def mean_of(values: np.ndarray) -> Optional[float]:
    return float(np.mean(values)) if values.size else None


def success_of(success: Optional[SuccessFn], observations: list) -> Optional[float]:
    return None if success is None else float(success(observations))
