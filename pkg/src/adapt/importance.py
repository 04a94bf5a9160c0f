"""Importance-sampling adaptation baseline.

Samples come from the current model; each is weighted by its score times
the clipped density ratio between the original and the current model.
"""

from __future__ import annotations

import logging
from typing import Any, Optional

import numpy as np

from src.adapt.loop import PhaseTimer, SuccessFn, ascend, draw_scored_batch, mean_of, success_of
from src.adapt.protocols import ScoreFunction, Simulator, TunableModel
from src.adapt.records import AdaptationRun, IterationRecord
from src.protocols.schemas import MaceConfig

logger = logging.getLogger(__name__)


def effective_sample_size(weights: np.ndarray) -> float:
    total_sq = float(np.sum(weights * weights))
    if total_sq == 0.0:
        return 0.0
    return float(np.sum(weights)) ** 2 / total_sq


def importance_weights(
    base: TunableModel, current: TunableModel, stats: Any, scores: np.ndarray, clip: float
) -> tuple[np.ndarray, np.ndarray]:
    """``(weights, ratios)`` with ratios ``min(p_base / p_current, clip)``."""
    log_ratio = base.log_density(stats) - current.log_density(stats)
    with np.errstate(over="ignore"):
        ratios = np.minimum(np.exp(log_ratio), clip)
    return ratios * scores, ratios


def is_tune(
    model: TunableModel,
    simulator: Simulator,
    score: ScoreFunction,
    observation: Any,
    cfg: MaceConfig,
    *,
    success: Optional[SuccessFn] = None,
) -> tuple[TunableModel, AdaptationRun]:
    rng = np.random.default_rng(cfg.seed)
    timer = PhaseTimer()
    base = model
    theta_0 = model.snapshot()
    records: list[IterationRecord] = []

    for t in range(1, cfg.T + 1):
        batch = draw_scored_batch(model, simulator, score, observation, cfg, rng, timer, t)
        scores = batch.scores
        common = dict(
            t=t,
            scores=scores.tolist(),
            mean_score=float(scores.mean()),
            max_score=float(scores.max()),
            resample_attempts=batch.attempts,
            success_rate=success_of(success, batch.observations),
        )
        if batch.skipped:
            logger.warning("is iteration %d: all scores zero, step skipped", t)
            records.append(IterationRecord(**common, skipped=True))
            continue

        stats = model.prepare(batch.samples)
        weights, ratios = importance_weights(base, model, stats, scores, cfg.is_weight_clip)
        ess = effective_sample_size(weights)
        model = ascend(model, stats, weights, cfg, rng, timer, t)
        records.append(
            IterationRecord(
                **common,
                selected_count=int(np.count_nonzero(weights)),
                post_step_log_density=mean_of(model.log_density(stats)),
                ess=ess,
                max_weight=float(weights.max()),
                min_ratio=float(ratios.min()),
                max_ratio=float(ratios.max()),
            )
        )
        log = logger.info if t % cfg.log_every == 0 or t == cfg.T else logger.debug
        log("is t=%d/%d ess=%.2f max_weight=%.3f mean=%.4f", t, cfg.T, ess, weights.max(), scores.mean())

    run = AdaptationRun(
        method="is",
        config=cfg,
        theta_0=theta_0,
        theta_T=model.snapshot(),
        records=records,
        timings=timer.as_dict(),
    )
    return model, run
