"""Cross-entropy adaptation of a generative model to an observation.

Each iteration samples from the current model, scores the simulated
outcomes against the observation, keeps every sample scoring at least the
``floor(q N)``-th largest score, and takes ``M`` ascent steps on the
log-density of the kept samples.
"""

from __future__ import annotations

import logging
from typing import Any, Optional

import numpy as np

from src.adapt.loop import PhaseTimer, SuccessFn, ascend, draw_scored_batch, mean_of, success_of
from src.adapt.protocols import ScoreFunction, Simulator, TunableModel, take
from src.adapt.records import AdaptationRun, IterationRecord
from src.protocols.schemas import MaceConfig

logger = logging.getLogger(__name__)


def elite_threshold(scores: np.ndarray, count: int) -> tuple[float, np.ndarray]:
    """``(delta, selected indices)`` where delta is the ``count``-th largest score.

    Ties are broken by lowest index when ranking; every sample scoring at
    least delta is selected.
    """
    order = np.argsort(-scores, kind="stable")
    delta = float(scores[order[count - 1]])
    return delta, np.flatnonzero(scores >= delta)


def mace_tune(
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
            logger.warning("mace iteration %d: all scores zero, step skipped", t)
            records.append(IterationRecord(**common, skipped=True))
            continue

        delta, selected = elite_threshold(scores, cfg.elite_count)
        stats = model.prepare(take(batch.samples, selected))
        model = ascend(model, stats, np.ones(selected.shape[0]), cfg, rng, timer, t)
        post = mean_of(model.log_density(stats))
        records.append(
            IterationRecord(**common, delta=delta, selected_count=int(selected.shape[0]), post_step_log_density=post)
        )
        log = logger.info if t % cfg.log_every == 0 or t == cfg.T else logger.debug
        log(
            "mace t=%d/%d delta=%.4f selected=%d mean=%.4f max=%.4f",
            t, cfg.T, delta, selected.shape[0], scores.mean(), scores.max(),
        )

    run = AdaptationRun(
        method="mace",
        config=cfg,
        theta_0=theta_0,
        theta_T=model.snapshot(),
        records=records,
        timings=timer.as_dict(),
    )
    return model, run
