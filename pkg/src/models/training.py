"""Maximum-likelihood training of the autoregressive prior."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from src.models.autoregressive import AutoregressiveGmmModel
from src.models.optim import Adam
from src.protocols.schemas import PriorTrainingConfig
from src.utils.errors import NumericalFault, PreconditionError
from src.utils.seeding import spawn_streams

logger = logging.getLogger(__name__)


@dataclass
class TrainingResult:
    model: AutoregressiveGmmModel
    train_log_likelihood: float
    heldout_log_likelihood: float | None
    history: list[tuple[int, float]] = field(default_factory=list)


def cosine_learning_rate(base: float, final_fraction: float, step: int, steps: int) -> float:
    progress = step / max(steps - 1, 1)
    return base * (final_fraction + (1.0 - final_fraction) * 0.5 * (1.0 + math.cos(math.pi * progress)))


def mean_log_likelihood(
    model: AutoregressiveGmmModel, conditions: np.ndarray, xs: np.ndarray, chunk: int = 8192
) -> float:
    total = 0.0
    for start in range(0, xs.shape[0], chunk):
        total += model.log_likelihood_batch(conditions[start : start + chunk], xs[start : start + chunk]).sum()
    return total / xs.shape[0]


def train_prior(
    conditions: np.ndarray,
    xs: np.ndarray,
    joint_limits: np.ndarray,
    config: PriorTrainingConfig | None = None,
    init_model: AutoregressiveGmmModel | None = None,
) -> TrainingResult:
    """Fit p(x | condition) by minibatch Adam on the mean log-likelihood, cosine-decaying the step size."""
    config = config or PriorTrainingConfig()
    conditions = np.asarray(conditions, dtype=float)
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 2 or xs.shape[0] == 0:
        raise PreconditionError("training set must be a nonempty (n, dof) array")
    if conditions.ndim == 1:
        conditions = conditions.reshape(-1, 1) if conditions.size == xs.shape[0] else conditions.reshape(xs.shape[0], -1)
    if conditions.shape[0] != xs.shape[0]:
        raise PreconditionError("conditions and samples must have the same row count")

    model = init_model or AutoregressiveGmmModel.initialize(
        condition_dim=conditions.shape[1],
        joint_limits=joint_limits,
        hidden=config.hidden,
        n_components=config.n_components,
        leaky_slope=config.leaky_slope,
        sigma_min=config.sigma_min,
        seed=config.seed,
    )
    model.check_within_limits(xs)

    streams = spawn_streams(config.seed, ["split", "batches"])
    n_heldout = int(round(config.holdout_fraction * xs.shape[0]))
    if n_heldout >= xs.shape[0]:
        raise PreconditionError("holdout split leaves no training data")
    order = streams["split"].permutation(xs.shape[0]) if n_heldout else np.arange(xs.shape[0])
    train_idx, held_idx = order[n_heldout:], order[:n_heldout]
    c_train, x_train = conditions[train_idx], xs[train_idx]

    batch = min(config.batch_size, x_train.shape[0])
    optimizer = Adam(config.learning_rate)
    theta = model.params.copy()
    history: list[tuple[int, float]] = []
    for step in range(config.steps):
        optimizer.lr = cosine_learning_rate(config.learning_rate, config.final_lr_fraction, step, config.steps)
        idx = streams["batches"].integers(0, x_train.shape[0], size=batch)
        try:
            lp, grad = model.grad_log_likelihood_batch(c_train[idx], x_train[idx])
        except NumericalFault as exc:
            raise NumericalFault("prior training diverged", iteration=step, **exc.context) from exc
        if not np.all(np.isfinite(grad)):
            raise NumericalFault("prior training produced a non-finite gradient", iteration=step)
        theta = optimizer.step(theta, grad / batch)
        model = model.with_params(theta)
        if step % config.log_every == 0 or step == config.steps - 1:
            history.append((step, float(lp.mean())))
            logger.info("train_prior step %d/%d batch mean log-likelihood %.4f", step + 1, config.steps, lp.mean())

    train_ll = mean_log_likelihood(model, c_train, x_train)
    held_ll = mean_log_likelihood(model, conditions[held_idx], xs[held_idx]) if n_heldout else None
    logger.info("train_prior finished: train LL %.4f, held-out LL %s", train_ll, held_ll)
    return TrainingResult(model, train_ll, held_ll, history)
