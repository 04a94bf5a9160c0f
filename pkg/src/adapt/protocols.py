"""Structural interfaces the tuning loops consume.

The loops see the world only through a simulator and a score; they never
touch goals or posteriors directly.
"""

from __future__ import annotations

from typing import Any, Callable, Protocol, Sequence, runtime_checkable

import numpy as np

from src.models.snapshot import ParamSnapshot
from src.utils.seeding import SeedLike


@runtime_checkable
class TunableModel(Protocol):
    """A generative model with flat parameters and a differentiable objective.

    ``prepare`` turns raw samples into whatever ``log_density`` and
    ``weighted_grad`` consume (the samples themselves for explicit
    likelihoods, encoder statistics for the latent model).
    """

    @property
    def kind(self) -> str: ...

    @property
    def params(self) -> np.ndarray: ...

    def with_params(self, theta: np.ndarray) -> "TunableModel": ...

    def snapshot(self) -> ParamSnapshot: ...

    def sample(self, n: int, rng: SeedLike = None) -> np.ndarray: ...

    def prepare(self, samples: np.ndarray) -> Any: ...

    def log_density(self, stats: Any) -> np.ndarray: ...

    def weighted_grad(self, stats: Any, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]: ...


Simulator = Callable[[Any], Any]
ScoreFunction = Callable[[Any, Any], float]


def simulate_batch(simulator: Simulator, samples: Sequence[Any]) -> list[Any]:
    batch = getattr(simulator, "simulate_batch", None)
    if batch is not None:
        return list(batch(samples))
    return [simulator(x) for x in samples]


def score_batch(score: ScoreFunction, observations: Sequence[Any], observed: Any) -> np.ndarray:
    return np.array([score(o, observed) for o in observations], dtype=float)


def take(stats: Any, idx: np.ndarray) -> Any:
    """Row-select prepared statistics, which may be an array or a tuple of arrays."""
    if isinstance(stats, tuple):
        return tuple(s[idx] for s in stats)
    return stats[idx]
