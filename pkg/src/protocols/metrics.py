"""Summary statistics for evaluation batches."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from src.simulators.kinematics import IkObservation


def success_rate(observations: Sequence[IkObservation]) -> float:
    """Fraction of configurations not in collision."""
    if not observations:
        return 0.0
    return sum(not o.collision for o in observations) / len(observations)


def score_summary(scores: np.ndarray) -> tuple[float, float]:
    """Mean and population standard deviation."""
    scores = np.asarray(scores, dtype=float)
    if scores.size == 0:
        return 0.0, 0.0
    return float(scores.mean()), float(scores.std())


def goal_distance(obs: IkObservation, goal: Sequence[float]) -> float:
    return math.hypot(goal[0] - obs.ee_position[0], goal[1] - obs.ee_position[1])
