"""Score functions ``S(o', o)`` with values in [0, 1]."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from src.protocols.schemas import ScoreSpec
from src.scoring.chamfer import chamfer_k
from src.simulators.grasp import ContactObservation
from src.simulators.kinematics import IkObservation
from src.utils.errors import ConfigError, PreconditionError

ScoreFn = Callable[[object, object], float]


def grasp_score(simulated: ContactObservation, observed: ContactObservation, scale: float = 1.0) -> float:
    """``max(1 - mean finger distance / scale, 0)``.

    A finger with contact on one side only counts as a full ``scale``; a
    finger with no contact on either side agrees and counts as 0.
    """
    if scale <= 0:
        raise PreconditionError("contact scale must be positive")
    if simulated.k != observed.k:
        raise PreconditionError(f"finger counts differ: {simulated.k} vs {observed.k}")
    both = simulated.mask & observed.mask
    dist = np.where(simulated.mask == observed.mask, 0.0, 1.0)
    if both.any():
        dist[both] = np.linalg.norm(simulated.points[both] - observed.points[both], axis=1) / scale
    return max(1.0 - float(dist.mean()), 0.0)


def ik_score(obs: IkObservation, goal: tuple[float, float] | np.ndarray) -> float:
    if obs.collision:
        return 0.0
    return math.exp(-math.hypot(goal[0] - obs.ee_position[0], goal[1] - obs.ee_position[1]))


def pc_score(simulated: np.ndarray, observed: np.ndarray, tau: float = 0.1, k_nn: int = 5) -> float:
    if tau <= 0:
        raise PreconditionError("temperature must be positive")
    return math.exp(-tau * chamfer_k(simulated, observed, k_nn))


def toy_score(x: float | np.ndarray, target: float = 1.0) -> float:
    return math.exp(-abs(float(np.asarray(x).reshape(-1)[0]) - target))


def build_score(spec: ScoreSpec) -> ScoreFn:
    """Score callable for ``spec``; the second argument is always the observation."""
    if spec.kind == "grasp":
        fingers, scale = spec.fingers, spec.contact_scale

        def score(simulated: ContactObservation, observed: ContactObservation) -> float:
            if observed.k != fingers:
                raise PreconditionError(f"observation has {observed.k} fingers, score expects {fingers}")
            return grasp_score(simulated, observed, scale)

        return score
    if spec.kind == "ik":
        return lambda simulated, observed: ik_score(simulated, observed.ee_position)
    if spec.kind == "chamfer":
        tau, k_nn = spec.tau, spec.k_nn

        def score(simulated: np.ndarray, observed: np.ndarray) -> float:
            # a cut that kept too few points carries no shape evidence
            if simulated.shape[0] < k_nn:
                return 0.0
            return pc_score(simulated, observed, tau, k_nn)

        return score
    if spec.kind == "toy":
        return lambda simulated, observed: toy_score(simulated, float(observed))
    raise ConfigError(f"unknown score kind {spec.kind!r}")
