"""Planar kinematic chains and the IK simulator."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from src.simulators.obstacles import ObstacleSet, check_collision_batch
from src.utils.errors import PreconditionError


@dataclass(frozen=True)
class KinematicChain:
    """n revolute joints in the plane; joint angles accumulate along the chain."""

    link_lengths: tuple[float, ...]
    joint_limits: np.ndarray = field(default=None)  # type: ignore[assignment]
    base: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        lengths = tuple(float(v) for v in self.link_lengths)
        if len(lengths) < 2 or any(v <= 0 for v in lengths):
            raise PreconditionError("a chain needs at least two links of positive length")
        limits = (
            np.tile([-np.pi, np.pi], (len(lengths), 1))
            if self.joint_limits is None
            else np.array(self.joint_limits, dtype=float).reshape(len(lengths), 2)
        )
        if np.any(limits[:, 0] >= limits[:, 1]):
            raise PreconditionError("joint limits must satisfy lo < hi")
        limits.setflags(write=False)
        object.__setattr__(self, "link_lengths", lengths)
        object.__setattr__(self, "joint_limits", limits)
        object.__setattr__(self, "base", (float(self.base[0]), float(self.base[1])))

    @property
    def n_joints(self) -> int:
        return len(self.link_lengths)

    def within_limits(self, qs: np.ndarray) -> np.ndarray:
        return np.all((qs >= self.joint_limits[:, 0]) & (qs <= self.joint_limits[:, 1]), axis=-1)


@dataclass(frozen=True)
class IkObservation:
    collision: bool
    ee_position: tuple[float, float]

    def __post_init__(self) -> None:
        if not all(np.isfinite(self.ee_position)):
            raise PreconditionError("end-effector position must be finite")


def forward_kinematics_batch(chain: KinematicChain, qs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """End-effector points (B, 2) and link segments (B, n, 2, 2)."""
    qs = np.asarray(qs, dtype=float)
    if qs.ndim != 2 or qs.shape[1] != chain.n_joints:
        raise PreconditionError(f"configurations must have shape (B, {chain.n_joints}), got {qs.shape}")
    if not np.all(chain.within_limits(qs)):
        raise PreconditionError("configuration outside joint limits")
    angles = np.cumsum(qs, axis=1)
    lengths = np.asarray(chain.link_lengths)
    steps = np.stack([lengths * np.cos(angles), lengths * np.sin(angles)], axis=-1)
    base = np.asarray(chain.base)
    joints = np.concatenate([np.broadcast_to(base, (qs.shape[0], 1, 2)), base + np.cumsum(steps, axis=1)], axis=1)
    segments = np.stack([joints[:, :-1], joints[:, 1:]], axis=2)
    return joints[:, -1], segments


def forward_kinematics(chain: KinematicChain, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ee, segments = forward_kinematics_batch(chain, np.asarray(q, dtype=float)[None])
    return ee[0], segments[0]


def ik_simulate(chain: KinematicChain, obstacles: ObstacleSet, q: np.ndarray) -> IkObservation:
    return IkSimulator(chain, obstacles)(q)


class IkSimulator:
    """q -> (collision flag, end-effector position)."""

    def __init__(self, chain: KinematicChain, obstacles: ObstacleSet | None = None) -> None:
        self.chain = chain
        self.obstacles = obstacles or ObstacleSet()

    def simulate_batch(self, qs: np.ndarray) -> list[IkObservation]:
        ee, segments = forward_kinematics_batch(self.chain, qs)
        collided = check_collision_batch(segments, self.obstacles)
        return [IkObservation(bool(c), (float(p[0]), float(p[1]))) for c, p in zip(collided, ee)]

    def __call__(self, q: np.ndarray) -> IkObservation:
        return self.simulate_batch(np.asarray(q, dtype=float)[None])[0]
