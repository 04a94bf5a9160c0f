"""Axis-aligned rectangular obstacles, named presets, and collision checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from src.simulators.geometry import segment_hits_rect, segments_intersect
from src.utils.errors import ConfigError, PreconditionError


@dataclass(frozen=True)
class Rectangle:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self) -> None:
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise PreconditionError(f"rectangle must have positive area: {self}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.xmin, self.ymin, self.xmax, self.ymax)


@dataclass(frozen=True)
class ObstacleSet:
    rectangles: tuple[Rectangle, ...] = ()

    def __len__(self) -> int:
        return len(self.rectangles)


def wall(x: float = 1.2, thickness: float = 0.1, y_low: float = -0.2, y_high: float = 2.5) -> ObstacleSet:
    return ObstacleSet((Rectangle(x, y_low, x + thickness, y_high),))


def window(
    x: float = 1.2,
    thickness: float = 0.1,
    gap_low: float = 0.2,
    gap_high: float = 0.8,
    y_low: float = -2.5,
    y_high: float = 2.5,
) -> ObstacleSet:
    """A wall with a gap: two rectangles above and below ``[gap_low, gap_high]``."""
    if not (y_low < gap_low < gap_high < y_high):
        raise PreconditionError("window gap must lie strictly inside the wall span")
    return ObstacleSet(
        (
            Rectangle(x, y_low, x + thickness, gap_low),
            Rectangle(x, gap_high, x + thickness, y_high),
        )
    )


def box(
    x_near: float = 1.0,
    x_far: float = 2.0,
    y_low: float = -0.6,
    y_high: float = 0.6,
    thickness: float = 0.1,
) -> ObstacleSet:
    """Three walls of a box opening towards the robot at ``x_near``."""
    return ObstacleSet(
        (
            Rectangle(x_far, y_low - thickness, x_far + thickness, y_high + thickness),
            Rectangle(x_near, y_low - thickness, x_far, y_low),
            Rectangle(x_near, y_high, x_far, y_high + thickness),
        )
    )


PRESETS = {"none": lambda: ObstacleSet(), "wall": wall, "window": window, "box": box}


def make_obstacles(preset: str, params: Mapping[str, float] | None = None) -> ObstacleSet:
    try:
        factory = PRESETS[preset]
    except KeyError:
        raise ConfigError(f"unknown obstacle preset {preset!r}; choose from {sorted(PRESETS)}") from None
    try:
        return factory(**dict(params or {}))
    except TypeError as exc:
        raise ConfigError(f"bad parameters for obstacle preset {preset!r}: {exc}") from exc


def check_collision_batch(segments: np.ndarray, obstacles: ObstacleSet) -> np.ndarray:
    """Collision flags for ``segments`` of shape (B, n, 2, 2).

    A configuration collides if any link touches any rectangle or any two
    non-adjacent links intersect.
    """
    starts, ends = segments[..., 0, :], segments[..., 1, :]
    hit = np.zeros(segments.shape[0], dtype=bool)
    for rect in obstacles.rectangles:
        hit |= np.any(segment_hits_rect(starts, ends, rect.as_tuple()), axis=1)
    n_links = segments.shape[1]
    for i in range(n_links):
        for j in range(i + 2, n_links):
            hit |= segments_intersect(starts[:, i], ends[:, i], starts[:, j], ends[:, j])
    return hit


def check_collision(segments: np.ndarray, obstacles: ObstacleSet) -> bool:
    return bool(check_collision_batch(np.asarray(segments, dtype=float)[None], obstacles)[0])
