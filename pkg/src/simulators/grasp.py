"""Geometric grasp-contact extraction on point clouds.

Each finger is a ray from the origin; its contact is the point within
``radius`` of the ray that lies furthest along it. Clouds are assumed to
contain the origin, which :class:`GraspSimulator` enforces by centering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.simulators.clouds import PointCloud, bounding_radius, center_cloud
from src.utils.errors import ConfigError, PreconditionError

_SQ = 1.0 / np.sqrt(2.0)

FINGER_PRESETS: dict[str, np.ndarray] = {
    "diagonal_plus_x": np.array(
        [
            [_SQ, _SQ, 0.0],
            [_SQ, -_SQ, 0.0],
            [-_SQ, _SQ, 0.0],
            [-_SQ, -_SQ, 0.0],
            [1.0, 0.0, 0.0],
        ]
    ),
    "diagonal_minus_x": np.array(
        [
            [_SQ, _SQ, 0.0],
            [_SQ, -_SQ, 0.0],
            [-_SQ, _SQ, 0.0],
            [-_SQ, -_SQ, 0.0],
            [-1.0, 0.0, 0.0],
        ]
    ),
    "antipodal_x": np.array([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]]),
}


def finger_directions(preset: str) -> np.ndarray:
    try:
        return FINGER_PRESETS[preset].copy()
    except KeyError:
        raise ConfigError(f"unknown finger preset {preset!r}; choose from {sorted(FINGER_PRESETS)}") from None


@dataclass(frozen=True)
class ContactObservation:
    """k contact points; rows where ``mask`` is False are no-contact markers (NaN)."""

    points: np.ndarray
    mask: np.ndarray

    def __post_init__(self) -> None:
        if self.points.shape != (self.mask.shape[0], 3):
            raise PreconditionError("contact points must have shape (k, 3) matching the mask")

    @property
    def k(self) -> int:
        return int(self.mask.shape[0])

    def contacts(self) -> list[tuple[float, float, float] | None]:
        return [tuple(float(v) for v in p) if m else None for p, m in zip(self.points, self.mask)]


def grasp_contacts(pc: PointCloud, finger_dirs: np.ndarray, radius: float) -> ContactObservation:
    finger_dirs = np.atleast_2d(np.asarray(finger_dirs, dtype=float))
    if radius <= 0:
        raise PreconditionError("grasp radius must be positive")
    if not np.allclose(np.linalg.norm(finger_dirs, axis=1), 1.0, atol=1e-9):
        raise PreconditionError("finger directions must be unit vectors")
    t = pc @ finger_dirs.T
    sq_norm = np.einsum("ij,ij->i", pc, pc)[:, None]
    # distance to the ray: perpendicular offset ahead of the origin, |p| behind it
    dist_sq = np.where(t >= 0, np.maximum(sq_norm - t * t, 0.0), sq_norm)
    qualifies = dist_sq <= radius * radius
    mask = qualifies.any(axis=0)
    best = np.argmax(np.where(qualifies, t, -np.inf), axis=0)
    points = np.where(mask[:, None], pc[best], np.nan)
    return ContactObservation(points, mask)


class GraspSimulator:
    """Cloud -> contact observation for a fixed finger configuration.

    ``radius=None`` uses one tenth of each cloud's bounding radius.
    """

    def __init__(self, finger_dirs: np.ndarray, radius: float | None = None, *, center: bool = True) -> None:
        self.finger_dirs = np.atleast_2d(np.asarray(finger_dirs, dtype=float))
        self.radius = radius
        self.center = center

    def __call__(self, pc: PointCloud) -> ContactObservation:
        cloud = center_cloud(pc) if self.center else pc
        radius = self.radius if self.radius is not None else 0.1 * bounding_radius(cloud)
        return grasp_contacts(cloud, self.finger_dirs, radius)

    def simulate_batch(self, clouds: np.ndarray) -> list[ContactObservation]:
        return [self(pc) for pc in clouds]
