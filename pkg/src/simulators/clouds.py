"""Box point clouds, hyperplane cuts and box fitting.

Clouds are ``(P, 3)`` float arrays. Boxes rest on the xy plane, centred on the z
axis, and are yawed about z.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from src.utils.errors import EmptyCutError, PreconditionError
from src.utils.seeding import SeedLike, as_generator

PointCloud = np.ndarray

# (fixed axis, sign) per face: +x, -x, +y, -y, +z, -z
_FACES = [(0, 1.0), (0, -1.0), (1, 1.0), (1, -1.0), (2, 1.0), (2, -1.0)]


def face_areas(half_extents: np.ndarray) -> np.ndarray:
    hx, hy, hz = half_extents
    return np.array([4 * hy * hz] * 2 + [4 * hx * hz] * 2 + [4 * hx * hy] * 2)


def rotate_z(pc: PointCloud, yaw: float) -> PointCloud:
    c, s = np.cos(yaw), np.sin(yaw)
    out = pc.copy()
    out[:, 0] = pc[:, 0] * c - pc[:, 1] * s
    out[:, 1] = pc[:, 0] * s + pc[:, 1] * c
    return out


def make_box_cloud(
    half_extents: np.ndarray, yaw: float, count: int, seed: SeedLike = None
) -> PointCloud:
    """Sample ``count`` points uniformly over the surface of a resting, yawed box."""
    h = np.asarray(half_extents, dtype=float).reshape(3)
    if np.any(h <= 0):
        raise PreconditionError(f"box half-extents must be positive, got {h}")
    if count < 1:
        raise PreconditionError("point count must be at least 1")
    rng = as_generator(seed)
    areas = face_areas(h)
    counts = rng.multinomial(count, areas / areas.sum())
    face_of_point = np.repeat(np.arange(6), counts)
    u = rng.uniform(-1.0, 1.0, size=(count, 2))

    local = np.zeros((count, 3))
    for face, (axis, sign) in enumerate(_FACES):
        mask = face_of_point == face
        b, c = [a for a in range(3) if a != axis]
        local[mask, axis] = sign * h[axis]
        local[mask, b] = u[mask, 0] * h[b]
        local[mask, c] = u[mask, 1] * h[c]
    local[:, 2] += h[2]
    return rotate_z(local, yaw)


def face_labels(pc: PointCloud, half_extents: np.ndarray, yaw: float, tol: float = 1e-9) -> np.ndarray:
    """For each point, the number of box-frame axes on which it sits at the extent."""
    h = np.asarray(half_extents, dtype=float)
    local = rotate_z(pc, -yaw)
    local[:, 2] -= h[2]
    return (np.abs(np.abs(local) - h) <= tol * np.maximum(h, 1.0)).sum(axis=1)


@dataclass(frozen=True)
class Hyperplane:
    """Half-space ``p . normal <= offset``."""

    normal: np.ndarray
    offset: float

    def __post_init__(self) -> None:
        n = np.asarray(self.normal, dtype=float).reshape(3)
        if abs(np.linalg.norm(n) - 1.0) > 1e-9:
            raise PreconditionError("hyperplane normal must be unit length")
        object.__setattr__(self, "normal", n)

    def keep_mask(self, pc: PointCloud) -> np.ndarray:
        return pc @ self.normal <= self.offset

    def apply(self, pc: PointCloud) -> PointCloud:
        return hyperplane_cut(pc, self.normal, self.offset)


def hyperplane_cut(pc: PointCloud, normal: np.ndarray, offset: float) -> PointCloud:
    """Keep the points with ``p . normal <= offset``."""
    n = np.asarray(normal, dtype=float).reshape(3)
    if abs(np.linalg.norm(n) - 1.0) > 1e-9:
        raise PreconditionError("cut normal must be unit length")
    kept = pc[pc @ n <= offset]
    if kept.shape[0] == 0:
        raise EmptyCutError("hyperplane cut removed every point")
    return kept


def random_cut(
    pc: PointCloud,
    rng: SeedLike = None,
    *,
    min_fraction: float = 0.1,
    max_attempts: int = 50,
) -> tuple[Hyperplane, PointCloud]:
    """Draw random hyperplanes until one keeps at least ``min_fraction`` of the points."""
    rng = as_generator(rng)
    needed = max(1, int(np.ceil(min_fraction * pc.shape[0])))

    def attempt() -> tuple[Hyperplane, PointCloud]:
        normal = rng.standard_normal(3)
        normal /= np.linalg.norm(normal)
        proj = pc @ normal
        plane = Hyperplane(normal, float(rng.uniform(proj.min(), proj.max())))
        kept = pc[plane.keep_mask(pc)]
        if kept.shape[0] < needed:
            raise EmptyCutError(f"cut kept {kept.shape[0]} of {pc.shape[0]} points")
        return plane, kept

    for attempt_ctx in Retrying(
        stop=stop_after_attempt(max_attempts),
        retry=retry_if_exception_type(EmptyCutError),
        reraise=True,
    ):
        with attempt_ctx:
            result = attempt()
    return result


class PartialCloudSimulator:
    """Deterministic sensor model: a fixed hyperplane cut of a full cloud.

    Cuts leaving fewer than ``min_points`` points yield an empty ``(0, 3)``
    observation, which scores zero.
    """

    def __init__(self, plane: Hyperplane, min_points: int = 1) -> None:
        self.plane = plane
        self.min_points = min_points

    def __call__(self, x: PointCloud) -> PointCloud:
        kept = x[self.plane.keep_mask(x)]
        if kept.shape[0] < self.min_points:
            return np.zeros((0, 3))
        return kept


def fit_box(pc: PointCloud, n_coarse: int = 180, n_fine: int = 41) -> tuple[np.ndarray, float]:
    """Recover (half-extents, yaw) by a minimum-area rectangle over the xy footprint.

    The yaw is canonical in ``[-pi/4, pi/4)``; boxes are symmetric under quarter
    turns, which swap the x and y extents.
    """
    xy = pc[:, :2]
    quarter = np.pi / 2

    def footprint(angles: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        c, s = np.cos(angles)[:, None], np.sin(angles)[:, None]
        xr = xy[:, 0][None, :] * c + xy[:, 1][None, :] * s
        yr = -xy[:, 0][None, :] * s + xy[:, 1][None, :] * c
        wx = xr.max(axis=1) - xr.min(axis=1)
        wy = yr.max(axis=1) - yr.min(axis=1)
        return wx * wy, wx, wy

    coarse = -np.pi / 4 + quarter * np.arange(n_coarse) / n_coarse
    area, _, _ = footprint(coarse)
    step = quarter / n_coarse
    fine = coarse[int(np.argmin(area))] + np.linspace(-step, step, n_fine)
    area, wx, wy = footprint(fine)
    best = int(np.argmin(area))
    yaw, hx, hy = float(fine[best]), wx[best] / 2, wy[best] / 2

    turns = int(np.floor((yaw + np.pi / 4) / quarter))
    yaw -= turns * quarter
    if turns % 2:
        hx, hy = hy, hx
    hz = (pc[:, 2].max() - pc[:, 2].min()) / 2
    return np.array([hx, hy, hz]), yaw


def bounding_center(pc: PointCloud) -> np.ndarray:
    return (pc.max(axis=0) + pc.min(axis=0)) / 2


def bounding_radius(pc: PointCloud) -> float:
    return float(np.linalg.norm(pc - bounding_center(pc), axis=1).max())


def center_cloud(pc: PointCloud) -> PointCloud:
    return pc - bounding_center(pc)


def normalize_unit_radius(pc: PointCloud) -> PointCloud:
    """Centre on the bounding-box centre and scale to unit bounding radius."""
    centred = center_cloud(pc)
    radius = np.linalg.norm(centred, axis=1).max()
    if radius <= 0:
        raise PreconditionError("cannot normalise a cloud with zero extent")
    return centred / radius


def write_xyz(path: str | Path, pc: PointCloud) -> None:
    np.savetxt(path, pc, fmt="%.17g")


def read_xyz(path: str | Path) -> PointCloud:
    pc = np.loadtxt(path, dtype=float, ndmin=2)
    if pc.shape[1] != 3 or pc.shape[0] < 1:
        raise PreconditionError(f"{path}: expected whitespace-separated XYZ rows")
    if not np.all(np.isfinite(pc)):
        raise PreconditionError(f"{path}: cloud contains non-finite coordinates")
    return pc
