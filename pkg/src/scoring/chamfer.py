"""Chamfer distances and the pairwise diversity metric.

Nearest neighbours are brute force; sums use ``math.fsum`` so results do not
depend on summation order.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np

from src.simulators.clouds import PointCloud
from src.utils.errors import PreconditionError


def squared_distances(a: PointCloud, b: PointCloud) -> np.ndarray:
    dx = a[:, None, 0] - b[None, :, 0]
    dy = a[:, None, 1] - b[None, :, 1]
    dz = a[:, None, 2] - b[None, :, 2]
    return dx * dx + dy * dy + dz * dz


def _nearest_term(d2: np.ndarray, k: int) -> float:
    """Sum over rows of the mean of each row's k smallest entries."""
    if k == 1:
        return math.fsum(d2.min(axis=1))
    smallest = np.partition(d2, k - 1, axis=1)[:, :k]
    return math.fsum(math.fsum(row) for row in smallest) / k


def chamfer_k(a: PointCloud, b: PointCloud, k_nn: int = 1) -> float:
    """Top-k Chamfer distance; ``k_nn=1`` is the standard squared Chamfer distance."""
    if k_nn < 1:
        raise PreconditionError("k_nn must be at least 1")
    if a.shape[0] < k_nn or b.shape[0] < k_nn:
        raise PreconditionError(f"both clouds need at least {k_nn} points, got {a.shape[0]} and {b.shape[0]}")
    d2 = squared_distances(a, b)
    return _nearest_term(d2, k_nn) + _nearest_term(d2.T, k_nn)


def diversity(samples: Sequence[PointCloud]) -> float:
    """Mean standard Chamfer distance over all unordered pairs."""
    if len(samples) < 2:
        raise PreconditionError("diversity needs at least two samples")
    pairs = [chamfer_k(a, b, 1) for a, b in itertools.combinations(samples, 2)]
    return math.fsum(pairs) / len(pairs)
