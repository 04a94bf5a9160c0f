"""Vectorised 2-D segment tests.

Points are arrays whose last axis has length 2; leading axes broadcast.
Touching counts as intersecting.
"""

from __future__ import annotations

import numpy as np

EPS = 1e-12


def _cross(o: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a[..., 0] - o[..., 0]) * (b[..., 1] - o[..., 1]) - (a[..., 1] - o[..., 1]) * (b[..., 0] - o[..., 0])


def _on_segment(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Whether r lies in the bounding box of segment pq (collinearity checked by the caller)."""
    lo = np.minimum(p, q) - EPS
    hi = np.maximum(p, q) + EPS
    return np.all((r >= lo) & (r <= hi), axis=-1)


def segments_intersect(a: np.ndarray, b: np.ndarray, c: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Closed-segment intersection of ab and cd, including collinear overlap."""
    d1 = _cross(c, d, a)
    d2 = _cross(c, d, b)
    d3 = _cross(a, b, c)
    d4 = _cross(a, b, d)
    proper = (((d1 > EPS) & (d2 < -EPS)) | ((d1 < -EPS) & (d2 > EPS))) & (
        ((d3 > EPS) & (d4 < -EPS)) | ((d3 < -EPS) & (d4 > EPS))
    )
    touching = (
        ((np.abs(d1) <= EPS) & _on_segment(c, d, a))
        | ((np.abs(d2) <= EPS) & _on_segment(c, d, b))
        | ((np.abs(d3) <= EPS) & _on_segment(a, b, c))
        | ((np.abs(d4) <= EPS) & _on_segment(a, b, d))
    )
    return proper | touching


def segment_hits_rect(p0: np.ndarray, p1: np.ndarray, rect: tuple[float, float, float, float]) -> np.ndarray:
    """Liang-Barsky clip of segment p0p1 against the closed rectangle (xmin, ymin, xmax, ymax)."""
    xmin, ymin, xmax, ymax = rect
    dx = p1[..., 0] - p0[..., 0]
    dy = p1[..., 1] - p0[..., 1]
    p = np.stack([-dx, dx, -dy, dy], axis=-1)
    q = np.stack([p0[..., 0] - xmin, xmax - p0[..., 0], p0[..., 1] - ymin, ymax - p0[..., 1]], axis=-1)
    parallel = np.abs(p) <= EPS
    outside = np.any(parallel & (q < 0), axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = q / np.where(parallel, 1.0, p)
    entering = ~parallel & (p < 0)
    leaving = ~parallel & (p > 0)
    t_enter = np.maximum(0.0, np.max(np.where(entering, r, -np.inf), axis=-1))
    t_exit = np.minimum(1.0, np.min(np.where(leaving, r, np.inf), axis=-1))
    return ~outside & (t_enter <= t_exit)
