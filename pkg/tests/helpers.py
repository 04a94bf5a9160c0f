"""Shared test helpers: finite differences and the small toy setup."""

from __future__ import annotations

from typing import Callable

import numpy as np

from src.models.autoregressive import constant_head_model
from src.models.mixture import MixtureHead1D
from src.protocols.schemas import MaceConfig

TOY_TARGET = 1.0
TOY_LIMITS = np.array([[-3.0, 3.0]])


def central_difference(f: Callable[[np.ndarray], float], theta: np.ndarray, idx: int, h: float = 1e-5) -> float:
    up = theta.copy()
    down = theta.copy()
    up[idx] += h
    down[idx] -= h
    return (f(up) - f(down)) / (2.0 * h)


def assert_gradients_close(analytic: float, numeric: float, rel: float = 1e-4) -> None:
    scale = max(1e-3, abs(analytic), abs(numeric))
    assert abs(analytic - numeric) <= rel * scale, (analytic, numeric)


def toy_prior():
    """Bimodal 1-D prior symmetric about the toy target."""
    head = MixtureHead1D([0.5, 0.5], [-0.5, 2.5], [0.5, 0.5])
    return constant_head_model([head], TOY_LIMITS).bind(np.zeros(0))


def toy_score(x, target) -> float:
    return float(np.exp(-abs(float(x[0]) - target)))


def identity(x):
    return x


def toy_config(seed: int = 0, T: int = 1500) -> MaceConfig:
    return MaceConfig(T=T, N=64, M=4, q=1 / 16, learning_rate=1e-3, seed=seed)
