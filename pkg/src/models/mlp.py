"""Fully connected networks with leaky-ReLU activations and hand-written backprop."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from src.utils.errors import PreconditionError


@dataclass(frozen=True)
class MlpParams:
    """Weights ``(in, out)`` and biases ``(out,)`` per layer; the last layer is linear."""

    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]
    leaky_slope: float = 0.01

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.biases) or not self.weights:
            raise PreconditionError("an MLP needs one bias per weight matrix and at least one layer")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise PreconditionError(f"layer {i}: weight {w.shape} and bias {b.shape} do not match")
            if i > 0 and self.weights[i - 1].shape[1] != w.shape[0]:
                raise PreconditionError(f"layer {i} input does not chain from layer {i - 1}")

    @property
    def sizes(self) -> list[int]:
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]


@dataclass
class ForwardCache:
    inputs: list[np.ndarray] = field(default_factory=list)
    pre_activations: list[np.ndarray] = field(default_factory=list)


def layer_shapes(sizes: Sequence[int]) -> list[tuple[tuple[int, int], tuple[int]]]:
    return [((sizes[i], sizes[i + 1]), (sizes[i + 1],)) for i in range(len(sizes) - 1)]


def n_params_for(sizes: Sequence[int]) -> int:
    return sum(a * b + b for a, b in zip(sizes[:-1], sizes[1:]))


def init_mlp(
    sizes: Sequence[int],
    rng: np.random.Generator,
    leaky_slope: float = 0.01,
    output_scale: float = 0.1,
) -> MlpParams:
    """He-normal hidden layers; the output layer is shrunk by ``output_scale``."""
    weights, biases = [], []
    n_layers = len(sizes) - 1
    for i, ((fan_in, fan_out), _) in enumerate(layer_shapes(sizes)):
        scale = np.sqrt(2.0 / max(fan_in, 1))
        if i == n_layers - 1:
            scale *= output_scale
        weights.append(rng.normal(0.0, scale, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpParams(tuple(weights), tuple(biases), leaky_slope)


def unflatten(theta: np.ndarray, sizes: Sequence[int], leaky_slope: float) -> MlpParams:
    """Build an MlpParams whose arrays are views into ``theta``."""
    weights, biases = [], []
    offset = 0
    for w_shape, b_shape in layer_shapes(sizes):
        n_w = w_shape[0] * w_shape[1]
        weights.append(theta[offset : offset + n_w].reshape(w_shape))
        offset += n_w
        biases.append(theta[offset : offset + b_shape[0]])
        offset += b_shape[0]
    if offset != theta.size:
        raise PreconditionError(f"parameter vector has {theta.size} entries, layout needs {offset}")
    return MlpParams(tuple(weights), tuple(biases), leaky_slope)


def flatten(params: MlpParams) -> np.ndarray:
    parts: list[np.ndarray] = []
    for w, b in zip(params.weights, params.biases):
        parts.append(w.ravel())
        parts.append(b.ravel())
    return np.concatenate(parts)


def forward(params: MlpParams, x: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
    cache = ForwardCache()
    h = x
    last = len(params.weights) - 1
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        cache.inputs.append(h)
        a = h @ w + b
        if i == last:
            return a, cache
        cache.pre_activations.append(a)
        h = np.where(a > 0, a, params.leaky_slope * a)
    raise AssertionError("unreachable")


def backward(params: MlpParams, cache: ForwardCache, d_out: np.ndarray) -> np.ndarray:
    """Flat gradient (same layout as ``flatten``) of ``sum(d_out * output)``."""
    n_layers = len(params.weights)
    d_w: list[np.ndarray] = [np.empty(0)] * n_layers
    d_b: list[np.ndarray] = [np.empty(0)] * n_layers
    delta = d_out
    for i in range(n_layers - 1, -1, -1):
        d_w[i] = cache.inputs[i].T @ delta
        d_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = delta @ params.weights[i].T
            a = cache.pre_activations[i - 1]
            delta = delta * np.where(a > 0, 1.0, params.leaky_slope)
    parts: list[np.ndarray] = []
    for gw, gb in zip(d_w, d_b):
        parts.append(gw.ravel())
        parts.append(gb.ravel())
    return np.concatenate(parts)
