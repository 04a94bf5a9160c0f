"""Conditional autoregressive Gaussian-mixture model p(q | c) = prod_j p(q_j | c, q_<j)."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from src.models import mlp
from src.models.mixture import (
    MixtureHead1D,
    decode_heads,
    grad_raw,
    mixture_log_pdf,
    raw_for_head,
    sample_mixture,
)
from src.models.snapshot import ParamSnapshot
from src.utils.errors import NumericalFault, PreconditionError
from src.utils.seeding import SeedLike, as_generator

KIND = "autoregressive_gmm"


class AutoregressiveGmmModel:
    """One network per joint; network ``j`` maps ``[condition, q_1..q_{j-1}]`` to a mixture head.

    Instances are immutable: all parameters live in one flat read-only vector and
    ``with_params`` returns a new model.
    """

    kind = KIND

    def __init__(
        self,
        theta: np.ndarray,
        *,
        condition_dim: int,
        joint_limits: np.ndarray,
        hidden: Sequence[int] = (64, 64, 64),
        n_components: int = 2,
        leaky_slope: float = 0.01,
        sigma_min: float = 1e-3,
        seed: int | None = None,
    ) -> None:
        limits = np.array(joint_limits, dtype=float).reshape(-1, 2)
        if limits.shape[0] < 1:
            raise PreconditionError("model needs at least one joint")
        if np.any(limits[:, 0] >= limits[:, 1]):
            raise PreconditionError("joint limits must satisfy lo < hi")
        if condition_dim < 0 or n_components < 1 or sigma_min <= 0:
            raise PreconditionError("invalid model dimensions")
        self.condition_dim = int(condition_dim)
        self.joint_limits = limits
        self.joint_limits.setflags(write=False)
        self.hidden = tuple(int(h) for h in hidden)
        self.n_components = int(n_components)
        self.leaky_slope = float(leaky_slope)
        self.sigma_min = float(sigma_min)
        self.seed = seed

        self._sizes = [
            [self.condition_dim + j, *self.hidden, 3 * self.n_components] for j in range(self.dof)
        ]
        counts = [mlp.n_params_for(s) for s in self._sizes]
        self._offsets = np.concatenate([[0], np.cumsum(counts)]).astype(int)
        theta = np.array(theta, dtype=float)
        if theta.shape != (self._offsets[-1],):
            raise PreconditionError(
                f"parameter vector has shape {theta.shape}, architecture needs ({self._offsets[-1]},)"
            )
        theta.setflags(write=False)
        self._theta = theta
        self._networks = [
            mlp.unflatten(theta[self._offsets[j] : self._offsets[j + 1]], self._sizes[j], self.leaky_slope)
            for j in range(self.dof)
        ]

    # -- construction -------------------------------------------------------

    @classmethod
    def initialize(
        cls,
        *,
        condition_dim: int,
        joint_limits: np.ndarray,
        hidden: Sequence[int] = (64, 64, 64),
        n_components: int = 2,
        leaky_slope: float = 0.01,
        sigma_min: float = 1e-3,
        seed: int | None = 0,
    ) -> "AutoregressiveGmmModel":
        rng = as_generator(seed)
        limits = np.array(joint_limits, dtype=float).reshape(-1, 2)
        parts = []
        for j in range(limits.shape[0]):
            sizes = [condition_dim + j, *hidden, 3 * n_components]
            parts.append(mlp.flatten(mlp.init_mlp(sizes, rng, leaky_slope)))
        return cls(
            np.concatenate(parts),
            condition_dim=condition_dim,
            joint_limits=limits,
            hidden=hidden,
            n_components=n_components,
            leaky_slope=leaky_slope,
            sigma_min=sigma_min,
            seed=seed if isinstance(seed, int) else None,
        )

    def with_params(self, theta: np.ndarray) -> "AutoregressiveGmmModel":
        return AutoregressiveGmmModel(
            theta,
            condition_dim=self.condition_dim,
            joint_limits=self.joint_limits,
            hidden=self.hidden,
            n_components=self.n_components,
            leaky_slope=self.leaky_slope,
            sigma_min=self.sigma_min,
            seed=self.seed,
        )

    # -- accessors ----------------------------------------------------------

    @property
    def dof(self) -> int:
        return int(self.joint_limits.shape[0])

    @property
    def params(self) -> np.ndarray:
        return self._theta

    def snapshot(self) -> ParamSnapshot:
        return ParamSnapshot.of(self.kind, self._theta)

    def restore(self, snapshot: ParamSnapshot) -> "AutoregressiveGmmModel":
        return self.with_params(snapshot.to_array(expected_kind=self.kind))

    def bind(self, condition: np.ndarray | Sequence[float]) -> "BoundAutoregressiveModel":
        return BoundAutoregressiveModel(self, condition)

    # -- core operations ----------------------------------------------------

    def _inputs(self, conditions: np.ndarray, xs: np.ndarray, joint: int) -> np.ndarray:
        return np.concatenate([conditions, xs[:, :joint]], axis=1)

    def _conditions(self, condition: np.ndarray, n: int) -> np.ndarray:
        c = np.asarray(condition, dtype=float)
        if c.ndim == 1:
            if c.shape[0] != self.condition_dim:
                raise PreconditionError(
                    f"condition has length {c.shape[0]}, model expects {self.condition_dim}"
                )
            return np.broadcast_to(c, (n, self.condition_dim))
        if c.shape != (n, self.condition_dim):
            raise PreconditionError(f"conditions have shape {c.shape}, expected ({n}, {self.condition_dim})")
        return c

    def check_within_limits(self, xs: np.ndarray) -> None:
        lo, hi = self.joint_limits[:, 0], self.joint_limits[:, 1]
        if xs.ndim != 2 or xs.shape[1] != self.dof:
            raise PreconditionError(f"samples must have shape (n, {self.dof}), got {xs.shape}")
        outside = (xs < lo) | (xs > hi)
        if np.any(outside):
            row, joint = np.argwhere(outside)[0]
            raise PreconditionError(f"sample {row} joint {joint} = {xs[row, joint]} is outside joint limits")

    def head(self, condition: np.ndarray, prefix: Sequence[float] = ()) -> MixtureHead1D:
        """Decoded mixture for joint ``len(prefix)`` given the condition and preceding joints."""
        joint = len(prefix)
        inp = np.concatenate([np.asarray(condition, dtype=float), np.asarray(prefix, dtype=float)])[None, :]
        raw, _ = mlp.forward(self._networks[joint], inp)
        return MixtureHead1D.from_raw(raw[0], self.sigma_min)

    def sample(self, condition: np.ndarray, n: int, rng: SeedLike = None) -> np.ndarray:
        """Draw ``n`` configurations joint by joint, each clamped to its limits."""
        if n < 1:
            raise PreconditionError("sample count must be at least 1")
        rng = as_generator(rng)
        conds = self._conditions(condition, n)
        xs = np.zeros((n, self.dof))
        for j in range(self.dof):
            raw, _ = mlp.forward(self._networks[j], self._inputs(conds, xs, j))
            if not np.all(np.isfinite(raw)):
                raise NumericalFault("non-finite network output while sampling", joint=j)
            log_w, mu, sigma = decode_heads(raw, self.sigma_min)
            draw = sample_mixture(log_w, mu, sigma, rng)
            xs[:, j] = np.clip(draw, self.joint_limits[j, 0], self.joint_limits[j, 1])
        return xs

    def log_likelihood_batch(self, condition: np.ndarray, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        self.check_within_limits(xs)
        conds = self._conditions(condition, xs.shape[0])
        total = np.zeros(xs.shape[0])
        for j in range(self.dof):
            raw, _ = mlp.forward(self._networks[j], self._inputs(conds, xs, j))
            log_w, mu, sigma = decode_heads(raw, self.sigma_min)
            lp, _ = mixture_log_pdf(xs[:, j], log_w, mu, sigma)
            if not np.all(np.isfinite(lp)):
                raise NumericalFault("non-finite log-likelihood", joint=j)
            total += lp
        return total

    def log_likelihood(self, condition: np.ndarray, x: np.ndarray) -> float:
        return float(self.log_likelihood_batch(condition, np.asarray(x, dtype=float)[None, :])[0])

    def grad_log_likelihood_batch(
        self, condition: np.ndarray, xs: np.ndarray, weights: np.ndarray | None = None
    ) -> tuple[np.ndarray, np.ndarray]:
        """Per-sample log-likelihoods and the flat gradient of ``sum_i w_i log p(x_i)``."""
        xs = np.asarray(xs, dtype=float)
        self.check_within_limits(xs)
        conds = self._conditions(condition, xs.shape[0])
        w = np.ones(xs.shape[0]) if weights is None else np.asarray(weights, dtype=float)
        total = np.zeros(xs.shape[0])
        grad = np.zeros_like(self._theta)
        for j in range(self.dof):
            net = self._networks[j]
            raw, cache = mlp.forward(net, self._inputs(conds, xs, j))
            lp, d_raw = grad_raw(xs[:, j], raw, self.sigma_min)
            if not np.all(np.isfinite(lp)):
                raise NumericalFault("non-finite log-likelihood", joint=j)
            total += lp
            grad[self._offsets[j] : self._offsets[j + 1]] = mlp.backward(net, cache, w[:, None] * d_raw)
        return total, grad

    def grad_log_likelihood(self, condition: np.ndarray, x: np.ndarray) -> np.ndarray:
        return self.grad_log_likelihood_batch(condition, np.asarray(x, dtype=float)[None, :])[1]


class BoundAutoregressiveModel:
    """An autoregressive model with its condition fixed, as consumed by the tuning loops."""

    def __init__(self, model: AutoregressiveGmmModel, condition: np.ndarray | Sequence[float]) -> None:
        self.model = model
        self.condition = np.array(condition, dtype=float).reshape(model.condition_dim)
        self.condition.setflags(write=False)

    @property
    def kind(self) -> str:
        return self.model.kind

    @property
    def params(self) -> np.ndarray:
        return self.model.params

    def with_params(self, theta: np.ndarray) -> "BoundAutoregressiveModel":
        return BoundAutoregressiveModel(self.model.with_params(theta), self.condition)

    def snapshot(self) -> ParamSnapshot:
        return self.model.snapshot()

    def sample(self, n: int, rng: SeedLike = None) -> np.ndarray:
        return self.model.sample(self.condition, n, rng)

    def prepare(self, samples: np.ndarray) -> np.ndarray:
        return np.asarray(samples, dtype=float)

    def log_density(self, stats: np.ndarray) -> np.ndarray:
        return self.model.log_likelihood_batch(self.condition, stats)

    def weighted_grad(self, stats: np.ndarray, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return self.model.grad_log_likelihood_batch(self.condition, stats, weights)


def constant_head_model(
    heads: Sequence[MixtureHead1D],
    joint_limits: np.ndarray,
    *,
    condition_dim: int = 0,
    hidden: Sequence[int] = (),
    leaky_slope: float = 0.01,
    sigma_min: float = 1e-3,
) -> AutoregressiveGmmModel:
    """A model whose joint heads ignore their inputs and equal ``heads``.

    Every weight matrix is zero and the output bias encodes the head, so the
    biases remain trainable. Used for toy priors and closed-form checks.
    """
    n_components = heads[0].n_components
    if any(h.n_components != n_components for h in heads):
        raise PreconditionError("all heads must have the same number of components")
    parts = []
    for j, head in enumerate(heads):
        sizes = [condition_dim + j, *hidden, 3 * n_components]
        theta_j = np.zeros(mlp.n_params_for(sizes))
        theta_j[-3 * n_components :] = raw_for_head(head, sigma_min)
        parts.append(theta_j)
    return AutoregressiveGmmModel(
        np.concatenate(parts),
        condition_dim=condition_dim,
        joint_limits=joint_limits,
        hidden=hidden,
        n_components=n_components,
        leaky_slope=leaky_slope,
        sigma_min=sigma_min,
    )
