"""One-dimensional Gaussian mixture heads decoded from raw network outputs.

Raw layout per row is ``[logits (C), means (C), raw_std (C)]``. Decoding applies
softmax to the logits, identity to the means and ``softplus(raw) + sigma_min``
to the standard deviations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit, log_softmax, logsumexp, softmax

from src.utils.errors import PreconditionError

LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)


def softplus(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, x)


def inverse_softplus(y: np.ndarray | float) -> np.ndarray:
    """Inverse of ``softplus`` for y > 0."""
    y = np.asarray(y, dtype=float)
    return y + np.log(-np.expm1(-y))


@dataclass(frozen=True)
class MixtureHead1D:
    """A decoded per-joint mixture: weights, means and standard deviations."""

    weights: np.ndarray
    means: np.ndarray
    stddevs: np.ndarray

    def __post_init__(self) -> None:
        w, mu, sd = (np.asarray(a, dtype=float) for a in (self.weights, self.means, self.stddevs))
        if not (w.shape == mu.shape == sd.shape) or w.ndim != 1 or w.size == 0:
            raise PreconditionError("mixture head arrays must be 1-D with equal, nonzero length")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
            raise PreconditionError(f"mixture weights must be a probability vector, got {w}")
        if np.any(sd <= 0):
            raise PreconditionError("mixture standard deviations must be positive")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "means", mu)
        object.__setattr__(self, "stddevs", sd)

    @property
    def n_components(self) -> int:
        return int(self.weights.size)

    @classmethod
    def from_raw(cls, raw: np.ndarray, sigma_min: float) -> "MixtureHead1D":
        log_w, mu, sigma = decode_heads(np.asarray(raw, dtype=float)[None, :], sigma_min)
        return cls(np.exp(log_w[0]) / np.exp(log_w[0]).sum(), mu[0], sigma[0])

    def log_pdf(self, x: np.ndarray | float) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        with np.errstate(divide="ignore"):
            log_w = np.log(self.weights)
        lp, _ = mixture_log_pdf(
            x, np.broadcast_to(log_w, (x.size, self.n_components)),
            np.broadcast_to(self.means, (x.size, self.n_components)),
            np.broadcast_to(self.stddevs, (x.size, self.n_components)),
        )
        return lp

    def mean(self) -> float:
        return float(self.weights @ self.means)


def raw_for_head(head: MixtureHead1D, sigma_min: float) -> np.ndarray:
    """Raw output vector that decodes back to ``head`` (zero-weight components get -inf-ish logits)."""
    if np.any(head.stddevs <= sigma_min):
        raise PreconditionError("head stddevs must exceed sigma_min to be representable")
    with np.errstate(divide="ignore"):
        logits = np.log(head.weights)
    logits = np.maximum(logits, -50.0)
    return np.concatenate([logits, head.means, inverse_softplus(head.stddevs - sigma_min)])


def decode_heads(raw: np.ndarray, sigma_min: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split ``raw`` (B, 3C) into log-weights, means and stddevs, each (B, C)."""
    n_comp = raw.shape[1] // 3
    logits = raw[:, :n_comp]
    mu = raw[:, n_comp : 2 * n_comp]
    sigma = softplus(raw[:, 2 * n_comp :]) + sigma_min
    return log_softmax(logits, axis=1), mu, sigma


def mixture_log_pdf(
    x: np.ndarray, log_w: np.ndarray, mu: np.ndarray, sigma: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-row mixture log-density of ``x`` (B,) and the component responsibilities (B, C)."""
    z = (x[:, None] - mu) / sigma
    comp = log_w - 0.5 * z * z - np.log(sigma) - LOG_SQRT_2PI
    lp = logsumexp(comp, axis=1)
    resp = np.exp(comp - lp[:, None])
    return lp, resp


def grad_raw(
    x: np.ndarray, raw: np.ndarray, sigma_min: float
) -> tuple[np.ndarray, np.ndarray]:
    """Log-density (B,) and its gradient with respect to the raw outputs (B, 3C)."""
    n_comp = raw.shape[1] // 3
    log_w, mu, sigma = decode_heads(raw, sigma_min)
    lp, resp = mixture_log_pdf(x, log_w, mu, sigma)
    z = (x[:, None] - mu) / sigma
    d_logits = resp - softmax(raw[:, :n_comp], axis=1)
    d_mu = resp * z / sigma
    d_sigma = resp * (z * z - 1.0) / sigma
    d_raw_std = d_sigma * expit(raw[:, 2 * n_comp :])
    return lp, np.concatenate([d_logits, d_mu, d_raw_std], axis=1)


def sample_mixture(
    log_w: np.ndarray, mu: np.ndarray, sigma: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Draw one value per row: a component by inverse CDF, then a normal draw."""
    weights = np.exp(log_w)
    cdf = np.cumsum(weights, axis=1)
    u = rng.random(weights.shape[0]) * cdf[:, -1]
    comp = np.minimum((u[:, None] > cdf).sum(axis=1), weights.shape[1] - 1)
    rows = np.arange(weights.shape[0])
    eps = rng.standard_normal(weights.shape[0])
    return mu[rows, comp] + sigma[rows, comp] * eps
