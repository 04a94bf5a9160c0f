"""Latent-Gaussian models with a frozen decoder/encoder pair.

Only the latent prior ``N(mu_z, diag sigma_z^2)`` is tunable. The decoder and
encoder are fixed analytic maps between a 4-D latent (three half-extent
coordinates and a yaw) and box point clouds.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import expit, logit

from src.models.snapshot import ParamSnapshot
from src.simulators.clouds import fit_box, make_box_cloud
from src.utils.errors import NumericalFault, PreconditionError
from src.utils.seeding import SeedLike, as_generator

KIND = "latent_gaussian"
LATENT_DIM = 4


@dataclass(frozen=True)
class BoxDecoder:
    """z -> box cloud: ``h_i = lo + (hi - lo) * sigmoid(z_i)`` for i < 3, ``yaw = z_3``.

    Points are drawn with a fixed ``point_seed`` so the map is deterministic.
    """

    n_points: int = 512
    extent_low: float = 0.2
    extent_high: float = 1.0
    point_seed: int = 1234

    def half_extents(self, z: np.ndarray) -> np.ndarray:
        return self.extent_low + (self.extent_high - self.extent_low) * expit(z[..., :3])

    def decode(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        return make_box_cloud(self.half_extents(z), float(z[3]), self.n_points, self.point_seed)

    def decode_batch(self, zs: np.ndarray) -> np.ndarray:
        return np.stack([self.decode(z) for z in zs])

    def fingerprint(self) -> str:
        return hashlib.sha256(json.dumps(asdict(self), sort_keys=True).encode()).hexdigest()


@dataclass(frozen=True)
class BoxEncoder:
    """Box cloud -> diagonal Gaussian ``N(z_fit, sigma_q^2)`` in the decoder's latent space."""

    extent_low: float = 0.2
    extent_high: float = 1.0
    sigma_q: float = 0.05

    def encode(self, pc: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        h, yaw = fit_box(pc)
        frac = (h - self.extent_low) / (self.extent_high - self.extent_low)
        z_ext = logit(np.clip(frac, 1e-6, 1.0 - 1e-6))
        return np.concatenate([z_ext, [yaw]]), np.full(LATENT_DIM, self.sigma_q)

    def encode_batch(self, clouds: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        pairs = [self.encode(pc) for pc in clouds]
        return np.stack([m for m, _ in pairs]), np.stack([s for _, s in pairs])

    def fingerprint(self) -> str:
        return hashlib.sha256(json.dumps(asdict(self), sort_keys=True).encode()).hexdigest()


def gaussian_kl(
    mu_q: np.ndarray, sigma_q: np.ndarray, mu_p: np.ndarray, log_sigma_p: np.ndarray
) -> np.ndarray:
    """KL(N(mu_q, sigma_q^2) || N(mu_p, sigma_p^2)) summed over the last axis."""
    var_p = np.exp(2.0 * log_sigma_p)
    terms = log_sigma_p - np.log(sigma_q) + (sigma_q**2 + (mu_q - mu_p) ** 2) / (2.0 * var_p) - 0.5
    return terms.sum(axis=-1)


def gaussian_kl_grad(
    mu_q: np.ndarray, sigma_q: np.ndarray, mu_p: np.ndarray, log_sigma_p: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Gradients of the per-row KL with respect to ``mu_p`` and ``log_sigma_p``."""
    var_p = np.exp(2.0 * log_sigma_p)
    diff = mu_q - mu_p
    d_mu = -diff / var_p
    d_log_sigma = 1.0 - (sigma_q**2 + diff**2) / var_p
    return d_mu, d_log_sigma


class LatentGaussianModel:
    """Tunable latent prior in front of a frozen decoder and encoder."""

    kind = KIND

    def __init__(
        self,
        mu_z: np.ndarray,
        log_sigma_z: np.ndarray,
        decoder: BoxDecoder | None = None,
        encoder: BoxEncoder | None = None,
    ) -> None:
        mu = np.array(mu_z, dtype=float).reshape(-1)
        log_sigma = np.array(log_sigma_z, dtype=float).reshape(-1)
        if mu.shape != log_sigma.shape:
            raise PreconditionError("mu_z and log_sigma_z must have the same length")
        self.decoder = decoder or BoxDecoder()
        self.encoder = encoder or BoxEncoder(self.decoder.extent_low, self.decoder.extent_high)
        if mu.size != LATENT_DIM:
            raise PreconditionError(f"box decoder expects a {LATENT_DIM}-D latent, got {mu.size}")
        theta = np.concatenate([mu, log_sigma])
        theta.setflags(write=False)
        self._theta = theta

    @classmethod
    def standard(
        cls, sigma_z: float = 1.0, decoder: BoxDecoder | None = None, encoder: BoxEncoder | None = None
    ) -> "LatentGaussianModel":
        return cls(np.zeros(LATENT_DIM), np.full(LATENT_DIM, np.log(sigma_z)), decoder, encoder)

    @property
    def latent_dim(self) -> int:
        return self._theta.size // 2

    @property
    def mu_z(self) -> np.ndarray:
        return self._theta[: self.latent_dim]

    @property
    def log_sigma_z(self) -> np.ndarray:
        return self._theta[self.latent_dim :]

    @property
    def sigma_z(self) -> np.ndarray:
        return np.exp(self.log_sigma_z)

    @property
    def params(self) -> np.ndarray:
        return self._theta

    def with_params(self, theta: np.ndarray) -> "LatentGaussianModel":
        theta = np.asarray(theta, dtype=float)
        d = self.latent_dim
        return LatentGaussianModel(theta[:d], theta[d:], self.decoder, self.encoder)

    def snapshot(self) -> ParamSnapshot:
        return ParamSnapshot.of(self.kind, self._theta)

    def restore(self, snapshot: ParamSnapshot) -> "LatentGaussianModel":
        return self.with_params(snapshot.to_array(expected_kind=self.kind))

    def frozen_fingerprints(self) -> dict[str, str]:
        return {"decoder": self.decoder.fingerprint(), "encoder": self.encoder.fingerprint()}

    # -- sampling and divergence -------------------------------------------

    def sample_latent(self, n: int, rng: SeedLike = None) -> np.ndarray:
        rng = as_generator(rng)
        return self.mu_z + self.sigma_z * rng.standard_normal((n, self.latent_dim))

    def latent_sample(self, n: int = 1, rng: SeedLike = None) -> np.ndarray:
        """Decoded samples, shape ``(n, P, 3)``."""
        if n < 1:
            raise PreconditionError("sample count must be at least 1")
        return self.decoder.decode_batch(self.sample_latent(n, rng))

    def kl_to_prior(self, mu_q: np.ndarray, sigma_q: np.ndarray) -> np.ndarray:
        kl = gaussian_kl(np.asarray(mu_q, dtype=float), np.asarray(sigma_q, dtype=float), self.mu_z, self.log_sigma_z)
        if not np.all(np.isfinite(kl)):
            raise NumericalFault("non-finite KL divergence")
        return kl

    def latent_kl(self, x: np.ndarray) -> float:
        mu_q, sigma_q = self.encoder.encode(x)
        return float(self.kl_to_prior(mu_q, sigma_q))

    def kl_grad(self, mu_q: np.ndarray, sigma_q: np.ndarray, weights: np.ndarray | None = None) -> np.ndarray:
        """Flat gradient of ``sum_i w_i KL_i`` over ``(mu_z, log_sigma_z)``."""
        mu_q = np.atleast_2d(mu_q)
        sigma_q = np.atleast_2d(sigma_q)
        w = np.ones(mu_q.shape[0]) if weights is None else np.asarray(weights, dtype=float)
        d_mu, d_ls = gaussian_kl_grad(mu_q, sigma_q, self.mu_z, self.log_sigma_z)
        return np.concatenate([w @ d_mu, w @ d_ls])

    # -- tunable-model protocol --------------------------------------------

    def sample(self, n: int, rng: SeedLike = None) -> np.ndarray:
        return self.latent_sample(n, rng)

    def prepare(self, samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return self.encoder.encode_batch(samples)

    def log_density(self, stats: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
        """ELBO surrogate up to the frozen reconstruction term: ``-KL(q(z|x) || p(z; theta))``."""
        mu_q, sigma_q = stats
        return -self.kl_to_prior(mu_q, sigma_q)

    def weighted_grad(
        self, stats: tuple[np.ndarray, np.ndarray], weights: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        mu_q, sigma_q = stats
        return -self.kl_to_prior(mu_q, sigma_q), -self.kl_grad(mu_q, sigma_q, weights)
