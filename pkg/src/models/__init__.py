"""Explicit-likelihood generative models, their gradients and prior training."""

from src.models.autoregressive import AutoregressiveGmmModel, BoundAutoregressiveModel, constant_head_model
from src.models.latent import BoxDecoder, BoxEncoder, LatentGaussianModel
from src.models.mixture import MixtureHead1D
from src.models.snapshot import ParamSnapshot

__all__ = [
    "AutoregressiveGmmModel",
    "BoundAutoregressiveModel",
    "BoxDecoder",
    "BoxEncoder",
    "LatentGaussianModel",
    "MixtureHead1D",
    "ParamSnapshot",
    "constant_head_model",
]
