"""JSON documents for both model kinds."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field

from src.models.autoregressive import AutoregressiveGmmModel
from src.models.latent import BoxDecoder, BoxEncoder, LatentGaussianModel
from src.utils.errors import ConfigError

SCHEMA_VERSION = 1

AnyModel = Union[AutoregressiveGmmModel, LatentGaussianModel]


class ModelDocument(BaseModel):
    """Serialized model: kind, dimensions, limits, flat parameters and provenance."""

    schema_version: Literal[1] = SCHEMA_VERSION
    kind: Literal["autoregressive_gmm", "latent_gaussian"]
    dims: Dict[str, Any] = Field(default_factory=dict)
    limits: List[List[float]] = Field(default_factory=list)
    theta: List[float]
    sigma_min: Optional[float] = None
    seed: Optional[int] = None
    frozen: Dict[str, Any] = Field(default_factory=dict)


def to_document(model: Any) -> ModelDocument:
    model = getattr(model, "model", model)
    if isinstance(model, AutoregressiveGmmModel):
        return ModelDocument(
            kind=model.kind,
            dims={
                "dof": model.dof,
                "condition_dim": model.condition_dim,
                "hidden": list(model.hidden),
                "n_components": model.n_components,
                "leaky_slope": model.leaky_slope,
            },
            limits=model.joint_limits.tolist(),
            theta=model.params.tolist(),
            sigma_min=model.sigma_min,
            seed=model.seed,
        )
    if isinstance(model, LatentGaussianModel):
        return ModelDocument(
            kind=model.kind,
            dims={"latent_dim": model.latent_dim},
            theta=model.params.tolist(),
            frozen={
                "decoder": {
                    "n_points": model.decoder.n_points,
                    "extent_low": model.decoder.extent_low,
                    "extent_high": model.decoder.extent_high,
                    "point_seed": model.decoder.point_seed,
                },
                "encoder": {
                    "extent_low": model.encoder.extent_low,
                    "extent_high": model.encoder.extent_high,
                    "sigma_q": model.encoder.sigma_q,
                },
            },
        )
    raise ConfigError(f"cannot serialize model of type {type(model).__name__}")


def from_document(doc: ModelDocument) -> AnyModel:
    if doc.kind == "autoregressive_gmm":
        return AutoregressiveGmmModel(
            doc.theta,
            condition_dim=int(doc.dims["condition_dim"]),
            joint_limits=doc.limits,
            hidden=doc.dims.get("hidden", ()),
            n_components=int(doc.dims.get("n_components", 2)),
            leaky_slope=float(doc.dims.get("leaky_slope", 0.01)),
            sigma_min=float(doc.sigma_min if doc.sigma_min is not None else 1e-3),
            seed=doc.seed,
        )
    d = int(doc.dims["latent_dim"])
    return LatentGaussianModel(
        doc.theta[:d],
        doc.theta[d:],
        BoxDecoder(**doc.frozen.get("decoder", {})),
        BoxEncoder(**doc.frozen.get("encoder", {})),
    )


def save_model(model: Any, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_document(model).model_dump_json(indent=2), encoding="utf-8")
    return path


def load_model(path: str | Path) -> AnyModel:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"model file not found: {path}")
    try:
        doc = ModelDocument.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except ValueError as exc:
        raise ConfigError(f"{path}: not a valid model document: {exc}") from exc
    return from_document(doc)
