"""Pydantic schemas for configuration and reports."""
from __future__ import annotations

import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Domain = Literal["toy", "ik", "grasp", "pc_complete"]
Method = Literal["mace", "is", "prior_only"]
ScoreKind = Literal["toy", "ik", "grasp", "chamfer"]

DOMAIN_SCORE: Dict[str, str] = {
    "toy": "toy",
    "ik": "ik",
    "grasp": "grasp",
    "pc_complete": "chamfer",
}

# Half-width of the score window the toy model resolves once tuning settles on its stddev floor.
TOY_RESOLUTION = 0.05

# Per-domain values filled in under whatever an experiment config leaves unset.
DOMAIN_DEFAULTS: Dict[str, Dict[str, Dict[str, Any]]] = {
    "toy": {"mace": {"T": 1500, "N": 64, "M": 4, "q": 1.0 / 16.0, "learning_rate": 2e-3}},
    "ik": {"mace": {"T": 375, "N": 64, "M": 4, "q": 1.0 / 16.0, "learning_rate": 2e-5}},
    "grasp": {
        "mace": {"T": 150, "N": 256, "M": 32, "q": 1.0 / 16.0, "learning_rate": 2e-4},
        "cloud": {"sigma_z": 0.2, "n_points": 1024, "object_latent": (0.6, -0.6, 0.0, 0.5)},
        "score": {"contact_scale": 0.25},
    },
    "pc_complete": {
        "mace": {"T": 100, "N": 256, "M": 128, "q": 1.0 / 32.0, "learning_rate": 1e-3},
        "cloud": {"sigma_z": 1.0},
    },
}


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MaceConfig(_Strict):
    """Tuning-loop hyperparameters shared by MACE and the importance-sampling baseline."""

    T: int = Field(default=100, ge=0, description="Outer iterations (0 is a no-op)")
    N: int = Field(default=64, ge=1, description="Batch size per iteration")
    M: int = Field(default=4, ge=1, description="Gradient steps per iteration")
    q: float = Field(default=1.0 / 16.0, gt=0.0, le=1.0)
    learning_rate: float = Field(default=1e-3, gt=0.0)
    seed: int = 0
    minibatch_fraction: float = Field(default=0.5, gt=0.0, le=1.0)
    zero_score_policy: Literal["resample", "skip", "fault"] = "resample"
    max_zero_score_retries: int = Field(default=10, ge=1)
    is_weight_clip: float = Field(default=100.0, gt=0.0)
    log_every: int = Field(default=10, ge=1)

    @model_validator(mode="after")
    def _elite_nonempty(self) -> "MaceConfig":
        if math.floor(self.q * self.N) < 1:
            raise ValueError(f"floor(q*N) must be at least 1 (q={self.q}, N={self.N})")
        return self

    @property
    def elite_count(self) -> int:
        return math.floor(self.q * self.N)


class PriorTrainingConfig(_Strict):
    """Maximum-likelihood training of the autoregressive prior."""

    steps: int = Field(default=3000, ge=1)
    batch_size: int = Field(default=256, ge=1)
    learning_rate: float = Field(default=1e-3, gt=0.0)
    final_lr_fraction: float = Field(default=0.1, gt=0.0, le=1.0, description="cosine decay floor")
    seed: int = 0
    hidden: List[int] = Field(default_factory=lambda: [64, 64, 64])
    n_components: int = Field(default=2, ge=1)
    leaky_slope: float = Field(default=0.01, ge=0.0)
    sigma_min: float = Field(default=1e-3, gt=0.0)
    holdout_fraction: float = Field(default=0.1, ge=0.0, lt=1.0)
    log_every: int = Field(default=250, ge=1)


class ScoreSpec(_Strict):
    """Score function ``S(o', o)`` selection and parameters."""

    kind: ScoreKind
    fingers: int = Field(default=5, ge=1, description="grasp: finger count k")
    tau: float = Field(default=0.1, gt=0.0, description="chamfer: temperature")
    k_nn: int = Field(default=5, ge=1, description="chamfer: neighbours per point")
    goal: Optional[Tuple[float, float]] = Field(default=None, description="ik: goal position")
    target: float = Field(default=1.0, description="toy: score peak location")
    contact_scale: float = Field(default=1.0, gt=0.0, description="grasp: finger distance that zeroes the score")

    def build(self):
        """Score callable ``S(o', o)`` for this spec."""
        from src.scoring.scores import build_score

        return build_score(self)


class ObstacleSpec(_Strict):
    """Named obstacle preset plus its numeric parameters."""

    preset: Literal["none", "wall", "window", "box"] = "wall"
    params: Dict[str, float] = Field(default_factory=dict)


class ChainSpec(_Strict):
    link_lengths: List[float] = Field(default_factory=lambda: [1.0, 0.8, 0.6, 0.4])
    joint_limits: Optional[List[Tuple[float, float]]] = None
    base: Tuple[float, float] = (0.0, 0.0)

    @field_validator("link_lengths")
    @classmethod
    def _positive(cls, v: List[float]) -> List[float]:
        if len(v) < 2 or any(length <= 0 for length in v):
            raise ValueError("a chain needs at least two links of positive length")
        return v

    @model_validator(mode="after")
    def _limits_match(self) -> "ChainSpec":
        if self.joint_limits is not None:
            if len(self.joint_limits) != len(self.link_lengths):
                raise ValueError("joint_limits must have one interval per link")
            if any(lo >= hi for lo, hi in self.joint_limits):
                raise ValueError("joint limits must satisfy lo < hi")
        return self


class IkDomainSpec(_Strict):
    chain: ChainSpec = Field(default_factory=ChainSpec)
    obstacles: ObstacleSpec = Field(default_factory=ObstacleSpec)
    goals: List[Tuple[float, float]] = Field(default_factory=list)
    n_goals: int = Field(default=1, ge=1)
    goal_region: Tuple[float, float, float, float] = Field(
        default=(1.6, 2.2, -0.6, 0.6), description="xmin, xmax, ymin, ymax for sampled goals"
    )
    prior_path: Optional[Path] = None


class CloudDomainSpec(_Strict):
    """Box-shape domains (grasp and point-cloud completion)."""

    n_points: int = Field(default=512, ge=8)
    extent_low: float = Field(default=0.2, gt=0.0)
    extent_high: float = Field(default=1.0, gt=0.0)
    point_seed: int = 1234
    sigma_z: float = Field(default=1.0, gt=0.0)
    sigma_q: float = Field(default=0.05, gt=0.0)
    finger_preset: Literal["diagonal_plus_x", "diagonal_minus_x", "antipodal_x"] = "diagonal_plus_x"
    grasp_radius: Optional[float] = Field(default=None, gt=0.0)
    observation_path: Optional[Path] = None
    object_latent: Optional[Tuple[float, float, float, float]] = Field(
        default=None, description="latent of the held-out box; drawn from N(0, I) when unset"
    )
    diversity_samples: int = Field(default=49, ge=2)

    @model_validator(mode="after")
    def _extent_order(self) -> "CloudDomainSpec":
        if self.extent_low >= self.extent_high:
            raise ValueError("extent_low must be below extent_high")
        return self


class ToyDomainSpec(_Strict):
    limits: Tuple[float, float] = (-3.0, 3.0)
    weights: List[float] = Field(default_factory=lambda: [0.5, 0.5])
    means: List[float] = Field(default_factory=lambda: [-0.5, 2.5])
    stddevs: List[float] = Field(default_factory=lambda: [0.5, 0.5])
    sigma_min: float = Field(default=TOY_RESOLUTION / math.sqrt(3.0), gt=0.0, description="component stddev floor")


class ExperimentConfig(_Strict):
    """Everything needed to reproduce one experiment."""

    name: str = "experiment"
    domain: Domain
    method: Method = "mace"
    seed: int = 0
    output_dir: Optional[Path] = None
    score: ScoreSpec
    mace: MaceConfig = Field(default_factory=MaceConfig)
    eval_samples: int = Field(default=1000, ge=1)
    prior_batches: int = Field(default=20, ge=1)
    toy: ToyDomainSpec = Field(default_factory=ToyDomainSpec)
    ik: IkDomainSpec = Field(default_factory=IkDomainSpec)
    cloud: CloudDomainSpec = Field(default_factory=CloudDomainSpec)

    @model_validator(mode="before")
    @classmethod
    def _domain_defaults(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        merged = dict(data)
        for section, values in DOMAIN_DEFAULTS.get(data.get("domain"), {}).items():
            given = merged.get(section)
            if given is None:
                merged[section] = dict(values)
            elif isinstance(given, dict):
                merged[section] = {**values, **given}
        return merged

    @model_validator(mode="after")
    def _consistent(self) -> "ExperimentConfig":
        expected = DOMAIN_SCORE[self.domain]
        if self.score.kind != expected:
            raise ValueError(f"domain {self.domain!r} requires score kind {expected!r}, got {self.score.kind!r}")
        if self.domain == "ik" and self.ik.prior_path is None:
            raise ValueError("ik domain requires ik.prior_path (train one with train-prior)")
        if self.domain == "grasp" and self.score.fingers != _finger_count(self.cloud.finger_preset):
            raise ValueError(
                f"grasp score expects {self.score.fingers} fingers, preset "
                f"{self.cloud.finger_preset!r} has {_finger_count(self.cloud.finger_preset)}"
            )
        if self.domain == "toy" and not (self.toy.limits[0] < self.score.target < self.toy.limits[1]):
            raise ValueError("toy score target must lie inside the toy limits")
        return self


def _finger_count(preset: str) -> int:
    return {"diagonal_plus_x": 5, "diagonal_minus_x": 5, "antipodal_x": 2}[preset]


class MetricsReport(BaseModel):
    """Evaluation of one model on fresh samples."""

    domain: Domain
    method: str
    label: str = ""
    n_samples: int
    score_mean: float
    score_std: float
    success_rate: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    diversity: Optional[float] = None
    best_score: Optional[float] = None
    accuracy: Optional[float] = Field(default=None, description="goal distance of the best sample (ik)")
    n_observations: int = 1
    seed: int = 0
    wall_clock: Dict[str, float] = Field(default_factory=dict)
