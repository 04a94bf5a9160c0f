"""Domain setups: prior model, simulator, score and observation per experiment domain."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from src.adapt.protocols import ScoreFunction, Simulator, TunableModel
from src.models.autoregressive import AutoregressiveGmmModel, constant_head_model
from src.models.latent import BoxDecoder, BoxEncoder, LatentGaussianModel
from src.models.mixture import MixtureHead1D
from src.models.serialization import load_model
from src.orchestrator.datasets import chain_from_spec
from src.protocols.metrics import success_rate
from src.protocols.schemas import CloudDomainSpec, ExperimentConfig
from src.simulators.clouds import (
    PartialCloudSimulator,
    bounding_radius,
    center_cloud,
    normalize_unit_radius,
    random_cut,
    read_xyz,
)
from src.simulators.grasp import GraspSimulator, finger_directions
from src.simulators.kinematics import IkObservation, IkSimulator
from src.simulators.obstacles import make_obstacles
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass
class DomainSetup:
    """One tuning problem: everything the adaptation loop needs for a single observation."""

    domain: str
    label: str
    model: TunableModel
    simulator: Simulator
    score: ScoreFunction
    observation: Any
    success: Optional[Callable[[list], float]] = None
    goal: Optional[tuple[float, float]] = None
    extras: dict[str, Any] = field(default_factory=dict)


def identity(x: Any) -> Any:
    return x


def ik_goals(config: ExperimentConfig, rng: np.random.Generator) -> list[tuple[float, float]]:
    if config.ik.goals:
        return [(float(x), float(y)) for x, y in config.ik.goals]
    xmin, xmax, ymin, ymax = config.ik.goal_region
    pts = np.column_stack([rng.uniform(xmin, xmax, config.ik.n_goals), rng.uniform(ymin, ymax, config.ik.n_goals)])
    return [(float(x), float(y)) for x, y in pts]


def cloud_models(spec: CloudDomainSpec) -> tuple[BoxDecoder, LatentGaussianModel]:
    decoder = BoxDecoder(spec.n_points, spec.extent_low, spec.extent_high, spec.point_seed)
    encoder = BoxEncoder(spec.extent_low, spec.extent_high, spec.sigma_q)
    return decoder, LatentGaussianModel.standard(spec.sigma_z, decoder, encoder)


def held_out_object(spec: CloudDomainSpec, decoder: BoxDecoder, rng: np.random.Generator) -> np.ndarray:
    """The object to observe: a file if configured, else a box decoded with a fresh point draw."""
    if spec.observation_path is not None:
        pc = normalize_unit_radius(read_xyz(spec.observation_path))
        pc[:, 2] -= pc[:, 2].min()
        return pc
    z = np.asarray(spec.object_latent, dtype=float) if spec.object_latent is not None else rng.standard_normal(4)
    other = BoxDecoder(decoder.n_points, decoder.extent_low, decoder.extent_high, decoder.point_seed + 1)
    return other.decode(z)


class DomainRegistry:
    """Lazily built and cached domain setups for one experiment config."""

    def __init__(self, config: ExperimentConfig, rng: np.random.Generator) -> None:
        self._config = config
        self._rng = rng
        self._cache: dict[str, list[DomainSetup]] = {}

    def get(self, domain: Optional[str] = None, model: Any = None) -> list[DomainSetup]:
        domain = domain or self._config.domain
        key = f"{domain}:{id(model) if model is not None else 'prior'}"
        if key not in self._cache:
            self._cache[key] = self._create(domain, model)
        return self._cache[key]

    def _create(self, domain: str, model: Any) -> list[DomainSetup]:
        builders = {"toy": self._toy, "ik": self._ik, "grasp": self._grasp, "pc_complete": self._pc_complete}
        try:
            builder = builders[domain]
        except KeyError:
            raise ConfigError(f"unknown domain {domain!r}") from None
        setups = builder(model)
        logger.info("built %d %s setup(s)", len(setups), domain)
        return setups

    def _toy(self, model: Any) -> list[DomainSetup]:
        spec = self._config.toy
        if model is None:
            head = MixtureHead1D(spec.weights, spec.means, spec.stddevs)
            model = constant_head_model([head], np.array([spec.limits]), sigma_min=spec.sigma_min)
        if not isinstance(model, AutoregressiveGmmModel):
            raise ConfigError("toy domain needs an autoregressive model")
        return [
            DomainSetup(
                domain="toy",
                label="toy",
                model=model.bind(np.zeros(0)),
                simulator=identity,
                score=self._config.score.build(),
                observation=self._config.score.target,
            )
        ]

    def _ik(self, model: Any) -> list[DomainSetup]:
        config = self._config
        chain = chain_from_spec(config.ik.chain)
        prior = model if model is not None else load_model(config.ik.prior_path)
        if not isinstance(prior, AutoregressiveGmmModel):
            raise ConfigError("ik domain needs an autoregressive prior")
        if prior.condition_dim != 2 or prior.dof != chain.n_joints:
            raise ConfigError(
                f"prior has condition_dim={prior.condition_dim}, dof={prior.dof}; "
                f"chain needs 2 and {chain.n_joints}"
            )
        if not np.allclose(prior.joint_limits, chain.joint_limits):
            raise ConfigError("prior joint limits differ from the chain's")
        simulator = IkSimulator(chain, make_obstacles(config.ik.obstacles.preset, config.ik.obstacles.params))
        score = config.score.build()
        setups = []
        for i, goal in enumerate(ik_goals(config, self._rng)):
            setups.append(
                DomainSetup(
                    domain="ik",
                    label=f"goal{i}",
                    model=prior.bind(goal),
                    simulator=simulator,
                    score=score,
                    observation=IkObservation(False, goal),
                    success=success_rate,
                    goal=goal,
                )
            )
        return setups

    def _cloud_model(self, model: Any) -> tuple[BoxDecoder, LatentGaussianModel]:
        decoder, prior = cloud_models(self._config.cloud)
        if model is None:
            return decoder, prior
        if not isinstance(model, LatentGaussianModel):
            raise ConfigError(f"{self._config.domain} domain needs a latent model")
        return model.decoder, model

    def _grasp(self, model: Any) -> list[DomainSetup]:
        spec = self._config.cloud
        decoder, prior = self._cloud_model(model)
        target = held_out_object(spec, decoder, self._rng)
        radius = spec.grasp_radius or 0.1 * bounding_radius(center_cloud(target))
        simulator = GraspSimulator(finger_directions(spec.finger_preset), radius)
        return [
            DomainSetup(
                domain="grasp",
                label="object",
                model=prior,
                simulator=simulator,
                score=self._config.score.build(),
                observation=simulator(target),
                extras={"object": target, "radius": radius},
            )
        ]

    def _pc_complete(self, model: Any) -> list[DomainSetup]:
        spec = self._config.cloud
        decoder, prior = self._cloud_model(model)
        target = held_out_object(spec, decoder, self._rng)
        plane, partial = random_cut(target, self._rng)
        return [
            DomainSetup(
                domain="pc_complete",
                label="object",
                model=prior,
                simulator=PartialCloudSimulator(plane, min_points=self._config.score.k_nn),
                score=self._config.score.build(),
                observation=partial,
                extras={"object": target, "plane": plane},
            )
        ]
