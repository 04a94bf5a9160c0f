"""IK training datasets: valid joint configurations with their end-effector positions.

Files are CSV with a JSON metadata comment line, written with full float
precision so the same seed reproduces the same bytes.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from src.protocols.schemas import ChainSpec
from src.simulators.kinematics import KinematicChain, forward_kinematics_batch
from src.simulators.obstacles import ObstacleSet, check_collision_batch
from src.utils.errors import ConfigError, PreconditionError
from src.utils.seeding import SeedLike, as_generator

logger = logging.getLogger(__name__)

MIN_VALIDITY = 1e-3
MIN_DRAWS_FOR_VALIDITY = 10_000


@dataclass
class IkDataset:
    chain: KinematicChain
    ee: np.ndarray
    qs: np.ndarray


def chain_from_spec(spec: ChainSpec) -> KinematicChain:
    return KinematicChain(tuple(spec.link_lengths), spec.joint_limits, spec.base)


def gen_dataset(chain: KinematicChain, count: int, seed: SeedLike = 0, *, batch_size: int = 4096) -> IkDataset:
    """Rejection-sample ``count`` configurations within limits and free of self-collision."""
    if count < 1:
        raise PreconditionError("count must be at least 1")
    rng = as_generator(seed)
    lo, hi = chain.joint_limits[:, 0], chain.joint_limits[:, 1]
    free = ObstacleSet()
    kept_q: list[np.ndarray] = []
    kept_ee: list[np.ndarray] = []
    n_valid = draws = 0
    while n_valid < count:
        qs = rng.uniform(lo, hi, size=(batch_size, chain.n_joints))
        ee, segments = forward_kinematics_batch(chain, qs)
        ok = ~check_collision_batch(segments, free)
        kept_q.append(qs[ok])
        kept_ee.append(ee[ok])
        n_valid += int(ok.sum())
        draws += batch_size
        if draws >= MIN_DRAWS_FOR_VALIDITY and n_valid / draws < MIN_VALIDITY:
            raise ConfigError(f"only {n_valid} of {draws} configurations are valid; check the chain geometry")
    logger.info("gen_dataset: %d valid of %d drawn (%.1f%%)", n_valid, draws, 100.0 * n_valid / draws)
    return IkDataset(chain, np.concatenate(kept_ee)[:count], np.concatenate(kept_q)[:count])


def write_dataset(dataset: IkDataset, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = {
        "link_lengths": list(dataset.chain.link_lengths),
        "joint_limits": dataset.chain.joint_limits.tolist(),
        "base": list(dataset.chain.base),
    }
    header = ",".join(["ee_x", "ee_y", *(f"q_{j}" for j in range(dataset.qs.shape[1]))])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# " + json.dumps(meta, sort_keys=True) + "\n")
        np.savetxt(fh, np.hstack([dataset.ee, dataset.qs]), fmt="%.17g", delimiter=",", header=header, comments="")
    return path


def read_dataset(path: str | Path, chain: Optional[KinematicChain] = None) -> IkDataset:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"dataset not found: {path}")
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
    if not first.startswith("# "):
        raise ConfigError(f"{path}: missing metadata line")
    meta = json.loads(first[2:])
    chain = chain or KinematicChain(tuple(meta["link_lengths"]), meta["joint_limits"], tuple(meta["base"]))
    data = np.loadtxt(path, delimiter=",", skiprows=2, ndmin=2)
    if data.shape[1] != 2 + chain.n_joints:
        raise ConfigError(f"{path}: expected {2 + chain.n_joints} columns, found {data.shape[1]}")
    return IkDataset(chain, data[:, :2], data[:, 2:])
