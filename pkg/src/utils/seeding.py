"""Seed handling: every stochastic routine takes a seed or a Generator."""

from __future__ import annotations

from typing import Union

import numpy as np

SeedLike = Union[int, np.random.Generator, np.random.SeedSequence, None]


def as_generator(seed: SeedLike) -> np.random.Generator:
    """Return ``seed`` as a numpy Generator (Generators pass through unchanged)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def spawn_streams(seed: int, names: list[str]) -> dict[str, np.random.Generator]:
    """Split one experiment seed into independent named streams.

    The order of ``names`` fixes the mapping, so adding a stream at the end
    never changes the streams before it.
    """
    children = np.random.SeedSequence(seed).spawn(len(names))
    return {name: np.random.default_rng(child) for name, child in zip(names, children)}


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministic integer seed for a sub-task identified by ``keys``."""
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1, dtype=np.uint32)[0])
