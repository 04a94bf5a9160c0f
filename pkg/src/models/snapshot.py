"""Flat parameter snapshots used for theta_0 retention and post-mortems."""

from __future__ import annotations

import hashlib
from typing import List

import numpy as np
from pydantic import BaseModel, Field

from src.utils.errors import PreconditionError


class ParamSnapshot(BaseModel):
    """All tunable parameters of a model as one flat vector, tagged by model kind."""

    kind: str
    theta: List[float] = Field(default_factory=list)

    @classmethod
    def of(cls, kind: str, theta: np.ndarray) -> "ParamSnapshot":
        return cls(kind=kind, theta=np.asarray(theta, dtype=float).tolist())

    def to_array(self, expected_kind: str | None = None) -> np.ndarray:
        if expected_kind is not None and expected_kind != self.kind:
            raise PreconditionError(f"snapshot is for {self.kind!r}, not {expected_kind!r}")
        return np.array(self.theta, dtype=float)

    def digest(self) -> str:
        return hashlib.sha256(np.asarray(self.theta, dtype=float).tobytes()).hexdigest()
