"""Per-iteration records and the serialisable run document."""

from __future__ import annotations

import json
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field

from src.models.snapshot import ParamSnapshot
from src.protocols.schemas import MaceConfig

CSV_FIELDS = ["t", "delta", "mean_score", "max_score", "selected_count", "success_rate", "ess", "max_weight", "skipped"]


class IterationRecord(BaseModel):
    t: int
    scores: List[float]
    delta: Optional[float] = None
    selected_count: int = 0
    mean_score: float
    max_score: float
    post_step_log_density: Optional[float] = None
    resample_attempts: int = 1
    skipped: bool = False
    success_rate: Optional[float] = None
    # importance-sampling baseline only
    ess: Optional[float] = None
    max_weight: Optional[float] = None
    min_ratio: Optional[float] = None
    max_ratio: Optional[float] = None


class AdaptationRun(BaseModel):
    method: Literal["mace", "is"]
    config: MaceConfig
    theta_0: ParamSnapshot
    theta_T: ParamSnapshot
    records: List[IterationRecord] = Field(default_factory=list)
    timings: Dict[str, float] = Field(default_factory=dict)

    def to_json(self, include_timing: bool = True) -> str:
        """JSON document; without timings it is bit-identical across reruns with the same seed."""
        exclude = None if include_timing else {"timings"}
        return json.dumps(self.model_dump(mode="json", exclude=exclude), sort_keys=True)

    def metrics_rows(self) -> list[dict]:
        return [{k: getattr(r, k) for k in CSV_FIELDS} for r in self.records]

