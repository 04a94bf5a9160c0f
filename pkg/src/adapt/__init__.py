"""Adaptation engine: cross-entropy tuning, the importance-sampling baseline,
best-of-prior sampling and the rejection oracle."""

from src.adapt.importance import is_tune
from src.adapt.mace import elite_threshold, mace_tune
from src.adapt.prior_only import BestSample, prior_only_best
from src.adapt.records import AdaptationRun, IterationRecord
from src.adapt.rejection import (
    OracleComparison,
    accept_above,
    accept_with_probability,
    compare_to_oracle,
    rejection_posterior,
)

__all__ = [
    "AdaptationRun",
    "BestSample",
    "IterationRecord",
    "OracleComparison",
    "accept_above",
    "accept_with_probability",
    "compare_to_oracle",
    "elite_threshold",
    "is_tune",
    "mace_tune",
    "prior_only_best",
    "rejection_posterior",
]
