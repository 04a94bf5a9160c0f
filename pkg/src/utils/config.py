"""Configuration utilities for environment-driven settings."""
from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-wide settings loaded from ``MACE_*`` environment variables."""

    # Output
    runs_dir: Path = Path("runs")
    log_level: str = "INFO"

    # Numerics
    default_seed: int = 0
    sigma_min: float = Field(default=1e-3, gt=0.0)
    eval_samples: int = Field(default=1000, ge=1)

    model_config = SettingsConfigDict(
        env_prefix="MACE_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
