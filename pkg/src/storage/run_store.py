"""Run directories: ``<root>/<timestamp>-<name>/`` holding config, models, records and samples."""

from __future__ import annotations

import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel

from src.models.serialization import save_model
from src.utils.config import get_settings

logger = logging.getLogger(__name__)


class RunStore:
    """Writes the artefacts of one experiment into a fresh directory."""

    def __init__(self, name: str, root: Optional[Path] = None, *, stamp: Optional[str] = None) -> None:
        root = Path(root) if root is not None else get_settings().runs_dir
        stamp = stamp or datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
        base = root / f"{stamp}-{name}"
        path, suffix = base, 1
        while path.exists():
            suffix += 1
            path = base.with_name(f"{base.name}-{suffix}")
        path.mkdir(parents=True)
        self.path = path
        logger.info("writing run artefacts to %s", path)

    @property
    def samples_dir(self) -> Path:
        p = self.path / "samples"
        p.mkdir(exist_ok=True)
        return p

    def write_json(self, name: str, payload: Any) -> Path:
        target = self.path / name
        if isinstance(payload, BaseModel):
            text = payload.model_dump_json(indent=2)
        else:
            text = json.dumps(payload, indent=2, sort_keys=True)
        target.write_text(text, encoding="utf-8")
        return target

    def write_text(self, name: str, text: str) -> Path:
        target = self.path / name
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
        return target

    def write_model(self, name: str, model: Any) -> Path:
        return save_model(model, self.path / name)
