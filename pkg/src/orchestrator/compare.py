"""Side-by-side comparison of metrics reports."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

from src.protocols.schemas import MetricsReport
from src.utils.errors import ConfigError

ORDER = ("mace", "is", "prior")
COLUMNS = ["method", "label", "score_mean", "score_std", "success_rate", "diversity", "best_score", "accuracy", "time_s"]


@dataclass
class ComparisonTable:
    rows: list[dict]
    ordering_held: bool

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({k: "" if row[k] is None else row[k] for k in COLUMNS})
        return buffer.getvalue()

    def to_text(self) -> str:
        cells = [[_fmt(row[k]) for k in COLUMNS] for row in self.rows]
        widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(COLUMNS)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(COLUMNS, widths))]
        lines.append("  ".join("-" * w for w in widths))
        lines.extend("  ".join(v.ljust(w) for v, w in zip(r, widths)) for r in cells)
        lines.append(f"ordering mace > is > prior held: {'yes' if self.ordering_held else 'no'}")
        return "\n".join(lines)


def _fmt(value: object) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def ordering_held(reports: Sequence[MetricsReport]) -> bool:
    """Whether mean scores strictly decrease mace > is > prior over the methods present (two or more)."""
    by_method = {r.method: r.score_mean for r in reports}
    present = [by_method[m] for m in ORDER if m in by_method]
    if len(present) < 2:
        return False
    return all(a > b for a, b in zip(present, present[1:]))


def compare(reports: Sequence[MetricsReport]) -> ComparisonTable:
    if len(reports) < 2:
        raise ConfigError("compare needs at least two reports")
    domains = {r.domain for r in reports}
    if len(domains) > 1:
        raise ConfigError(f"reports span several domains: {sorted(domains)}")
    rows = [
        {
            "method": r.method,
            "label": r.label,
            "score_mean": r.score_mean,
            "score_std": r.score_std,
            "success_rate": r.success_rate,
            "diversity": r.diversity,
            "best_score": r.best_score,
            "accuracy": r.accuracy,
            "time_s": r.wall_clock.get("total"),
        }
        for r in reports
    ]
    return ComparisonTable(rows, ordering_held(reports))
