"""Unit tests for report comparison."""

from __future__ import annotations

import pytest

from src.orchestrator.compare import COLUMNS, compare, ordering_held
from src.protocols.schemas import MetricsReport
from src.utils.errors import ConfigError


def report(method, mean, domain="ik"):
    return MetricsReport(domain=domain, method=method, n_samples=10, score_mean=mean, score_std=0.1)


def test_ordering_held():
    assert ordering_held([report("prior", 0.1), report("mace", 0.8), report("is", 0.5)])
    assert not ordering_held([report("prior", 0.6), report("mace", 0.8), report("is", 0.5)])
    assert ordering_held([report("mace", 0.8), report("prior", 0.1)])
    assert not ordering_held([report("mace", 0.8)])


def test_table_rows_and_csv():
    table = compare([report("mace", 0.8), report("is", 0.5), report("prior", 0.1)])
    assert [r["method"] for r in table.rows] == ["mace", "is", "prior"]
    assert table.ordering_held
    lines = table.to_csv().splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert len(lines) == 4
    assert "held: yes" in table.to_text()


def test_needs_two_reports_of_one_domain():
    with pytest.raises(ConfigError):
        compare([report("mace", 0.8)])
    with pytest.raises(ConfigError):
        compare([report("mace", 0.8), report("prior", 0.1, domain="toy")])
