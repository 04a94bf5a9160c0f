"""Short runs of the point-cloud domains."""

from __future__ import annotations

import pytest

from src.orchestrator.experiment import run_experiment
from src.protocols.schemas import ExperimentConfig


def cloud_experiment(domain, kind, out):
    return ExperimentConfig.model_validate(
        {
            "name": domain,
            "domain": domain,
            "output_dir": str(out),
            "score": {"kind": kind, **({"contact_scale": 1.0} if kind == "grasp" else {})},
            "mace": {"T": 2, "N": 16, "M": 4, "q": 0.25, "learning_rate": 1e-2},
            "eval_samples": 8,
            "cloud": {"n_points": 128, "diversity_samples": 4},
        }
    )


@pytest.mark.parametrize("domain,kind", [("grasp", "grasp"), ("pc_complete", "chamfer")])
def test_cloud_runs_write_clouds(domain, kind, tmp_path):
    result = run_experiment(cloud_experiment(domain, kind, tmp_path))
    report = result.report
    assert 0.0 <= report.score_mean <= 1.0
    assert report.diversity is not None and report.diversity > 0.0
    samples = result.run_dir / "samples"
    assert (samples / "object.xyz").is_file()
    assert len(list(samples.glob("sample_*.xyz"))) == 4
    assert result.tuned[0].frozen_fingerprints() == result.evaluations[0].setup.model.frozen_fingerprints()
