"""Unit tests for the command-line surface and its exit codes."""

from __future__ import annotations

import json

from src.cli import build_parser, experiment_config, main
from src.models.serialization import load_model
from src.protocols.schemas import MetricsReport


def _report(path, method, mean):
    report = MetricsReport(domain="toy", method=method, n_samples=10, score_mean=mean, score_std=0.1)
    path.write_text(report.model_dump_json(), encoding="utf-8")
    return str(path)


def test_config_file_overrides_flags(tmp_path):
    config = tmp_path / "exp.json"
    config.write_text(json.dumps({"mace": {"T": 2}}), encoding="utf-8")
    args = build_parser().parse_args(["tune", "--domain", "toy", "--T", "5", "--N", "32", "--config", str(config)])
    parsed = experiment_config(args)
    assert parsed.mace.T == 2
    assert parsed.mace.N == 32
    assert parsed.score.kind == "toy"


def test_compare_exit_codes(tmp_path):
    mace = _report(tmp_path / "mace.json", "mace", 0.9)
    prior = _report(tmp_path / "prior.json", "prior", 0.2)
    worse = _report(tmp_path / "worse.json", "is", 0.95)
    assert main(["compare", mace, prior]) == 0
    assert main(["compare", mace, worse, prior, "--csv", str(tmp_path / "t.csv")]) == 1
    assert (tmp_path / "t.csv").exists()


def test_configuration_errors_exit_with_two(tmp_path):
    assert main(["tune", "--domain", "ik"]) == 2
    assert main(["tune", "--domain", "toy", "--N", "8", "--q", "0.01"]) == 2
    assert main(["compare", str(tmp_path / "missing.json"), str(tmp_path / "other.json")]) == 2


def test_zero_score_fault_exits_with_three(tmp_path):
    config = tmp_path / "exp.json"
    # a target this far into the tail underflows every score to zero
    config.write_text(
        json.dumps({"score": {"kind": "toy", "target": 2000.0}, "toy": {"limits": [-3000.0, 3000.0]}}),
        encoding="utf-8",
    )
    code = main(["tune", "--domain", "toy", "--T", "1", "--N", "16", "--q", "0.25", "--config", str(config)])
    assert code == 3


def test_toy_tune_writes_run_directory(tmp_path):
    out = tmp_path / "runs"
    code = main(
        ["tune", "--domain", "toy", "--name", "toy", "--T", "5", "--N", "16", "--q", "0.25",
         "--eval-samples", "20", "--output-dir", str(out)]
    )
    assert code == 0
    (run_dir,) = list(out.iterdir())
    for name in ["config.json", "model_before.json", "model_after.json", "run.json", "metrics.csv", "metrics.json"]:
        assert (run_dir / name).is_file(), name
    assert len(json.loads((run_dir / "run.json").read_text())[0]["records"]) == 5
    assert (run_dir / "samples" / "eval_samples.json").is_file()


def test_gen_data_then_train_prior(tmp_path):
    data = tmp_path / "ik.csv"
    prior = tmp_path / "prior.json"
    assert main(["gen-data", "--count", "200", "--seed", "0", "--out", str(data), "--link-lengths", "1", "0.8", "0.6"]) == 0
    code = main(
        ["train-prior", "--data", str(data), "--out", str(prior), "--steps", "5", "--hidden", "8", "--batch-size", "32"]
    )
    assert code == 0
    model = load_model(prior)
    assert model.condition_dim == 2
    assert model.dof == 3
