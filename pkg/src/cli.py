"""Command-line entry point: ``gen-data``, ``train-prior``, ``tune``, ``eval`` and ``compare``.

Exit codes: 0 success, 1 compared methods not in the expected order,
2 configuration error, 3 numerical fault.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from pydantic import ValidationError

from src.models.serialization import load_model, save_model
from src.models.training import train_prior
from src.orchestrator.compare import compare
from src.orchestrator.datasets import chain_from_spec, gen_dataset, read_dataset, write_dataset
from src.orchestrator.experiment import run_experiment
from src.protocols.schemas import DOMAIN_SCORE, ChainSpec, ExperimentConfig, MetricsReport, PriorTrainingConfig
from src.utils.config import get_settings
from src.utils.errors import (
    AllZeroScoresError,
    ConfigError,
    NumericalFault,
    PreconditionError,
    RejectionInfeasibleError,
)
from src.utils.logger import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_ORDER, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _read_json(path: Path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc


def deep_merge(base: dict, override: dict) -> dict:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _set(data: dict, path: str, value: Any) -> None:
    if value is None:
        return
    *parents, leaf = path.split(".")
    for key in parents:
        data = data.setdefault(key, {})
    data[leaf] = value


def experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    """Flags first, then the ``--config`` file on top of them."""
    data: dict = {}
    for path, value in [
        ("name", args.name),
        ("domain", args.domain),
        ("method", getattr(args, "method", None)),
        ("seed", args.seed),
        ("output_dir", args.output_dir),
        ("eval_samples", args.eval_samples),
        ("prior_batches", args.prior_batches),
        ("mace.T", args.T),
        ("mace.N", args.N),
        ("mace.M", args.M),
        ("mace.q", args.q),
        ("mace.learning_rate", args.lr),
        ("mace.seed", args.tune_seed),
        ("ik.prior_path", args.prior),
        ("ik.n_goals", args.n_goals),
        ("ik.goals", args.goal),
        ("ik.obstacles.preset", args.obstacle),
        ("cloud.observation_path", args.observation),
    ]:
        _set(data, path, value)
    if args.config is not None:
        data = deep_merge(data, _read_json(args.config))
    if "seed" not in data:
        data["seed"] = get_settings().default_seed
    if "eval_samples" not in data:
        data["eval_samples"] = get_settings().eval_samples
    domain = data.get("domain")
    if domain in DOMAIN_SCORE and "score" not in data:
        data["score"] = {"kind": DOMAIN_SCORE[domain]}
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"invalid experiment config: {exc}") from exc


def cmd_gen_data(args: argparse.Namespace) -> int:
    spec_data = _read_json(args.config) if args.config else {}
    if args.link_lengths and "link_lengths" not in spec_data:
        spec_data["link_lengths"] = args.link_lengths
    try:
        spec = ChainSpec.model_validate(spec_data)
    except ValidationError as exc:
        raise ConfigError(f"invalid chain config: {exc}") from exc
    seed = args.seed if args.seed is not None else get_settings().default_seed
    dataset = gen_dataset(chain_from_spec(spec), args.count, seed)
    path = write_dataset(dataset, args.out)
    print(f"wrote {dataset.qs.shape[0]} configurations to {path}")
    return EXIT_OK


def cmd_train_prior(args: argparse.Namespace) -> int:
    data: dict = {}
    for key, value in [
        ("steps", args.steps),
        ("batch_size", args.batch_size),
        ("learning_rate", args.lr),
        ("seed", args.seed),
        ("hidden", args.hidden),
        ("n_components", args.n_components),
    ]:
        if value is not None:
            data[key] = value
    if args.config is not None:
        data.update(_read_json(args.config))
    data.setdefault("sigma_min", get_settings().sigma_min)
    try:
        config = PriorTrainingConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"invalid training config: {exc}") from exc
    dataset = read_dataset(args.data)
    result = train_prior(dataset.ee, dataset.qs, dataset.chain.joint_limits, config)
    path = save_model(result.model, args.out)
    print(
        json.dumps(
            {
                "model": str(path),
                "train_log_likelihood": result.train_log_likelihood,
                "heldout_log_likelihood": result.heldout_log_likelihood,
            },
            indent=2,
        )
    )
    return EXIT_OK


def _print_result(result: Any) -> None:
    print(result.report.model_dump_json(indent=2))
    if result.run_dir is not None:
        print(f"artefacts: {result.run_dir}")


def cmd_tune(args: argparse.Namespace) -> int:
    config = experiment_config(args)
    _print_result(run_experiment(config))
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    config = experiment_config(args)
    model = load_model(args.model) if args.model else None
    _print_result(run_experiment(config, tune=False, model=model))
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    reports = []
    for path in args.reports:
        try:
            reports.append(MetricsReport.model_validate(_read_json(path)))
        except ValidationError as exc:
            raise ConfigError(f"{path}: not a metrics report: {exc}") from exc
    table = compare(reports)
    print(table.to_text())
    if args.csv:
        Path(args.csv).write_text(table.to_csv(), encoding="utf-8")
    return EXIT_OK if table.ordering_held else EXIT_ORDER


def _experiment_flags(p: argparse.ArgumentParser, with_method: bool) -> None:
    p.add_argument("--config", type=Path, help="JSON experiment config; its values override flags")
    p.add_argument("--name")
    p.add_argument("--domain", choices=sorted(DOMAIN_SCORE))
    if with_method:
        p.add_argument("--method", choices=["mace", "is", "prior_only"])
    p.add_argument("--seed", type=int)
    p.add_argument("--output-dir", type=Path)
    p.add_argument("--eval-samples", type=int)
    p.add_argument("--prior-batches", type=int)
    p.add_argument("--T", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--q", type=float)
    p.add_argument("--lr", type=float)
    p.add_argument("--tune-seed", type=int)
    p.add_argument("--prior", type=Path, help="autoregressive prior for the ik domain")
    p.add_argument("--n-goals", type=int)
    p.add_argument("--goal", type=float, nargs=2, action="append", metavar=("X", "Y"))
    p.add_argument("--obstacle", choices=["none", "wall", "window", "box"])
    p.add_argument("--observation", type=Path, help="XYZ file of the observed object")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mace", description="Adapt generative models to observations.")
    parser.add_argument("--log-level", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="sample valid IK configurations")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--config", type=Path, help="JSON chain config")
    p.add_argument("--link-lengths", type=float, nargs="+")
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("train-prior", help="fit the autoregressive IK prior")
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--config", type=Path, help="JSON training config; its values override flags")
    p.add_argument("--steps", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--hidden", type=int, nargs="+")
    p.add_argument("--n-components", type=int)
    p.set_defaults(func=cmd_train_prior)

    p = sub.add_parser("tune", help="adapt a model to an observation and evaluate it")
    _experiment_flags(p, with_method=True)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("eval", help="evaluate a model without tuning")
    _experiment_flags(p, with_method=False)
    p.add_argument("--model", type=Path, help="saved model; defaults to the domain prior")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="tabulate metrics reports")
    p.add_argument("reports", type=Path, nargs="+")
    p.add_argument("--csv", type=Path)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or get_settings().log_level)
    try:
        return args.func(args)
    except (ConfigError, PreconditionError) as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG
    except (NumericalFault, AllZeroScoresError, RejectionInfeasibleError) as exc:
        logger.error("numerical fault: %s", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
