"""Experiment runner: tune (or not), evaluate on fresh samples, write artefacts."""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from src.adapt.importance import is_tune
from src.adapt.mace import mace_tune
from src.adapt.prior_only import BestSample, prior_only_best
from src.adapt.protocols import TunableModel, score_batch, simulate_batch
from src.adapt.records import CSV_FIELDS, AdaptationRun
from src.orchestrator.domains import DomainRegistry, DomainSetup
from src.protocols.metrics import goal_distance, score_summary, success_rate
from src.protocols.schemas import ExperimentConfig, MetricsReport
from src.scoring.chamfer import diversity
from src.simulators.clouds import write_xyz
from src.storage.run_store import RunStore
from src.utils.seeding import derive_seed, spawn_streams

logger = logging.getLogger(__name__)

CLOUD_DOMAINS = ("grasp", "pc_complete")


@dataclass
class Evaluation:
    setup: DomainSetup
    samples: np.ndarray
    observations: list
    scores: np.ndarray
    diversity: Optional[float] = None


@dataclass
class ExperimentResult:
    report: MetricsReport
    evaluations: list[Evaluation]
    runs: list[AdaptationRun] = field(default_factory=list)
    best: list[BestSample] = field(default_factory=list)
    tuned: list[TunableModel] = field(default_factory=list)
    run_dir: Optional[Path] = None


def evaluate(
    setup: DomainSetup, model: TunableModel, n: int, rng: np.random.Generator, diversity_samples: int = 49
) -> Evaluation:
    samples = model.sample(n, rng)
    observations = simulate_batch(setup.simulator, samples)
    scores = score_batch(setup.score, observations, setup.observation)
    div = None
    if setup.domain in CLOUD_DOMAINS and n >= 2:
        div = diversity(list(samples[: min(n, diversity_samples)]))
    return Evaluation(setup, samples, observations, scores, div)


def build_report(
    config: ExperimentConfig,
    method: str,
    evaluations: list[Evaluation],
    best: list[BestSample],
    wall_clock: dict[str, float],
) -> MetricsReport:
    scores = np.concatenate([e.scores for e in evaluations])
    mean, std = score_summary(scores)
    success = None
    if config.domain == "ik":
        success = success_rate([o for e in evaluations for o in e.observations])
    divs = [e.diversity for e in evaluations if e.diversity is not None]
    best_score = accuracy = None
    if best:
        best_score = float(np.mean([b.score for b in best]))
        if config.domain == "ik":
            accuracy = float(np.mean([goal_distance(b.observation, e.setup.goal) for b, e in zip(best, evaluations)]))
    return MetricsReport(
        domain=config.domain,
        method=method,
        label=config.name,
        n_samples=int(scores.size),
        score_mean=mean,
        score_std=std,
        success_rate=success,
        diversity=float(np.mean(divs)) if divs else None,
        best_score=best_score,
        accuracy=accuracy,
        n_observations=len(evaluations),
        seed=config.seed,
        wall_clock=wall_clock,
    )


def run_experiment(
    config: ExperimentConfig,
    *,
    tune: bool = True,
    model: Any = None,
    write: bool = True,
) -> ExperimentResult:
    """Run ``config.method`` on every observation of the domain and evaluate.

    ``tune=False`` evaluates the given (or prior) model as is and labels the
    report ``prior``. Evaluation draws from its own seed stream, so it never
    reuses tuning samples.
    """
    start = time.perf_counter()
    streams = spawn_streams(config.seed, ["observation", "evaluation", "prior_only"])
    setups = DomainRegistry(config, streams["observation"]).get(model=model)
    method = config.method if tune else "prior"

    runs: list[AdaptationRun] = []
    best: list[BestSample] = []
    tuned: list[TunableModel] = []
    evaluations: list[Evaluation] = []
    wall: dict[str, float] = {}
    for i, setup in enumerate(setups):
        cfg = config.mace.model_copy(update={"seed": derive_seed(config.mace.seed, i)})
        current = setup.model
        if method == "mace":
            current, run = mace_tune(current, setup.simulator, setup.score, setup.observation, cfg, success=setup.success)
            runs.append(run)
        elif method == "is":
            current, run = is_tune(current, setup.simulator, setup.score, setup.observation, cfg, success=setup.success)
            runs.append(run)
        elif method == "prior_only":
            found = prior_only_best(
                current, setup.simulator, setup.score, setup.observation,
                config.prior_batches, config.mace.N, streams["prior_only"],
            )
            best.append(found)
            wall["prior_only"] = wall.get("prior_only", 0.0) + found.wall_clock
        tuned.append(current)
        evaluations.append(
            evaluate(setup, current, config.eval_samples, streams["evaluation"], config.cloud.diversity_samples)
        )
        logger.info(
            "%s %s: eval mean score %.4f over %d samples",
            method, setup.label, evaluations[-1].scores.mean(), config.eval_samples,
        )
    for run in runs:
        for phase, seconds in run.timings.items():
            wall[phase] = wall.get(phase, 0.0) + seconds
    wall["total"] = time.perf_counter() - start

    report = build_report(config, method, evaluations, best, wall)
    result = ExperimentResult(report, evaluations, runs, best, tuned)
    if write:
        result.run_dir = write_artifacts(config, result, setups)
    return result


def write_artifacts(config: ExperimentConfig, result: ExperimentResult, setups: list[DomainSetup]) -> Path:
    store = RunStore(config.name, config.output_dir)
    store.write_json("config.json", config)
    store.write_model("model_before.json", setups[0].model)
    if len(result.tuned) == 1:
        store.write_model("model_after.json", result.tuned[0])
    else:
        for i, model in enumerate(result.tuned):
            store.write_model(f"model_after_{i}.json", model)
    if result.runs:
        store.write_text("run.json", "[" + ",".join(r.to_json() for r in result.runs) + "]")
        store.write_text("metrics.csv", metrics_csv(result.runs, setups))
    store.write_json("metrics.json", result.report)
    write_samples(store, result, config.cloud.diversity_samples)
    return store.path


def metrics_csv(runs: list[AdaptationRun], setups: list[DomainSetup]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=["observation", *CSV_FIELDS], lineterminator="\n")
    writer.writeheader()
    for run, setup in zip(runs, setups):
        for row in run.metrics_rows():
            writer.writerow({"observation": setup.label, **{k: "" if v is None else v for k, v in row.items()}})
    return buffer.getvalue()


def write_samples(store: RunStore, result: ExperimentResult, cloud_limit: int) -> None:
    """Per-sample dumps for plotting and re-checking the report."""
    out = store.samples_dir
    rows = []
    for e in result.evaluations:
        if e.setup.domain == "ik":
            rows.extend(
                {
                    "observation": e.setup.label,
                    "goal": list(e.setup.goal),
                    "q": q.tolist(),
                    "ee": list(o.ee_position),
                    "collision": o.collision,
                    "score": float(s),
                }
                for q, o, s in zip(e.samples, e.observations, e.scores)
            )
        elif e.setup.domain == "toy":
            rows.extend({"x": float(x[0]), "score": float(s)} for x, s in zip(e.samples, e.scores))
        else:
            rows.extend({"index": i, "score": float(s)} for i, s in enumerate(e.scores))
            for i, pc in enumerate(e.samples[:cloud_limit]):
                write_xyz(out / f"sample_{i:03d}.xyz", pc)
            write_xyz(out / "object.xyz", e.setup.extras["object"])
    (out / "eval_samples.json").write_text(json.dumps(rows, indent=1), encoding="utf-8")
    for i, b in enumerate(result.best):
        dump = {"index": b.index, "score": b.score, "scores": b.scores.tolist()}
        if b.samples is not None and b.samples.ndim == 2:
            dump["samples"] = b.samples.tolist()
        (out / f"prior_only_{i}.json").write_text(json.dumps(dump), encoding="utf-8")
