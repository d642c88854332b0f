"""Experiment orchestration: seeded runs, rule sweeps, aggregation, export.

A plan names tasks and models; each (task, run) pair gets one data seed that
is shared by every model so they all train on identical data, while weight
seeds differ per model.  Reservoir models make a single pass over the
training split; the fully trained baselines run ten epochs.  Test accuracy
is measured over all masked positions of the full test split at each
cadence point, giving the accuracy curve that WADE summarizes.
"""

from __future__ import annotations

import json
import time
import zlib
from dataclasses import dataclass, field

import numpy as np

from . import metric, tasks
from .baseline import (DivergenceError, ElmanRnn, Lstm, LstmConfig, RnnConfig,
                       lstm_hidden_size, match_hidden_size, train_baseline)
from .errors import ConfigError
from .metric import AccuracyCurve, CheckpointSet, evaluation_steps
from .readout import Readout
from .reservoir import (CaConfig, CellularAutomatonReservoir, EchoStateNetwork,
                        EsnConfig)

MODEL_KINDS = ("esn", "reca", "rnn", "lstm")


@dataclass(frozen=True)
class ModelSpec:
    """One model entry of a plan: unique label, kind, and option overrides."""

    name: str
    kind: str
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ConfigError(f"model kind must be one of {MODEL_KINDS}, got {self.kind!r}")
        if self.kind == "reca" and "rule" not in self.options:
            raise ConfigError("reca models need a 'rule' option")


@dataclass(frozen=True)
class ExperimentPlan:
    tasks: tuple[int, ...]
    models: tuple[ModelSpec, ...]
    sequences: int = 1200
    runs: int = 100
    base_seed: int = 0
    split_ratio: float = 0.8
    epochs: int = 10
    checkpoints: CheckpointSet = field(default_factory=CheckpointSet)
    # unit_until, dense_until, dense_every, sparse_every
    cadence: tuple[int, int, int, int] = (10, 100, 10, 50)

    def __post_init__(self):
        if not self.tasks:
            raise ConfigError("plan needs at least one task")
        if not self.models:
            raise ConfigError("plan needs at least one model")
        if len({m.name for m in self.models}) != len(self.models):
            raise ConfigError("model names must be unique within a plan")
        if self.sequences < 2 or self.runs < 1 or self.epochs < 1:
            raise ConfigError("sequences, runs, and epochs must be positive")


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one (task, model, seed) experiment."""

    task_id: int
    model: str
    data_seed: int
    weight_seed: int
    config: dict
    curve: AccuracyCurve
    wade: float
    max_accuracy: float
    wall_clock: float
    failed: bool = False
    error: str = ""


def derive_seed(*parts) -> int:
    """Stable, well-mixed seed from integer parts."""
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


def data_seed_for(plan: ExperimentPlan, task_id: int, run_index: int) -> int:
    return derive_seed(plan.base_seed, task_id, run_index)


def weight_seed_for(plan: ExperimentPlan, task_id: int, run_index: int, model_name: str) -> int:
    return derive_seed(plan.base_seed, task_id, run_index,
                       zlib.crc32(model_name.encode("utf-8")))


def build_model(spec: ModelSpec, vocab_size: int, weight_seed: int):
    opts = spec.options
    if spec.kind == "esn":
        config = EsnConfig(state_size=opts.get("state_size", 1800),
                           nnz_per_row=opts.get("nnz_per_row", 10),
                           leak=opts.get("leak", 1.0), seed=weight_seed,
                           spectral_radius=opts.get("spectral_radius"))
        return EchoStateNetwork(config, vocab_size)
    if spec.kind == "reca":
        config = CaConfig(rule=opts["rule"], grid_size=opts.get("grid_size", 450),
                          recurrence=opts.get("recurrence", 4),
                          cells_per_token=opts.get("cells_per_token", 4), seed=weight_seed)
        return CellularAutomatonReservoir(config, vocab_size)
    if spec.kind == "rnn":
        hidden = opts.get("hidden") or match_hidden_size(vocab_size)
        return ElmanRnn(RnnConfig(hidden=hidden, vocab_size=vocab_size, seed=weight_seed))
    hidden = opts.get("hidden") or lstm_hidden_size(vocab_size)
    return Lstm(LstmConfig(hidden=hidden, vocab_size=vocab_size, seed=weight_seed))


def train_reservoir_readout(res_model, dataset: tasks.Dataset, eval_steps,
                            learning_rate: float = 0.001,
                            weight_decay: float = 0.001) -> AccuracyCurve:
    """Single pass of online readout training over the train split.

    The reservoir is frozen, so test features are computed once up front;
    each cadence point then only re-scores them under the current readout.
    """
    if not dataset.train_indices or not dataset.test_indices:
        raise ConfigError("dataset must be split before training")
    test_features = []
    test_targets = []
    for i in dataset.test_indices:
        sample = dataset.samples[i]
        feats = res_model.run_sequence(sample.tokens)
        idx = np.flatnonzero(np.asarray(sample.mask, dtype=bool))
        test_features.append(feats[idx - 1])
        test_targets.append(np.asarray(sample.tokens)[idx])
    x_test = np.concatenate(test_features)
    y_test = np.concatenate(test_targets)

    readout = Readout(res_model.feature_dim, dataset.vocabulary.size,
                      learning_rate=learning_rate, weight_decay=weight_decay)
    eval_set = set(eval_steps)
    points = []
    for step, i in enumerate(dataset.train_indices, start=1):
        sample = dataset.samples[i]
        feats = res_model.run_sequence(sample.tokens)
        readout.train_sequence(feats, sample.tokens, sample.mask)
        if step in eval_set:
            preds = np.argmax(x_test @ readout.weights, axis=1)
            points.append((step, float(np.mean(preds == y_test))))
    return AccuracyCurve(tuple(points))


def run_single(plan: ExperimentPlan, task_id: int, model_spec: ModelSpec,
               run_index: int) -> RunRecord:
    data_seed = data_seed_for(plan, task_id, run_index)
    weight_seed = weight_seed_for(plan, task_id, run_index, model_spec.name)
    dataset = tasks.generate(tasks.TaskSpec(task_id), data_seed, plan.sequences)
    dataset = tasks.split(dataset, plan.split_ratio, data_seed)
    model = build_model(model_spec, dataset.vocabulary.size, weight_seed)

    config = dict(model.config.as_dict())
    config["learning_rate"] = 0.001
    config["cadence"] = list(plan.cadence)   # step granularity of the curve
    started = time.perf_counter()
    failed = False
    error = ""
    if model_spec.kind in ("esn", "reca"):
        config["epochs"] = 1
        steps = evaluation_steps(len(dataset.train_indices), *plan.cadence)
        curve = train_reservoir_readout(model, dataset, steps)
    else:
        config["epochs"] = plan.epochs
        steps = evaluation_steps(plan.epochs * len(dataset.train_indices), *plan.cadence)
        try:
            curve = train_baseline(model, dataset, epochs=plan.epochs,
                                   eval_steps=steps, shuffle_seed=weight_seed)
        except DivergenceError as exc:
            curve = AccuracyCurve(())
            failed = True
            error = str(exc)
    elapsed = time.perf_counter() - started
    return RunRecord(
        task_id=task_id, model=model_spec.name, data_seed=data_seed,
        weight_seed=weight_seed, config=config, curve=curve,
        wade=metric.wade(curve, plan.checkpoints),
        max_accuracy=curve.max_accuracy(), wall_clock=elapsed,
        failed=failed, error=error,
    )


def run_experiment(plan: ExperimentPlan, progress=None) -> list[RunRecord]:
    """Execute every (task, run, model) cell of the plan."""
    records = []
    for task_id in plan.tasks:
        for run_index in range(plan.runs):
            for model_spec in plan.models:
                record = run_single(plan, task_id, model_spec, run_index)
                records.append(record)
                if progress is not None:
                    progress(record)
    return records


@dataclass(frozen=True)
class SweepResult:
    task_id: int
    best_rule: int
    mean_wade: dict[int, float]


def sweep_rules(plan: ExperimentPlan, rule_set, progress=None) -> list[SweepResult]:
    """Mean WADE per elementary rule and task; ties broken by lower rule."""
    rules = sorted(set(int(r) for r in rule_set))
    if not rules:
        raise ConfigError("rule set must be nonempty")
    if any(not 0 <= r <= 255 for r in rules):
        raise ConfigError("rules must be in 0..255")
    results = []
    for task_id in plan.tasks:
        means = {}
        for rule in rules:
            spec = ModelSpec(name=f"reca-{rule}", kind="reca", options={"rule": rule})
            wades = []
            for run_index in range(plan.runs):
                record = run_single(plan, task_id, spec, run_index)
                wades.append(record.wade)
                if progress is not None:
                    progress(record)
            means[rule] = float(np.mean(wades))
        best = max(means, key=lambda r: (means[r], -r))
        results.append(SweepResult(task_id=task_id, best_rule=best, mean_wade=means))
    return results


# ---------------------------------------------------------------------------
# Aggregation and persistence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AggregateCell:
    task_id: int
    model: str
    runs: int
    mean_wade: float
    std_wade: float
    mean_max_accuracy: float
    std_max_accuracy: float


def aggregate(records) -> list[AggregateCell]:
    """Per (task, model): mean and population std of WADE and max accuracy."""
    if not records:
        raise ConfigError("no records to aggregate")
    groups: dict[tuple[int, str], list[RunRecord]] = {}
    for r in records:
        groups.setdefault((r.task_id, r.model), []).append(r)
    cells = []
    for (task_id, model), group in sorted(groups.items()):
        wades = np.array([g.wade for g in group])
        accs = np.array([g.max_accuracy for g in group])
        cells.append(AggregateCell(
            task_id=task_id, model=model, runs=len(group),
            mean_wade=float(wades.mean()), std_wade=float(wades.std()),
            mean_max_accuracy=float(accs.mean()), std_max_accuracy=float(accs.std()),
        ))
    return cells


def format_table(cells) -> str:
    """Aligned text table of aggregates, one row per (task, model)."""
    header = f"{'task':>4}  {'model':<12} {'runs':>4}  {'WADE':>14}  {'max accuracy':>14}"
    lines = [header, "-" * len(header)]
    for c in cells:
        lines.append(
            f"{c.task_id:>4}  {c.model:<12} {c.runs:>4}  "
            f"{c.mean_wade:.3f} ±{c.std_wade:.3f}  "
            f"{c.mean_max_accuracy:.3f} ±{c.std_max_accuracy:.3f}")
    return "\n".join(lines)


def aggregate_csv(cells) -> str:
    rows = ["task_id,model,runs,mean_wade,std_wade,mean_max_accuracy,std_max_accuracy"]
    for c in cells:
        rows.append(f"{c.task_id},{c.model},{c.runs},{c.mean_wade!r},{c.std_wade!r},"
                    f"{c.mean_max_accuracy!r},{c.std_max_accuracy!r}")
    return "\n".join(rows) + "\n"


def record_to_dict(record: RunRecord) -> dict:
    return {
        "task_id": record.task_id, "model": record.model,
        "data_seed": record.data_seed, "weight_seed": record.weight_seed,
        "config": record.config, "curve": [[s, a] for s, a in record.curve.points],
        "wade": record.wade, "max_accuracy": record.max_accuracy,
        "wall_clock": record.wall_clock, "failed": record.failed, "error": record.error,
    }


def record_from_dict(data: dict) -> RunRecord:
    return RunRecord(
        task_id=data["task_id"], model=data["model"], data_seed=data["data_seed"],
        weight_seed=data["weight_seed"], config=data["config"],
        curve=AccuracyCurve(tuple((int(s), float(a)) for s, a in data["curve"])),
        wade=data["wade"], max_accuracy=data["max_accuracy"],
        wall_clock=data["wall_clock"], failed=data["failed"], error=data["error"],
    )


def save_records(records, path):
    """Line-delimited self-describing records."""
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record_to_dict(record)) + "\n")


def load_records(path) -> list[RunRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(record_from_dict(json.loads(line)))
    return records


def export(records, out_dir):
    """Write records.jsonl plus one plottable curve CSV per record."""
    from pathlib import Path

    if not records:
        raise ConfigError("no records to export")
    out = Path(out_dir)
    curves = out / "curves"
    curves.mkdir(parents=True, exist_ok=True)
    save_records(records, out / "records.jsonl")
    for record in records:
        name = f"task{record.task_id}_{record.model}_seed{record.data_seed}.csv"
        with open(curves / name, "w", encoding="utf-8") as fh:
            fh.write(metric.curve_to_csv(record.curve))
    return out / "records.jsonl"
