"""Command-line entry point: gen, run, wade, report, and serve subcommands.

Plans are flat key=value text files; command-line flags override plan
values.  All failures print an ``error[kind]: message`` line on stderr and
exit nonzero.
"""

from __future__ import annotations

import argparse
import sys

from . import harness, metric, tasks
from .errors import ConfigError, FormatError


def _parse_plan_file(path) -> dict:
    values: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise FormatError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, _, value = line.partition("=")
                values[key.strip()] = value.strip()
    except OSError as exc:
        raise IOError(f"cannot read plan file {path}: {exc}") from exc
    return values


def _model_specs(names: str, rule: int | None = None) -> tuple[harness.ModelSpec, ...]:
    specs = []
    for name in names.split(","):
        name = name.strip()
        if not name:
            continue
        if name.startswith("reca-"):
            specs.append(harness.ModelSpec(name, "reca", {"rule": int(name[5:])}))
        elif name == "reca":
            if rule is None:
                raise ConfigError("model 'reca' needs --rule (or use reca-<rule>)")
            specs.append(harness.ModelSpec(f"reca-{rule}", "reca", {"rule": rule}))
        elif name in harness.MODEL_KINDS:
            specs.append(harness.ModelSpec(name, name))
        else:
            raise ConfigError(f"unknown model {name!r} (use esn, rnn, lstm, or reca-<rule>)")
    if not specs:
        raise ConfigError("no models given")
    return tuple(specs)


def _cmd_gen(args) -> int:
    spec = tasks.TaskSpec(args.task)
    dataset = tasks.generate(spec, args.seed, args.count)
    tasks.save_dataset(dataset, args.out)
    print(f"wrote {args.count} task-{args.task} samples to {args.out}")
    return 0


def _cmd_run(args) -> int:
    values = _parse_plan_file(args.plan) if args.plan else {}
    task_ids = args.task if args.task else [
        int(t) for t in values.get("tasks", "1").split(",")]
    models = _model_specs(args.model or values.get("models", "esn"), args.rule)
    cadence = args.cadence or values.get("cadence")
    plan = harness.ExperimentPlan(
        tasks=tuple(task_ids),
        models=models,
        sequences=args.count or int(values.get("sequences", 1200)),
        runs=args.runs or int(values.get("runs", 10)),
        base_seed=args.seed if args.seed is not None else int(values.get("base_seed", 0)),
        cadence=tuple(int(v) for v in cadence.split(",")) if cadence
        else harness.ExperimentPlan.__dataclass_fields__["cadence"].default,
    )
    total = len(plan.tasks) * plan.runs * len(plan.models)
    done = [0]

    def progress(record):
        done[0] += 1
        status = "FAILED " if record.failed else ""
        print(f"[{done[0]}/{total}] {status}task {record.task_id} {record.model} "
              f"seed {record.data_seed}: wade={record.wade:.4f} "
              f"max_acc={record.max_accuracy:.4f} ({record.wall_clock:.1f}s)")

    records = harness.run_experiment(plan, progress=progress)
    path = harness.export(records, args.out)
    cells = harness.aggregate(records)
    with open(path.parent / "aggregate.csv", "w", encoding="utf-8") as fh:
        fh.write(harness.aggregate_csv(cells))
    print(f"records written to {path}")
    print(harness.format_table(cells))
    return 0


def _cmd_wade(args) -> int:
    checkpoints = None
    if args.checkpoints:
        checkpoints = metric.CheckpointSet(
            tuple(float(a) for a in args.checkpoints.split(",")))
    print(metric.wade_from_file(args.curve, checkpoints))
    return 0


def _cmd_report(args) -> int:
    records = harness.load_records(args.records)
    print(harness.format_table(harness.aggregate(records)))
    return 0


def _cmd_serve(args) -> int:
    from . import evalserve

    print(f"human-eval service on http://127.0.0.1:{args.port}")
    evalserve.serve(port=args.port, seed=args.seed, static_dir=args.static)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wadebench",
        description="Learning-efficiency benchmark: task generation, "
                    "training runs, WADE scoring, and the human-eval service.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a task dataset file")
    p.add_argument("--task", type=int, required=True, help="task id 1..10")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1200)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("run", help="execute an experiment plan")
    p.add_argument("--plan", help="flat key=value plan file")
    p.add_argument("--task", type=int, action="append",
                   help="task id (repeatable; overrides plan)")
    p.add_argument("--model", help="comma list: esn, rnn, lstm, reca-<rule>")
    p.add_argument("--rule", type=int, help="CA rule for a bare 'reca' model")
    p.add_argument("--runs", type=int, help="seeds per (task, model)")
    p.add_argument("--count", type=int, help="sequences per dataset")
    p.add_argument("--seed", type=int, help="base seed")
    p.add_argument("--cadence", help="unit_until,dense_until,dense_every,sparse_every")
    p.add_argument("--out", default="results", help="output directory")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("wade", help="score an accuracy-curve CSV")
    p.add_argument("--curve", required=True, help="CSV with step,accuracy header")
    p.add_argument("--checkpoints", help="comma list of thresholds (default 0.1..1.0)")
    p.set_defaults(func=_cmd_wade)

    p = sub.add_parser("report", help="print the aggregate table for saved records")
    p.add_argument("--records", required=True, help="records.jsonl from a run")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("serve", help="start the human-eval HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--static", default=None, help="directory with the browser UI")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error[config]: {exc}", file=sys.stderr)
        return 2
    except FormatError as exc:
        print(f"error[format]: {exc}", file=sys.stderr)
        return 3
    except (IOError, OSError) as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
