#!/usr/bin/env python3
"""A small multi-model benchmark with the experiment harness.

Runs ESN, a rule-110 CA reservoir, and the RNN baseline on tasks 1 and 5
with a handful of seeds, prints the aggregate table, and exports records
plus plottable curve CSVs.  Data seeds are shared across models run by
run, so every model trains on identical datasets.

The full-scale protocol is runs=100 with a 256-rule sweep; this
desk version finishes in a few minutes.
"""

import tempfile
from pathlib import Path

from wadebench import harness


def main():
    plan = harness.ExperimentPlan(
        tasks=(1, 5),
        models=(
            harness.ModelSpec("esn", "esn"),
            harness.ModelSpec("reca-110", "reca", {"rule": 110}),
            harness.ModelSpec("rnn", "rnn"),
        ),
        runs=3,
    )

    def progress(record):
        print(f"  task {record.task_id} {record.model:<9} "
              f"seed {record.data_seed}: wade={record.wade:.4f} "
              f"max_acc={record.max_accuracy:.4f} ({record.wall_clock:.1f}s)")

    print("running", len(plan.tasks) * plan.runs * len(plan.models), "experiments...")
    records = harness.run_experiment(plan, progress=progress)

    print("\n" + harness.format_table(harness.aggregate(records)))

    out = Path(tempfile.mkdtemp(prefix="wadebench-"))
    harness.export(records, out)
    print(f"\nrecords and curve CSVs exported to {out}")
    print("score any curve again with: wadebench wade --curve <csv>")


if __name__ == "__main__":
    main()
