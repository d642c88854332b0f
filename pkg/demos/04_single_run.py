#!/usr/bin/env python3
"""One complete experiment, by hand.

Generates a task-1 dataset, splits it 80/20, runs the echo-state network
over the training split once while training the softmax readout online,
and prints the test-accuracy curve with its WADE score.  Then does the
same with a fully trained RNN for contrast.
"""

import numpy as np

from wadebench import baseline, harness, metric, tasks
from wadebench.reservoir import EchoStateNetwork, EsnConfig


def main():
    spec = tasks.TaskSpec(1)
    dataset = tasks.split(tasks.generate(spec, seed=4, count=1200), 0.8, seed=4)
    print(f"task 1 dataset: {len(dataset.train_indices)} train / "
          f"{len(dataset.test_indices)} test sequences")

    esn = EchoStateNetwork(EsnConfig(seed=1), dataset.vocabulary.size)
    steps = metric.evaluation_steps(len(dataset.train_indices))
    esn_curve = harness.train_reservoir_readout(esn, dataset, steps)
    print("\nESN readout, single pass (step, test accuracy):")
    print(" ", [(s, round(a, 3)) for s, a in esn_curve.points[:8]], "...")
    print(f"  WADE = {metric.wade(esn_curve):.4f}, "
          f"final accuracy = {esn_curve.points[-1][1]:.4f}")

    hidden = baseline.match_hidden_size(dataset.vocabulary.size)
    rnn = baseline.ElmanRnn(baseline.RnnConfig(hidden=hidden,
                                               vocab_size=dataset.vocabulary.size,
                                               seed=1))
    print(f"\nElman RNN with hidden size {hidden} "
          f"({rnn.parameter_count()} parameters vs readout's "
          f"{1800 * dataset.vocabulary.size}), 10 epochs of Adam:")
    rnn_curve = baseline.train_baseline(rnn, dataset, epochs=10)
    print(" ", [(s, round(a, 3)) for s, a in rnn_curve.points[:8]], "...")
    print(f"  WADE = {metric.wade(rnn_curve):.4f}, "
          f"final accuracy = {rnn_curve.points[-1][1]:.4f}")

    ratio = metric.wade(esn_curve) / max(metric.wade(rnn_curve), 1e-12)
    print(f"\nthe frozen reservoir learns {ratio:.1f}x faster by WADE")


if __name__ == "__main__":
    main()
