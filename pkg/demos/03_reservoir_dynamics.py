#!/usr/bin/env python3
"""Inside the two frozen reservoirs.

Draws the space-time diagram of an elementary cellular automaton as tokens
are XOR-injected into the grid, and summarizes the echo-state network's
state statistics over a token sequence.
"""

import numpy as np

from wadebench import tasks
from wadebench.reservoir import (CaConfig, CellularAutomatonReservoir,
                                 EchoStateNetwork, EsnConfig)


def ca_spacetime(rule=110, width=64, tokens=(0, 1, 1, 0, 1, 0, 0, 1)):
    print(f"=== rule-{rule} reservoir, grid width {width}, one row per update ===")
    config = CaConfig(rule=rule, grid_size=width, recurrence=4, seed=3)
    reca = CellularAutomatonReservoir(config, vocab_size=2)
    state = reca.initial_state()
    for token in tokens:
        state, feature = reca.step(state, token)
        grids = feature.reshape(config.recurrence, width)
        print(f"token {token}:")
        for row in grids:
            print("   " + "".join("#" if cell else "." for cell in row))


def esn_statistics():
    print("\n=== echo-state network on a periodic sequence ===")
    dataset = tasks.generate(tasks.TaskSpec(1), seed=5, count=1)
    sample = dataset.samples[0]
    esn = EchoStateNetwork(EsnConfig(state_size=400, nnz_per_row=10, seed=5),
                           dataset.vocabulary.size)
    features = esn.run_sequence(sample.tokens)
    print(f"sequence length {len(sample.tokens)}, state size {esn.feature_dim}")
    print(f"state magnitude: mean {np.abs(features).mean():.3f}, "
          f"max {np.abs(features).max():.3f} (tanh keeps it inside (-1, 1))")
    # states at equal phases of the periodic input become similar over time
    period = tasks.minimal_period(dataset.vocabulary.decode(sample.tokens))
    same = np.linalg.norm(features[-1] - features[-1 - period])
    other = np.linalg.norm(features[-1] - features[-2])
    print(f"pattern period {period}: distance to same-phase state {same:.3f}, "
          f"to neighboring state {other:.3f}")


if __name__ == "__main__":
    ca_spacetime()
    esn_statistics()
