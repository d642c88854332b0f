"""Frozen-dynamics feature generators: echo-state network and CA reservoir.

Both models turn a token sequence into a stream of fixed-size feature
vectors without any trained weights.  The echo-state network iterates a
sparse random tanh recurrence; the cellular-automaton reservoir XORs a
random binary projection of each token into a circular binary grid and
concatenates several automaton updates per token into one feature vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import ConfigError, DimensionError, VocabularyError


@dataclass(frozen=True)
class EsnConfig:
    state_size: int = 1800
    nnz_per_row: int = 10
    leak: float = 1.0
    seed: int = 0
    spectral_radius: float | None = None  # optional rescale of the recurrent weights

    def __post_init__(self):
        if self.state_size < 1:
            raise ConfigError("state_size must be >= 1")
        if not 1 <= self.nnz_per_row <= self.state_size:
            raise ConfigError("nnz_per_row must be in 1..state_size")
        if not 0.0 <= self.leak <= 1.0:
            raise ConfigError("leak must be in [0, 1]")

    def as_dict(self) -> dict:
        return {
            "kind": "esn", "state_size": self.state_size, "nnz_per_row": self.nnz_per_row,
            "leak": self.leak, "seed": self.seed, "spectral_radius": self.spectral_radius,
        }


def esn_weights(config: EsnConfig, vocab_size: int):
    """Sample the frozen weights: sparse recurrent W and dense input W_in.

    W has exactly ``nnz_per_row`` nonzeros per row at seeded-random columns,
    all values uniform in [-1, 1]; W_in is dense uniform in [-1, 1].
    """
    if vocab_size < 1:
        raise ConfigError("vocab_size must be >= 1")
    rng = np.random.default_rng(config.seed)
    k = config.state_size
    cols = np.empty((k, config.nnz_per_row), dtype=np.int64)
    for row in range(k):
        cols[row] = rng.choice(k, size=config.nnz_per_row, replace=False)
    values = rng.uniform(-1.0, 1.0, size=k * config.nnz_per_row)
    rows = np.repeat(np.arange(k), config.nnz_per_row)
    w = sparse.csr_matrix((values, (rows, cols.ravel())), shape=(k, k))
    w_in = rng.uniform(-1.0, 1.0, size=(k, vocab_size))
    if config.spectral_radius is not None:
        radius = np.abs(sparse.linalg.eigs(w, k=1, return_eigenvectors=False,
                                           maxiter=10000)[0])
        w = w * (config.spectral_radius / radius)
    return w, w_in


def esn_step(state, x, w, w_in, leak: float = 1.0):
    """One leaky tanh update: r <- (1 - leak) r + leak tanh(W r + W_in x)."""
    state = np.asarray(state, dtype=float)
    x = np.asarray(x, dtype=float)
    if state.shape != (w.shape[0],):
        raise DimensionError(f"state has shape {state.shape}, expected ({w.shape[0]},)")
    if x.shape != (w_in.shape[1],):
        raise DimensionError(f"input has shape {x.shape}, expected ({w_in.shape[1]},)")
    return (1.0 - leak) * state + leak * np.tanh(w @ state + w_in @ x)


class EchoStateNetwork:
    """Frozen sparse recurrence; the feature vector is the state itself."""

    def __init__(self, config: EsnConfig, vocab_size: int):
        self.config = config
        self.vocab_size = vocab_size
        self.w, self.w_in = esn_weights(config, vocab_size)
        self.feature_dim = config.state_size

    def initial_state(self) -> np.ndarray:
        return np.zeros(self.config.state_size)

    def step(self, state, token_id: int) -> np.ndarray:
        if not 0 <= token_id < self.vocab_size:
            raise VocabularyError(f"token id {token_id} outside vocabulary")
        leak = self.config.leak
        pre = self.w @ state + self.w_in[:, token_id]
        return (1.0 - leak) * state + leak * np.tanh(pre)

    def run_sequence(self, tokens) -> np.ndarray:
        """Feature per position: the state after consuming tokens[0..t]."""
        state = self.initial_state()
        features = np.empty((len(tokens), self.feature_dim))
        for t, token in enumerate(tokens):
            state = self.step(state, int(token))
            features[t] = state
        return features


# ---------------------------------------------------------------------------
# Elementary cellular automaton reservoir
# ---------------------------------------------------------------------------

def ca_rule_table(rule: int) -> np.ndarray:
    """Outputs for neighborhood values 0..7: bit k of the rule number."""
    if not 0 <= rule <= 255:
        raise ConfigError(f"rule must be in 0..255, got {rule}")
    return (rule >> np.arange(8)) & 1


def ca_step(state, rule: int) -> np.ndarray:
    """One synchronous update of the circular grid under the given rule."""
    state = np.asarray(state, dtype=np.uint8)
    if state.ndim != 1 or state.size < 3:
        raise DimensionError("grid must be one-dimensional with at least 3 cells")
    table = ca_rule_table(rule).astype(np.uint8)
    neighborhoods = 4 * np.roll(state, 1) + 2 * state + np.roll(state, -1)
    return table[neighborhoods]


def inject(p, state) -> np.ndarray:
    """Combine an input projection with the grid by elementwise XOR."""
    p = np.asarray(p, dtype=np.uint8)
    state = np.asarray(state, dtype=np.uint8)
    if p.shape != state.shape:
        raise DimensionError(f"projection shape {p.shape} != grid shape {state.shape}")
    return np.bitwise_xor(p, state)


@dataclass(frozen=True)
class CaConfig:
    rule: int
    grid_size: int = 450
    recurrence: int = 4      # automaton updates (and concatenated states) per token
    cells_per_token: int = 4
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.rule <= 255:
            raise ConfigError(f"rule must be in 0..255, got {self.rule}")
        if self.grid_size < 3:
            raise ConfigError("grid_size must be >= 3")
        if self.recurrence < 1:
            raise ConfigError("recurrence must be >= 1")
        if not 1 <= self.cells_per_token <= self.grid_size:
            raise ConfigError("cells_per_token must be in 1..grid_size")

    @property
    def feature_dim(self) -> int:
        return self.recurrence * self.grid_size

    def as_dict(self) -> dict:
        return {
            "kind": "reca", "rule": self.rule, "grid_size": self.grid_size,
            "recurrence": self.recurrence, "cells_per_token": self.cells_per_token,
            "seed": self.seed,
        }


def injection_map(config: CaConfig, vocab_size: int) -> np.ndarray:
    """Binary (vocab_size, grid_size) matrix; each row flips a distinct cell set."""
    if vocab_size < 1:
        raise ConfigError("vocab_size must be >= 1")
    rng = np.random.default_rng(config.seed)
    rows: list[tuple[int, ...]] = []
    seen = set()
    while len(rows) < vocab_size:
        cells = tuple(sorted(rng.choice(config.grid_size, size=config.cells_per_token,
                                        replace=False).tolist()))
        if cells in seen:
            continue
        seen.add(cells)
        rows.append(cells)
    mat = np.zeros((vocab_size, config.grid_size), dtype=np.uint8)
    for i, cells in enumerate(rows):
        mat[i, list(cells)] = 1
    return mat


class CellularAutomatonReservoir:
    """XOR-injected elementary CA; features are ``recurrence`` stacked grids."""

    def __init__(self, config: CaConfig, vocab_size: int):
        self.config = config
        self.vocab_size = vocab_size
        self.projection = injection_map(config, vocab_size)
        self.table = ca_rule_table(config.rule).astype(np.uint8)
        self.feature_dim = config.feature_dim

    def initial_state(self) -> np.ndarray:
        return np.zeros(self.config.grid_size, dtype=np.uint8)

    def step(self, state, token_id: int):
        """Returns (new grid, feature vector of the concatenated updates)."""
        if not 0 <= token_id < self.vocab_size:
            raise VocabularyError(f"token id {token_id} outside vocabulary")
        grid = inject(self.projection[token_id], state)
        parts = []
        for _ in range(self.config.recurrence):
            neighborhoods = 4 * np.roll(grid, 1) + 2 * grid + np.roll(grid, -1)
            grid = self.table[neighborhoods]
            parts.append(grid)
        return grid, np.concatenate(parts).astype(float)

    def run_sequence(self, tokens) -> np.ndarray:
        state = self.initial_state()
        features = np.empty((len(tokens), self.feature_dim))
        for t, token in enumerate(tokens):
            state, features[t] = self.step(state, int(token))
        return features
