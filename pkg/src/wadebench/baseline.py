"""Fully trained recurrent baselines: Elman RNN and LSTM with exact BPTT.

Gradients are derived by hand for exactly these two architectures (no
autograd).  The loss is the summed cross-entropy over masked positions
only.  Hidden sizes are chosen so the trainable parameter count matches a
reservoir readout of the same vocabulary, and training uses Adam with
batch size 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionError
from .metric import AccuracyCurve, evaluation_steps


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss."""


def match_hidden_size(vocab_size: int, target_params: int | None = None) -> int:
    """Hidden size whose RNN parameter count h^2 + 2hL is closest to the target.

    The default target is 1800 * vocab_size, the readout size of the
    reservoir models.  Rounds the positive root of h^2 + 2hL = target.
    """
    if vocab_size < 1:
        raise ConfigError("vocab_size must be >= 1")
    if target_params is None:
        target_params = 1800 * vocab_size
    h = round(-vocab_size + math.sqrt(vocab_size ** 2 + target_params))
    if h < 1:
        raise ConfigError(f"target of {target_params} parameters is degenerate")
    return h


def lstm_hidden_size(vocab_size: int, target_params: int | None = None) -> int:
    """Hidden size solving 4(h^2 + hL) + hL = target for the LSTM."""
    if vocab_size < 1:
        raise ConfigError("vocab_size must be >= 1")
    if target_params is None:
        target_params = 1800 * vocab_size
    h = round((-5 * vocab_size + math.sqrt(25 * vocab_size ** 2 + 16 * target_params)) / 8)
    if h < 1:
        raise ConfigError(f"target of {target_params} parameters is degenerate")
    return h


def _uniform_init(rng, shape, hidden: int) -> np.ndarray:
    bound = math.sqrt(1.0 / hidden)
    return rng.uniform(-bound, bound, size=shape)


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def _softmax(logits):
    shifted = logits - np.max(logits)
    exp = np.exp(shifted)
    return exp / exp.sum()


@dataclass(frozen=True)
class RnnConfig:
    hidden: int
    vocab_size: int
    seed: int = 0

    def __post_init__(self):
        if self.hidden < 1 or self.vocab_size < 1:
            raise ConfigError("hidden and vocab_size must be >= 1")

    def as_dict(self) -> dict:
        return {"kind": "rnn", "hidden": self.hidden,
                "vocab_size": self.vocab_size, "seed": self.seed}


class ElmanRnn:
    """h_t = tanh(W_ih x_t + W_hh h_{t-1}); logits_t = W_out h_t; no biases."""

    def __init__(self, config: RnnConfig):
        self.config = config
        rng = np.random.default_rng(config.seed)
        h, L = config.hidden, config.vocab_size
        self.params = {
            "w_ih": _uniform_init(rng, (h, L), h),
            "w_hh": _uniform_init(rng, (h, h), h),
            "w_out": _uniform_init(rng, (L, h), h),
        }

    @property
    def hidden(self) -> int:
        return self.config.hidden

    def parameter_count(self) -> int:
        return sum(w.size for w in self.params.values())

    def forward(self, tokens):
        """Hidden states (T, h) and logits (T, L) for one token sequence."""
        w_ih, w_hh, w_out = self.params["w_ih"], self.params["w_hh"], self.params["w_out"]
        h = np.zeros(self.config.hidden)
        states = np.empty((len(tokens), self.config.hidden))
        for t, token in enumerate(tokens):
            token = int(token)
            if not 0 <= token < self.config.vocab_size:
                raise DimensionError(f"token id {token} outside vocabulary")
            h = np.tanh(w_ih[:, token] + w_hh @ h)
            states[t] = h
        logits = states @ w_out.T
        return states, logits

    def gradients(self, tokens, mask):
        """Exact BPTT gradients of the summed masked cross-entropy.

        A masked position t is predicted from the state after t - 1, so its
        loss reads the logits at index t - 1 (position 0 is never masked).
        """
        mask = np.asarray(mask, dtype=bool)
        if not mask.any():
            raise ConfigError("gradients need at least one masked position")
        w_hh, w_out = self.params["w_hh"], self.params["w_out"]
        states, logits = self.forward(tokens)
        grads = {name: np.zeros_like(w) for name, w in self.params.items()}
        loss = 0.0
        d_next = np.zeros(self.config.hidden)   # da_{t+1} already through tanh'
        for t in range(len(tokens) - 1, -1, -1):
            dh = w_hh.T @ d_next
            if t + 1 < len(tokens) and mask[t + 1]:
                target = int(tokens[t + 1])
                probs = _softmax(logits[t])
                loss -= np.log(max(probs[target], 1e-300))
                dlogits = probs
                dlogits[target] -= 1.0
                grads["w_out"] += np.outer(dlogits, states[t])
                dh += w_out.T @ dlogits
            da = dh * (1.0 - states[t] ** 2)
            h_prev = states[t - 1] if t > 0 else np.zeros(self.config.hidden)
            grads["w_hh"] += np.outer(da, h_prev)
            grads["w_ih"][:, int(tokens[t])] += da
            d_next = da
        return grads, float(loss)

    def states_batch(self, token_matrix: np.ndarray) -> np.ndarray:
        """Hidden states (B, T, h) for padded token rows; padding is ignored
        by callers, which only read positions inside each true length."""
        w_ih, w_hh = self.params["w_ih"], self.params["w_hh"]
        batch, length = token_matrix.shape
        h = np.zeros((batch, self.config.hidden))
        states = np.empty((batch, length, self.config.hidden))
        for t in range(length):
            h = np.tanh(w_ih[:, token_matrix[:, t]].T + h @ w_hh.T)
            states[:, t] = h
        return states

    def output_weights(self) -> np.ndarray:
        return self.params["w_out"]


@dataclass(frozen=True)
class LstmConfig:
    hidden: int
    vocab_size: int
    seed: int = 0

    def __post_init__(self):
        if self.hidden < 1 or self.vocab_size < 1:
            raise ConfigError("hidden and vocab_size must be >= 1")

    def as_dict(self) -> dict:
        return {"kind": "lstm", "hidden": self.hidden,
                "vocab_size": self.vocab_size, "seed": self.seed}


_GATES = ("i", "f", "g", "o")


class Lstm:
    """Standard input/forget/cell/output gates, no biases, linear output map."""

    def __init__(self, config: LstmConfig):
        self.config = config
        rng = np.random.default_rng(config.seed)
        h, L = config.hidden, config.vocab_size
        self.params = {}
        for gate in _GATES:
            self.params[f"w_x{gate}"] = _uniform_init(rng, (h, L), h)
            self.params[f"w_h{gate}"] = _uniform_init(rng, (h, h), h)
        self.params["w_out"] = _uniform_init(rng, (L, h), h)

    @property
    def hidden(self) -> int:
        return self.config.hidden

    def parameter_count(self) -> int:
        return sum(w.size for w in self.params.values())

    def _gate_pre(self, gate, token, h_prev):
        return self.params[f"w_x{gate}"][:, token] + self.params[f"w_h{gate}"] @ h_prev

    def forward(self, tokens, return_cache=False):
        h = np.zeros(self.config.hidden)
        c = np.zeros(self.config.hidden)
        T = len(tokens)
        states = np.empty((T, self.config.hidden))
        cache = {"i": [], "f": [], "g": [], "o": [], "c": [], "h_prev": [], "c_prev": []}
        for t, token in enumerate(tokens):
            token = int(token)
            if not 0 <= token < self.config.vocab_size:
                raise DimensionError(f"token id {token} outside vocabulary")
            gi = _sigmoid(self._gate_pre("i", token, h))
            gf = _sigmoid(self._gate_pre("f", token, h))
            gg = np.tanh(self._gate_pre("g", token, h))
            go = _sigmoid(self._gate_pre("o", token, h))
            if return_cache:
                cache["h_prev"].append(h)
                cache["c_prev"].append(c)
            c = gf * c + gi * gg
            h = go * np.tanh(c)
            states[t] = h
            if return_cache:
                for name, val in zip(_GATES, (gi, gf, gg, go)):
                    cache[name].append(val)
                cache["c"].append(c)
        logits = states @ self.params["w_out"].T
        if return_cache:
            return states, logits, cache
        return states, logits

    def gradients(self, tokens, mask):
        """Exact BPTT gradients of the summed masked cross-entropy.

        Alignment matches the readout convention: masked position t is
        predicted from the state after t - 1 (logits index t - 1).
        """
        mask = np.asarray(mask, dtype=bool)
        if not mask.any():
            raise ConfigError("gradients need at least one masked position")
        states, logits, cache = self.forward(tokens, return_cache=True)
        grads = {name: np.zeros_like(w) for name, w in self.params.items()}
        w_out = self.params["w_out"]
        loss = 0.0
        dh_next = np.zeros(self.config.hidden)
        dc_next = np.zeros(self.config.hidden)
        for t in range(len(tokens) - 1, -1, -1):
            dh = dh_next.copy()
            if t + 1 < len(tokens) and mask[t + 1]:
                target = int(tokens[t + 1])
                probs = _softmax(logits[t])
                loss -= np.log(max(probs[target], 1e-300))
                dlogits = probs
                dlogits[target] -= 1.0
                grads["w_out"] += np.outer(dlogits, states[t])
                dh += w_out.T @ dlogits
            gi, gf, gg, go = (cache[name][t] for name in _GATES)
            c, c_prev, h_prev = cache["c"][t], cache["c_prev"][t], cache["h_prev"][t]
            tanh_c = np.tanh(c)
            dc = dh * go * (1.0 - tanh_c ** 2) + dc_next
            dz = {
                "o": dh * tanh_c * go * (1.0 - go),
                "i": dc * gg * gi * (1.0 - gi),
                "f": dc * c_prev * gf * (1.0 - gf),
                "g": dc * gi * (1.0 - gg ** 2),
            }
            dh_next = np.zeros(self.config.hidden)
            token = int(tokens[t])
            for gate in _GATES:
                grads[f"w_x{gate}"][:, token] += dz[gate]
                grads[f"w_h{gate}"] += np.outer(dz[gate], h_prev)
                dh_next += self.params[f"w_h{gate}"].T @ dz[gate]
            dc_next = dc * gf
        return grads, float(loss)

    def states_batch(self, token_matrix: np.ndarray) -> np.ndarray:
        batch, length = token_matrix.shape
        h = np.zeros((batch, self.config.hidden))
        c = np.zeros((batch, self.config.hidden))
        states = np.empty((batch, length, self.config.hidden))
        p = self.params
        for t in range(length):
            tok = token_matrix[:, t]
            gi = _sigmoid(p["w_xi"][:, tok].T + h @ p["w_hi"].T)
            gf = _sigmoid(p["w_xf"][:, tok].T + h @ p["w_hf"].T)
            gg = np.tanh(p["w_xg"][:, tok].T + h @ p["w_hg"].T)
            go = _sigmoid(p["w_xo"][:, tok].T + h @ p["w_ho"].T)
            c = gf * c + gi * gg
            h = go * np.tanh(c)
            states[:, t] = h
        return states

    def output_weights(self) -> np.ndarray:
        return self.params["w_out"]


class Adam:
    """Bias-corrected first/second-moment optimizer over a dict of arrays."""

    def __init__(self, learning_rate: float = 0.001, beta1: float = 0.9,
                 beta2: float = 0.999, epsilon: float = 1e-8):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.step_count = 0
        self._m: dict[str, np.ndarray] = {}
        self._v: dict[str, np.ndarray] = {}

    def update(self, params: dict, grads: dict):
        if set(params) != set(grads):
            raise DimensionError("params and grads must share keys")
        self.step_count += 1
        t = self.step_count
        for name, grad in grads.items():
            if name not in self._m:
                self._m[name] = np.zeros_like(grad)
                self._v[name] = np.zeros_like(grad)
            self._m[name] = self.beta1 * self._m[name] + (1 - self.beta1) * grad
            self._v[name] = self.beta2 * self._v[name] + (1 - self.beta2) * grad ** 2
            m_hat = self._m[name] / (1 - self.beta1 ** t)
            v_hat = self._v[name] / (1 - self.beta2 ** t)
            params[name] -= self.learning_rate * m_hat / (np.sqrt(v_hat) + self.epsilon)


def adam_step(adam: Adam, params: dict, grads: dict) -> dict:
    """Functional wrapper: apply one Adam update and return the params."""
    adam.update(params, grads)
    return params


def save_checkpoint(model, path):
    """Dense binary dump (.npz) of all weight matrices plus the config."""
    np.savez(path, **model.params,
             _hidden=model.config.hidden, _vocab_size=model.config.vocab_size,
             _seed=model.config.seed, _kind=model.config.as_dict()["kind"])


def load_checkpoint(path):
    data = np.load(path)
    kind = str(data["_kind"])
    config_cls, model_cls = ((RnnConfig, ElmanRnn) if kind == "rnn"
                             else (LstmConfig, Lstm))
    model = model_cls(config_cls(hidden=int(data["_hidden"]),
                                 vocab_size=int(data["_vocab_size"]),
                                 seed=int(data["_seed"])))
    for name in model.params:
        model.params[name] = data[name]
    return model


# ---------------------------------------------------------------------------
# Training loop and pooled test accuracy
# ---------------------------------------------------------------------------

def masked_test_accuracy(model, samples) -> float:
    """Pooled accuracy over every masked position of the given samples."""
    lengths = [len(s.tokens) for s in samples]
    token_matrix = np.zeros((len(samples), max(lengths)), dtype=np.int64)
    for b, s in enumerate(samples):
        token_matrix[b, : lengths[b]] = s.tokens
    states = model.states_batch(token_matrix)
    w_out = model.output_weights()
    correct = total = 0
    for b, s in enumerate(samples):
        idx = np.flatnonzero(np.asarray(s.mask, dtype=bool))
        logits = states[b, idx - 1] @ w_out.T
        correct += int(np.sum(np.argmax(logits, axis=1) == np.asarray(s.tokens)[idx]))
        total += int(idx.size)
    return correct / total


def train_baseline(model, dataset, epochs: int = 10, learning_rate: float = 0.001,
                   eval_steps=None, shuffle_seed: int = 0) -> AccuracyCurve:
    """Train with Adam, batch size 1, reshuffling each epoch; returns the
    test-accuracy curve sampled at ``eval_steps`` (training sequences seen)."""
    if not dataset.train_indices or not dataset.test_indices:
        raise ConfigError("dataset must be split before training")
    train = [dataset.samples[i] for i in dataset.train_indices]
    test = [dataset.samples[i] for i in dataset.test_indices]
    total = epochs * len(train)
    if eval_steps is None:
        eval_steps = evaluation_steps(total)
    eval_set = set(eval_steps)
    adam = Adam(learning_rate=learning_rate)
    rng = np.random.default_rng(shuffle_seed)
    points = []
    step = 0
    for _ in range(epochs):
        order = rng.permutation(len(train))
        for i in order:
            sample = train[int(i)]
            grads, loss = model.gradients(sample.tokens, sample.mask)
            if not math.isfinite(loss):
                raise DivergenceError(f"non-finite loss at step {step + 1}")
            adam.update(model.params, grads)
            step += 1
            if step in eval_set:
                points.append((step, masked_test_accuracy(model, test)))
    return AccuracyCurve(tuple(points))
