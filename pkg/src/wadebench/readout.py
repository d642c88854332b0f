"""Linear softmax decoder trained online with SGD and weight decay.

The decoder maps a reservoir feature vector to token probabilities.  It is
updated one masked position at a time (batch size 1) by the gradient of the
cross-entropy loss plus L2 weight decay, and scored by the fraction of
masked positions whose argmax prediction matches the true token.  The
feature used to predict position t is the reservoir state after position
t - 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, UndefinedAccuracyError, VocabularyError


@dataclass(frozen=True)
class TrainEvent:
    step: int
    loss: float


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=-1, keepdims=True)


class Readout:
    """Zero-initialized linear map (feature_dim x vocab_size) plus softmax."""

    def __init__(self, feature_dim: int, vocab_size: int,
                 learning_rate: float = 0.001, weight_decay: float = 0.001):
        self.weights = np.zeros((feature_dim, vocab_size))
        self.learning_rate = learning_rate
        self.weight_decay = weight_decay
        self.step = 0

    @property
    def feature_dim(self) -> int:
        return self.weights.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.weights.shape[1]

    def predict(self, feature) -> np.ndarray:
        feature = np.asarray(feature, dtype=float)
        if feature.shape != (self.feature_dim,):
            raise DimensionError(
                f"feature has shape {feature.shape}, expected ({self.feature_dim},)")
        return softmax(feature @ self.weights)

    def sgd_update(self, feature, target: int) -> TrainEvent:
        """One cross-entropy SGD step; the recorded loss is pre-update."""
        if not 0 <= target < self.vocab_size:
            raise VocabularyError(f"target {target} outside vocabulary")
        probs = self.predict(feature)
        loss = -np.log(max(probs[target], 1e-300))
        grad_logits = probs.copy()
        grad_logits[target] -= 1.0
        grad = np.outer(np.asarray(feature, dtype=float), grad_logits)
        self.weights -= self.learning_rate * (grad + self.weight_decay * self.weights)
        self.step += 1
        return TrainEvent(self.step, float(loss))

    def train_sequence(self, features: np.ndarray, tokens, mask) -> list[TrainEvent]:
        """SGD updates at every masked position of one sequence, in order."""
        events = []
        for t in np.flatnonzero(np.asarray(mask, dtype=bool)):
            events.append(self.sgd_update(features[t - 1], int(tokens[t])))
        return events

    def masked_accuracy(self, features: np.ndarray, tokens, mask) -> float:
        """Fraction of masked positions predicted correctly from the prior state."""
        tokens = np.asarray(tokens)
        mask = np.asarray(mask, dtype=bool)
        if not len(features) == len(tokens) == len(mask):
            raise DimensionError("features, tokens, and mask lengths differ")
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            raise UndefinedAccuracyError("no masked positions to score")
        logits = features[idx - 1] @ self.weights
        return float(np.mean(np.argmax(logits, axis=1) == tokens[idx]))

    def masked_hits(self, features: np.ndarray, tokens, mask) -> tuple[int, int]:
        """(correct, total) over masked positions, for pooling across sequences."""
        tokens = np.asarray(tokens)
        idx = np.flatnonzero(np.asarray(mask, dtype=bool))
        if idx.size == 0:
            return 0, 0
        logits = features[idx - 1] @ self.weights
        return int(np.sum(np.argmax(logits, axis=1) == tokens[idx])), int(idx.size)

    def save_checkpoint(self, path):
        """Dense binary dump (.npz) of the weight matrix plus hyperparameters;
        array shapes are self-describing in the header."""
        np.savez(path, weights=self.weights,
                 learning_rate=self.learning_rate,
                 weight_decay=self.weight_decay, step=self.step)

    @classmethod
    def load_checkpoint(cls, path) -> "Readout":
        data = np.load(path)
        model = cls(*data["weights"].shape,
                    learning_rate=float(data["learning_rate"]),
                    weight_decay=float(data["weight_decay"]))
        model.weights = data["weights"]
        model.step = int(data["step"])
        return model
