"""Weighted Average Data Efficiency (WADE) and time-to-threshold.

An accuracy curve is an ordered list of (training step, test accuracy)
points.  ``time_to_threshold`` finds the first recorded step at which the
curve reaches a target accuracy, and ``wade`` aggregates the inverse of
those times over a set of accuracy checkpoints into a single score in
[0, 1]: 1 means perfect accuracy was already recorded at step 1, 0 means
the lowest checkpoint was never reached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import FormatError

#: Checkpoints used when none are given: 0.1, 0.2, ..., 1.0.
DEFAULT_CHECKPOINTS: tuple[float, ...] = tuple((i + 1) / 10 for i in range(10))


@dataclass(frozen=True)
class AccuracyCurve:
    """Ordered (step, accuracy) pairs with strictly increasing steps >= 1."""

    points: tuple[tuple[int, float], ...]

    def __post_init__(self):
        prev = 0
        for step, acc in self.points:
            if step <= prev:
                raise FormatError(f"steps must be strictly increasing and >= 1, got {step}")
            if not 0.0 <= acc <= 1.0:
                raise FormatError(f"accuracy {acc} outside [0, 1]")
            prev = step

    @property
    def steps(self) -> tuple[int, ...]:
        return tuple(p[0] for p in self.points)

    @property
    def accuracies(self) -> tuple[float, ...]:
        return tuple(p[1] for p in self.points)

    def max_accuracy(self) -> float:
        return max((a for _, a in self.points), default=0.0)


def curve(points) -> AccuracyCurve:
    """Build an AccuracyCurve from any iterable of (step, accuracy) pairs."""
    return AccuracyCurve(tuple((int(s), float(a)) for s, a in points))


@dataclass(frozen=True)
class CheckpointSet:
    """Strictly increasing accuracy targets in (0, 1]."""

    thresholds: tuple[float, ...] = field(default=DEFAULT_CHECKPOINTS)

    def __post_init__(self):
        if not self.thresholds:
            raise FormatError("checkpoint set must be nonempty")
        prev = 0.0
        for a in self.thresholds:
            if not prev < a <= 1.0:
                raise FormatError(f"checkpoints must be strictly increasing in (0, 1], got {a}")
            prev = a


def time_to_threshold(alpha: float, curve: AccuracyCurve) -> float:
    """First recorded step whose accuracy reaches ``alpha``; inf if never.

    The returned value is the recorded step number, so sparse evaluation
    cadences coarsen the answer but never bias it early.  Always >= 1.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {alpha}")
    for step, acc in curve.points:
        if acc >= alpha:
            return float(step)
    return math.inf


def wade(curve: AccuracyCurve, checkpoints: CheckpointSet | None = None) -> float:
    """Checkpoint-weighted average of inverse times-to-threshold, with 1/inf = 0."""
    cps = checkpoints.thresholds if checkpoints is not None else DEFAULT_CHECKPOINTS
    total = 0.0
    for alpha in cps:
        t = time_to_threshold(alpha, curve)
        if math.isfinite(t):
            total += alpha / t
    return total / sum(cps)


def parse_curve_csv(text: str) -> AccuracyCurve:
    """Parse ``step,accuracy`` CSV text (header required) into a curve."""
    lines = text.splitlines()
    if not lines or lines[0].strip().lower() != "step,accuracy":
        raise FormatError("line 1: expected header 'step,accuracy'")
    points = []
    prev_step = 0
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'step,accuracy', got {line!r}")
        try:
            step = int(parts[0])
            acc = float(parts[1])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
        if step <= prev_step:
            raise FormatError(f"line {lineno}: steps must be strictly increasing and >= 1")
        if not 0.0 <= acc <= 1.0:
            raise FormatError(f"line {lineno}: accuracy {acc} outside [0, 1]")
        points.append((step, acc))
        prev_step = step
    return AccuracyCurve(tuple(points))


def curve_to_csv(curve: AccuracyCurve) -> str:
    """Render a curve as ``step,accuracy`` CSV text (inverse of parse_curve_csv)."""
    rows = ["step,accuracy"]
    rows.extend(f"{step},{acc!r}" for step, acc in curve.points)
    return "\n".join(rows) + "\n"


def wade_from_file(path, checkpoints: CheckpointSet | None = None) -> float:
    """WADE of the accuracy curve stored in a ``step,accuracy`` CSV file."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return wade(parse_curve_csv(text), checkpoints)


def evaluation_steps(total: int, unit_until: int = 10, dense_until: int = 100,
                     dense_every: int = 10, sparse_every: int = 50) -> list[int]:
    """Cadence for test evaluations: every step up to ``unit_until`` (the 1/T
    weighting of WADE is dominated by the first few steps), every
    ``dense_every`` up to ``dense_until``, then every ``sparse_every``,
    always including the final step."""
    if total < 1:
        raise ValueError("total must be >= 1")
    steps = list(range(1, min(unit_until, total) + 1))
    steps += list(range(unit_until + dense_every, min(dense_until, total) + 1, dense_every))
    s = dense_until + sparse_every
    while s <= total:
        steps.append(s)
        s += sparse_every
    if steps[-1] != total:
        steps.append(total)
    return steps
