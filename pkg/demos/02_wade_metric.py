#!/usr/bin/env python3
"""The WADE metric step by step.

Builds a small accuracy curve, shows the time-to-threshold for each
checkpoint, and assembles the weighted average of inverse times.  Also
demonstrates scoring a curve stored as CSV.
"""

import math
import tempfile
from pathlib import Path

from wadebench import metric
from wadebench.metric import CheckpointSet, curve


def main():
    c = curve([(1, 0.2), (2, 0.5), (3, 0.5), (4, 0.9)])
    checkpoints = CheckpointSet()

    print("accuracy curve:", list(c.points))
    print("\nper-checkpoint time to threshold:")
    total = 0.0
    for alpha in checkpoints.thresholds:
        t = metric.time_to_threshold(alpha, c)
        contribution = 0.0 if math.isinf(t) else alpha / t
        total += contribution
        print(f"  alpha={alpha:.1f}  T={t!s:>4}  alpha/T={contribution:.3f}")
    print(f"\nsum alpha/T = {total:.2f}, sum alpha = {sum(checkpoints.thresholds)}")
    print(f"WADE = {metric.wade(c, checkpoints)!r}  (exactly 0.3)")

    print("\nextremes:")
    print("  perfect accuracy at step 1 ->", metric.wade(curve([(1, 1.0)])))
    print("  never above zero           ->", metric.wade(curve([(1, 0.0), (9, 0.0)])))

    print("\nslower is worse: dilating every step by 10x gives",
          metric.wade(curve((10 * s, a) for s, a in c.points)))

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "curve.csv"
        path.write_text(metric.curve_to_csv(c))
        print("\nscoring the same curve from CSV:", metric.wade_from_file(path))


if __name__ == "__main__":
    main()
