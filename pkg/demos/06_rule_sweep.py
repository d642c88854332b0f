#!/usr/bin/env python3
"""Sweeping elementary cellular automaton rules.

Different Wolfram rules make wildly different reservoirs: rule 0 erases
everything, additive rules like 90/150 mix inputs linearly, and complex
rules like 110 support long-lived structures.  This sweep scores a small
rule set on task 5 by mean WADE and reports the winner.
"""

from wadebench import harness


def main():
    plan = harness.ExperimentPlan(
        tasks=(5,),
        models=(harness.ModelSpec("placeholder", "esn"),),  # sweep supplies models
        sequences=600,
        runs=2,
    )
    rules = (0, 30, 90, 110, 150)
    print(f"sweeping rules {rules} on task 5, {plan.runs} seeds each...")
    result = harness.sweep_rules(plan, rules)[0]
    print("\nmean WADE per rule:")
    for rule, mean in sorted(result.mean_wade.items()):
        marker = "  <- best" if rule == result.best_rule else ""
        print(f"  rule {rule:>3}: {mean:.4f}{marker}")
    print(f"\nbest rule for task {result.task_id}: {result.best_rule}")


if __name__ == "__main__":
    main()
