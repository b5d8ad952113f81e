"""The n-agent mechanism phase by phase, with accurate and garbage predictions."""

from plantsteal import Instance, ValuesPrediction
from plantsteal.core import kth_value
from plantsteal.n_agent import run_n_agent_mechanism


def run(inst, predictions, label):
    report, trace = run_n_agent_mechanism(inst, predictions)
    print(f"--- {label} ---")
    if trace.large_phase:
        print("  large-item phase:", ", ".join(
            f"agent {a} takes item {j}" for a, j in trace.large_phase))
    print("  tentative bundles:", {a: items for a, items in trace.tentative.items()})
    print("  final bundles:    ", {a: items for a, items in trace.final.items()})
    print("  values:", [str(v) for v in report.values],
          " shares:", [str(v) for v in report.mu])
    k_rel = report.extra["k_relaxed"]
    ranks_ok = all(
        max((inst.value(i, j) for j in report.bundles[i]), default=0)
        >= kth_value(inst.valuations[i], k_rel)
        for i in range(inst.n_agents))
    print(f"  every agent holds a top-{k_rel} item: {ranks_ok}\n")


def main():
    inst = Instance([[9, 8, 7, 6, 5, 4, 3, 2, 1]] * 3)
    accurate = tuple(ValuesPrediction(row) for row in inst.valuations)
    run(inst, accurate, "three agents, shared values, accurate predictions")

    garbage = tuple(ValuesPrediction(list(reversed(row))) for row in inst.valuations)
    run(inst, garbage, "same instance, reversed (adversarial) predictions")

    rows = [[5, 5, 4, 1, 1, 1, 1, 1],
            [1, 1, 1, 5, 5, 4, 1, 1],
            [1, 1, 1, 1, 1, 1, 6, 6]]
    inst2 = Instance(rows)
    run(inst2, tuple(ValuesPrediction(r) for r in rows),
        "three agents with disjoint favorites")


if __name__ == "__main__":
    main()
