"""Exact vs heuristic maximin share on hand-sized and experiment-sized inputs."""

import time
from fractions import Fraction

from plantsteal import mms_exact, mms_heuristic
from plantsteal.experiments import GenSpec, gen_valuation_rows


def main():
    print("small instance (4,1,1,1,1), two bundles:")
    res = mms_exact([4, 1, 1, 1, 1], 2)
    print(f"  exact share {res.mu}, witness {[sorted(b) for b in res.witness_partition]}")
    res = mms_heuristic([4, 1, 1, 1, 1], 2)
    print(f"  heuristic share {res.mu} (never exceeds the exact value)\n")

    vals = [Fraction(1, 2), Fraction(1, 2), Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)]
    print("two big items and three thirds: exact share", mms_exact(vals, 2).mu)
    print("  -> the witness pairs the halves and pools the thirds\n")

    print("five bundles over twelve random-ish items:")
    values = [7, 5, 5, 4, 4, 3, 3, 2, 2, 2, 1, 1]
    t0 = time.time()
    res = mms_exact(values, 5)
    print(f"  exact share {res.mu} in {time.time() - t0:.3f}s;"
          f" bundle loads {sorted(sum(values[j] for j in b) for b in res.witness_partition)}\n")

    print("experiment scale (m=100, tiered magnitudes): heuristic only")
    row = gen_valuation_rows(GenSpec(m=100, mode="uncorrelated", seed=5))[0]
    t0 = time.time()
    res = mms_heuristic(row, 2)
    half = sum(row) / 2
    print(f"  worst bundle {int(res.mu)} vs half-total {half:.0f}"
          f" (gap {100 * (1 - float(res.mu) / half):.4f}%) in {time.time() - t0:.3f}s")


if __name__ == "__main__":
    main()
