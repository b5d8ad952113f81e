"""Synthetic two-agent benchmark: tiered valuations, noise sweeps, and the
five mechanism variants compared by success rate.

Valuations follow a high / medium / low / filler tier draw per item (tier
probabilities 8/m, 1/4, 1/2, remainder; magnitudes uniform in [1000, 2000],
[400, 800], [100, 200], [1, 2]).  Magnitudes are scaled to integers so all
bookkeeping stays exact, and re-drawn on collision so each agent's
preference order is strict.

A trial at distance d hands every mechanism the same prediction: the agent's
own value vector with values re-assigned along an order exactly d bubble
swaps away from the truth.  Success for a tolerance eps means both agents
keep at least (1 - eps) of their estimated share, where the estimate is the
scalable heuristic's worst bundle (the exact share is out of reach at
m = 100); the half-total is recorded next to it in the raw dump so either
normalization can be studied.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import Instance, as_fraction
from .mms import mms_heuristic
from .predictions import NoiseSpec, OrderingPrediction, perturb_to_distance
from .rng import DEFAULT_SEED, SplitMix64
from .two_agent import cut_and_choose, plant, random_balanced_split, PlantedState

EXPERIMENT_MECHANISMS = (
    "Random",
    "Random-Steal",
    "Partition",
    "Partition-Steal",
    "Partition-Plant-Steal",
)

DEFAULT_DISTANCES = (1, 5, 10, 20, 40, 80, 160, 320, 640, 1280, 2560)
DEFAULT_EPSILONS = ("0.02", "0.05", "0.1")

AGGREGATE_COLUMNS = ("mechanism", "d", "epsilon", "mode", "trials",
                     "success_rate", "mean_min_ratio")
RAW_COLUMNS = ("mode", "d", "profile", "prediction", "mechanism", "epsilon",
               "value1", "value2", "mu1", "mu2", "half1", "half2", "success")


@dataclass(frozen=True)
class GenSpec:
    m: int = 100
    mode: str = "correlated"      # or "uncorrelated"
    seed: int = 0
    scale: int = 10 ** 6          # magnitude quantization (exact integers)


@dataclass(frozen=True)
class SweepSpec:
    distances: tuple = DEFAULT_DISTANCES
    epsilons: tuple = DEFAULT_EPSILONS
    profiles: int = 100
    predictions: int = 20
    mechanisms: tuple = EXPERIMENT_MECHANISMS
    modes: tuple = ("correlated", "uncorrelated")
    m: int = 100
    seed: int = DEFAULT_SEED
    scale: int = 10 ** 6


@dataclass(frozen=True)
class ExperimentRecord:
    mode: str
    d: int
    profile_id: int
    prediction_id: int
    mechanism: str
    epsilon: str
    values: tuple
    mu_proxy: tuple
    half: tuple
    success: bool


# ---------------------------------------------------------------------------
# valuation generation
# ---------------------------------------------------------------------------

_TIERS = ((1000, 2000), (400, 800), (100, 200), (1, 2))


def _draw_row(gen: SplitMix64, m: int, scale: int, used: set) -> list:
    c1 = 8 / m
    c2 = c1 + 0.25
    c3 = c2 + 0.5
    row = []
    for _ in range(m):
        u = gen.random()
        tier = 0 if u < c1 else 1 if u < c2 else 2 if u < c3 else 3
        lo, hi = _TIERS[tier]
        val = round(gen.uniform(lo, hi) * scale)
        while val in used:
            val = round(gen.uniform(lo, hi) * scale)
        used.add(val)
        row.append(val)
    return row


def _tier_of(value: int, scale: int) -> int:
    for t, (lo, hi) in enumerate(_TIERS):
        if lo * scale <= value <= hi * scale:
            return t
    raise AssertionError("value outside every tier range")


def _matched_row(gen: SplitMix64, first: Sequence[int], scale: int, used: set) -> list:
    """Fresh magnitudes with the same item-to-tier map as ``first``, sorted
    inside each tier to reproduce its preference order exactly."""
    m = len(first)
    row = [0] * m
    tiers = [_tier_of(v, scale) for v in first]
    for t, (lo, hi) in enumerate(_TIERS):
        members = [j for j in range(m) if tiers[j] == t]
        members.sort(key=lambda j: -first[j])
        draws = []
        for _ in members:
            val = round(gen.uniform(lo, hi) * scale)
            while val in used:
                val = round(gen.uniform(lo, hi) * scale)
            used.add(val)
            draws.append(val)
        draws.sort(reverse=True)
        for j, val in zip(members, draws):
            row[j] = val
    return row


def gen_valuation_rows(spec: GenSpec) -> list:
    """Two integer value rows (scaled magnitudes) per the tier model."""
    gen = SplitMix64(spec.seed).derive("valuations", spec.mode)
    used: set = set()
    first = _draw_row(gen, spec.m, spec.scale, used)
    if spec.mode == "correlated":
        second = _matched_row(gen, first, spec.scale, set(first))
    elif spec.mode == "uncorrelated":
        second = _draw_row(gen, spec.m, spec.scale, set(first))
    else:
        raise ValueError(f"unknown mode {spec.mode!r}")
    return [first, second]


def gen_valuations(spec: GenSpec) -> Instance:
    return Instance(gen_valuation_rows(spec))


# ---------------------------------------------------------------------------
# one trial
# ---------------------------------------------------------------------------

def _descending_order(row: Sequence[int]) -> tuple:
    return tuple(sorted(range(len(row)), key=lambda j: (-row[j], j)))


def _noisy_prediction(row, true_order, d: int, seed: int):
    """(predicted values, predicted order) at exact bubble distance d."""
    noisy = perturb_to_distance(true_order, NoiseSpec(d, seed))
    pred = [0] * len(row)
    for level, item in enumerate(noisy):
        pred[item] = row[true_order[level]]
    return pred, noisy


def _steal(a1: frozenset, a2: frozenset, true_orders):
    reports = (OrderingPrediction(true_orders[0]), OrderingPrediction(true_orders[1]))
    return PlantedState(a1, a2, (a1, a2, None, None)).steal(reports).bundles()


def run_trial(rows, true_orders, d: int, gen: SplitMix64, mechanisms) -> dict:
    """Bundle pair per mechanism for one (profile, prediction) draw."""
    m = len(rows[0])
    pool = list(range(m))
    preds = []
    orders = []
    for i in range(2):
        pred, noisy = _noisy_prediction(rows[i], true_orders[i],
                                        d, gen.derive("noise", i).next_u64())
        preds.append(pred)
        orders.append(noisy)
    out = {}
    if "Random" in mechanisms or "Random-Steal" in mechanisms:
        a1, a2 = random_balanced_split(pool, gen.derive("split"))
        if "Random" in mechanisms:
            out["Random"] = (a1, a2)
        if "Random-Steal" in mechanisms:
            out["Random-Steal"] = _steal(a1, a2, true_orders)
    partition_family = [n for n in mechanisms if n.startswith("Partition")]
    if partition_family:
        a1, a2 = cut_and_choose(pool, preds)
        if "Partition" in mechanisms:
            out["Partition"] = (a1, a2)
        if "Partition-Steal" in mechanisms:
            out["Partition-Steal"] = _steal(a1, a2, true_orders)
        if "Partition-Plant-Steal" in mechanisms:
            profile = (OrderingPrediction(orders[0]), OrderingPrediction(orders[1]))
            reports = (OrderingPrediction(true_orders[0]), OrderingPrediction(true_orders[1]))
            out["Partition-Plant-Steal"] = plant(a1, a2, profile, m).steal(reports).bundles()
    return out


# ---------------------------------------------------------------------------
# the sweep
# ---------------------------------------------------------------------------

def _sweep_chunk(args):
    spec, mode, d = args
    eps_fracs = [as_fraction(e) for e in spec.epsilons]
    master = SplitMix64(spec.seed)
    counters = {(mech, str(e)): [0, 0.0] for mech in spec.mechanisms for e in spec.epsilons}
    raw = []
    for p in range(spec.profiles):
        pgen = master.derive("trial", mode, d, p)
        rows = gen_valuation_rows(GenSpec(spec.m, mode, pgen.derive("vals").next_u64(),
                                          spec.scale))
        true_orders = [_descending_order(r) for r in rows]
        mu = [int(mms_heuristic(r, 2).mu) for r in rows]
        half = [sum(r) / 2 for r in rows]
        for q in range(spec.predictions):
            bundles = run_trial(rows, true_orders, d, pgen.derive("pred", q),
                                spec.mechanisms)
            for mech, (b1, b2) in bundles.items():
                v1 = sum(rows[0][j] for j in b1)
                v2 = sum(rows[1][j] for j in b2)
                ratio = min(v1 / mu[0] if mu[0] else 1.0, v2 / mu[1] if mu[1] else 1.0)
                for eps, ef in zip(spec.epsilons, eps_fracs):
                    ok = (v1 * ef.denominator >= (ef.denominator - ef.numerator) * mu[0]
                          and v2 * ef.denominator >= (ef.denominator - ef.numerator) * mu[1])
                    cnt = counters[(mech, str(eps))]
                    cnt[0] += 1 if ok else 0
                    cnt[1] += ratio
                    raw.append(ExperimentRecord(mode, d, p, q, mech, str(eps),
                                                (v1, v2), tuple(mu), tuple(half), ok))
    total = spec.profiles * spec.predictions
    rows_out = []
    for mech in spec.mechanisms:
        for eps in spec.epsilons:
            cnt = counters[(mech, str(eps))]
            rows_out.append({
                "mechanism": mech,
                "d": d,
                "epsilon": str(eps),
                "mode": mode,
                "trials": total,
                "success_rate": cnt[0] / total,
                "mean_min_ratio": cnt[1] / total,
            })
    return rows_out, raw


def run_sweep(spec: SweepSpec, keep_raw: bool = False, threads: int = 1):
    """Aggregate success table (list of dicts) and optional raw records.

    Output is independent of ``threads``: every (mode, d) cell derives its
    randomness from the master seed alone, and rows are sorted at the end.
    """
    jobs = [(spec, mode, d) for mode in spec.modes for d in spec.distances]
    results = []
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_sweep_chunk, jobs))
    else:
        results = [_sweep_chunk(job) for job in jobs]
    agg = []
    raw = []
    for rows_out, chunk_raw in results:
        agg.extend(rows_out)
        if keep_raw:
            raw.extend(chunk_raw)
    agg.sort(key=lambda r: (r["mode"], r["mechanism"], r["d"], r["epsilon"]))
    return agg, (raw if keep_raw else None)


def write_aggregate_csv(rows, path) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(AGGREGATE_COLUMNS)
        for r in rows:
            writer.writerow([r["mechanism"], r["d"], r["epsilon"], r["mode"],
                             r["trials"], f"{r['success_rate']:.6f}",
                             f"{r['mean_min_ratio']:.6f}"])


def write_raw_csv(records, path) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RAW_COLUMNS)
        for r in records:
            writer.writerow([r.mode, r.d, r.profile_id, r.prediction_id,
                             r.mechanism, r.epsilon, r.values[0], r.values[1],
                             r.mu_proxy[0], r.mu_proxy[1],
                             f"{r.half[0]:.1f}", f"{r.half[1]:.1f}",
                             int(r.success)])
