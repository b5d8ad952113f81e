"""Two-agent allocation procedures, the plant-and-steal framework, and the
named mechanisms built from them.

An allocation procedure turns predictions into an initial two-bundle split
``(A1, A2)``.  The framework then *plants* each agent's predicted favorite
into the other bundle and lets each agent *steal* one item back from the
other side by report.  Reports enter only at the stealing step, which is what
makes every instantiation truthful regardless of the procedure used.

Named mechanisms (stable strings, usable from the CLI):

=====================  =====================================================
``B-RR-PAS``           balanced round-robin + plant and steal
``1-2-RR-PAS``         one-two round-robin + plant and steal
``WF-PAS``             water-filling + plant and steal
``CB-PAS``             cut-and-balance + plant and steal
``Random``             seeded balanced split, nothing else
``Random-Steal``       seeded balanced split + steal phase
``Partition``          greedy cut-and-choose on predictions, nothing else
``Partition-Steal``    cut-and-choose + steal phase
``Partition-Plant-Steal``  cut-and-choose + plant and steal
=====================  =====================================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    Instance,
    bundle_value,
    favorite_by_ordering,
    favorite_by_values,
    ordering_from_values,
)
from .mms import DEFAULT_EXACT_CAP, mms_for_agent
from .predictions import (
    CbEncoding,
    OrderingPrediction,
    ValuesPrediction,
    WfEncoding,
    decode_cb,
    encode_cb,
    prediction_ordering,
)
from .rng import SplitMix64

MECHANISM_NAMES = (
    "B-RR-PAS",
    "1-2-RR-PAS",
    "WF-PAS",
    "CB-PAS",
    "Random",
    "Random-Steal",
    "Partition",
    "Partition-Steal",
    "Partition-Plant-Steal",
)


class UnknownMechanismError(ValueError):
    pass


class UnsupportedInstanceError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Allocation procedures
# ---------------------------------------------------------------------------

def balanced_round_robin(pool: Sequence[int], orderings: Sequence[Sequence[int]]):
    """Agents alternate picks, agent 1 first: sizes ceil(m/2) and floor(m/2)."""
    remaining = set(pool)
    a1, a2 = [], []
    while remaining:
        a1.append(favorite_by_ordering(orderings[0], remaining))
        remaining.discard(a1[-1])
        if remaining:
            a2.append(favorite_by_ordering(orderings[1], remaining))
            remaining.discard(a2[-1])
    return frozenset(a1), frozenset(a2)


def one_two_round_robin(pool: Sequence[int], orderings: Sequence[Sequence[int]]):
    """Agent 1 takes one item per round, agent 2 takes two."""
    remaining = set(pool)
    a1, a2 = [], []
    while remaining:
        a1.append(favorite_by_ordering(orderings[0], remaining))
        remaining.discard(a1[-1])
        for _ in range(2):
            if remaining:
                a2.append(favorite_by_ordering(orderings[1], remaining))
                remaining.discard(a2[-1])
    return frozenset(a1), frozenset(a2)


def water_filling(pool: Sequence[int], values_pair):
    """First identifier-order prefix reaching half of either agent's total.

    Agent 1's condition is checked before agent 2's at every step.  Accepts a
    pair of value vectors or a :class:`WfEncoding` describing the stop point.
    """
    ids = sorted(pool)
    if isinstance(values_pair, WfEncoding):
        enc = values_pair
        if enc.j0 > len(ids):
            raise ValueError("encoded stop point beyond the pool")
        prefix = frozenset(ids[: enc.j0])
        rest = frozenset(ids[enc.j0:])
        return (prefix, rest) if enc.b == 1 else (rest, prefix)
    v1, v2 = values_pair
    t1 = sum(v1[j] for j in ids)
    t2 = sum(v2[j] for j in ids)
    if t1 == 0 or t2 == 0:
        raise ValueError("water-filling needs positive total value for both agents")
    p1 = p2 = 0
    for stop, j in enumerate(ids, start=1):
        p1 += v1[j]
        p2 += v2[j]
        if 2 * p1 >= t1:
            return frozenset(ids[:stop]), frozenset(ids[stop:])
        if 2 * p2 >= t2:
            return frozenset(ids[stop:]), frozenset(ids[:stop])
    raise AssertionError("scan must stop by the last prefix")


def cut_and_balance(pool: Sequence[int], prediction, epsilon=Fraction(1, 4),
                    cap: int = DEFAULT_EXACT_CAP):
    """Balanced near-max-min split of agent 1's predicted values.

    ``prediction`` is either a ready :class:`CbEncoding` or a pair
    ``(values1, pred2)`` from which one is built.  Agent 2 receives the
    balanced bundle the chooser bit marks as their predicted favorite.
    """
    m = len(pool)
    if sorted(pool) != list(range(m)):
        raise ValueError("cut-and-balance expects the full item range")
    if isinstance(prediction, CbEncoding):
        enc = prediction
    else:
        values1, pred2 = prediction
        enc = encode_cb(values1, pred2, epsilon, cap=cap)
    s1, s2, sprime, i2 = decode_cb(enc, m)
    tilde = (s1 - sprime, s2 | sprime)
    a2 = tilde[i2 - 1]
    a1 = tilde[2 - i2]
    return a1, a2


def greedy_balance_split(values: Sequence, pool: Sequence[int], size_cap: Optional[int] = None):
    """Sort by value descending, then drop each item into the lighter side.

    Ties (equal loads) go to the first side; equal values scan by identifier.
    ``size_cap`` bounds each side's cardinality (a full side stops receiving),
    which keeps the two sides within one item of each other in count while
    staying value-balanced up to roughly one mid-tier item.
    """
    order = sorted(pool, key=lambda j: (-values[j], j))
    sides = ([], [])
    loads = [0, 0]
    for j in order:
        if size_cap is not None and len(sides[0]) >= size_cap:
            b = 1
        elif size_cap is not None and len(sides[1]) >= size_cap:
            b = 0
        else:
            b = 0 if loads[0] <= loads[1] else 1
        sides[b].append(j)
        loads[b] += values[j]
    return frozenset(sides[0]), frozenset(sides[1])


def cut_and_choose(pool: Sequence[int], values_pair):
    """Half-capacity greedy balance on agent 1's prediction; agent 2 picks
    their predicted-better side and agent 1 keeps the other."""
    v1, v2 = values_pair
    b0, b1 = greedy_balance_split(v1, pool, size_cap=(len(pool) + 1) // 2)
    w0 = sum(v2[j] for j in b0)
    w1 = sum(v2[j] for j in b1)
    a2 = b0 if w0 >= w1 else b1
    a1 = b1 if a2 is b0 else b0
    return a1, a2


def random_balanced_split(pool: Sequence[int], gen: SplitMix64):
    items = sorted(pool)
    gen.shuffle(items)
    half = (len(items) + 1) // 2
    return frozenset(items[:half]), frozenset(items[half:])


# ---------------------------------------------------------------------------
# Plant-and-steal framework
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlantStealTrace:
    a1: frozenset
    a2: frozenset
    planted1: Optional[int]
    planted2: Optional[int]
    t1: frozenset
    t2: frozenset
    stolen1: Optional[int]
    stolen2: Optional[int]
    x1: frozenset
    x2: frozenset

    def bundles(self):
        return (self.x1, self.x2)

    def to_json(self) -> dict:
        return {
            "initial": [sorted(self.a1), sorted(self.a2)],
            "planted": [self.planted1, self.planted2],
            "after_plant": [sorted(self.t1), sorted(self.t2)],
            "stolen": [self.stolen1, self.stolen2],
            "final": [sorted(self.x1), sorted(self.x2)],
        }


def _favorite_by_prediction(pred, bundle, m: int) -> int:
    if isinstance(pred, ValuesPrediction):
        return favorite_by_values(pred.values, bundle)
    if isinstance(pred, OrderingPrediction):
        return favorite_by_ordering(pred.as_ordering(m), bundle)
    # succinct hints carry no per-item preference; fall back to the fixed
    # lowest-identifier rule, which is still prediction-only
    return min(bundle)


def _favorite_by_report(report, bundle) -> int:
    if isinstance(report, ValuesPrediction):
        return favorite_by_values(report.values, bundle)
    if isinstance(report, OrderingPrediction):
        return favorite_by_ordering(report.ranking, bundle)
    if isinstance(report, (tuple, list)):
        return favorite_by_values(report, bundle)
    raise TypeError(f"cannot read report of type {type(report).__name__}")


def pad_nonempty(a1: frozenset, a2: frozenset, predictions, m: int):
    """If one side is empty (and two or more items exist), move the full
    side's owner's least-predicted item across so both sides can host a plant."""
    if len(a1) + len(a2) < 2 or (a1 and a2):
        return a1, a2
    if a1:
        donor_pred, full, empty_is_first = predictions[0], a1, False
    else:
        donor_pred, full, empty_is_first = predictions[1], a2, True
    if isinstance(donor_pred, ValuesPrediction):
        vals = donor_pred.values
        moved = min(sorted(full), key=lambda j: (vals[j], j))
    elif isinstance(donor_pred, OrderingPrediction):
        order = donor_pred.as_ordering(m)
        pos = {item: r for r, item in enumerate(order)}
        moved = max(sorted(full), key=lambda j: (pos[j], -j))
    else:
        moved = min(full)
    if empty_is_first:
        return frozenset([moved]), full - {moved}
    return full - {moved}, frozenset([moved])


@dataclass(frozen=True)
class PlantedState:
    """Prediction-only part of the framework: reports never touch this."""

    t1: frozenset
    t2: frozenset
    trace_head: tuple  # (a1, a2, planted1, planted2)
    steal_enabled: bool = True

    def steal(self, reports) -> PlantStealTrace:
        a1, a2, p1, p2 = self.trace_head
        t1, t2 = self.t1, self.t2
        if not self.steal_enabled:
            return PlantStealTrace(a1, a2, p1, p2, t1, t2, None, None, t1, t2)
        if not (t1 and t2):
            # degenerate pool (fewer than two items): owners keep their side
            return PlantStealTrace(a1, a2, p1, p2, t1, t2, None, None, t1, t2)
        s1 = _favorite_by_report(reports[0], t2)
        s2 = _favorite_by_report(reports[1], t1)
        x1 = (set(t1) | {s1}) - {s2}
        x2 = (set(t2) | {s2}) - {s1}
        return PlantStealTrace(a1, a2, p1, p2, t1, t2, s1, s2,
                               frozenset(x1), frozenset(x2))


def plant(a1: frozenset, a2: frozenset, predictions, m: int) -> PlantedState:
    """Swap each side's predicted favorite into the other side."""
    if a1 and a2:
        j1 = _favorite_by_prediction(predictions[0], a1, m)
        j2 = _favorite_by_prediction(predictions[1], a2, m)
        t1 = (a1 - {j1}) | {j2}
        t2 = (a2 - {j2}) | {j1}
        return PlantedState(frozenset(t1), frozenset(t2), (a1, a2, j1, j2))
    return PlantedState(a1, a2, (a1, a2, None, None))


def steal_only(a1: frozenset, a2: frozenset, reports) -> PlantStealTrace:
    """The stealing phase applied directly to an initial split (no planting)."""
    return PlantedState(a1, a2, (a1, a2, None, None)).steal(reports)


def plant_and_steal(procedure, pool: Sequence[int], predictions, reports,
                    m: Optional[int] = None) -> PlantStealTrace:
    """Run the full framework with ``procedure`` supplying the initial split."""
    m = m if m is not None else (max(pool) + 1 if len(pool) else 0)
    a1, a2 = procedure(pool, predictions)
    a1, a2 = pad_nonempty(a1, a2, predictions, m)
    return plant(a1, a2, predictions, m).steal(reports)


# ---------------------------------------------------------------------------
# Named mechanisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MechanismReport:
    mechanism: str
    bundles: tuple
    values: tuple
    mu: tuple
    mu_method: str
    mu_k: int
    ratios: tuple
    trace: object
    seed: Optional[int] = None
    extra: Optional[dict] = None

    def to_json(self) -> dict:
        out = {
            "mechanism": self.mechanism,
            "bundles": [sorted(b) for b in self.bundles],
            "values": [str(v) for v in self.values],
            "mu": [str(v) for v in self.mu],
            "mu_method": self.mu_method,
            "mu_k": self.mu_k,
            "ratios": ["inf" if r == math.inf else str(r) for r in self.ratios],
            "seed": self.seed,
        }
        if self.trace is not None:
            out["trace"] = self.trace.to_json()
        if self.extra:
            out["extra"] = self.extra
        return out


def _report_orderings(inst: Instance):
    return tuple(OrderingPrediction(ordering_from_values(row)) for row in inst.valuations)


def _need_value_predictions(name, predictions):
    pair = []
    for pred in predictions:
        if isinstance(pred, ValuesPrediction):
            pair.append(pred.values)
        else:
            raise UnsupportedInstanceError(
                f"{name} needs value-vector predictions, got {type(pred).__name__}"
            )
    return pair


def build_report(inst: Instance, name: str, trace, seed=None, extra=None,
                 cap: int = DEFAULT_EXACT_CAP) -> MechanismReport:
    bundles = trace.bundles() if isinstance(trace, PlantStealTrace) else trace
    values = tuple(bundle_value(inst, i, b) for i, b in enumerate(bundles))
    mus = []
    method = "exact"
    for i in range(inst.n_agents):
        res = mms_for_agent(inst, i, inst.n_agents, cap=cap)
        mus.append(res.mu)
        method = res.method
    ratios = tuple(
        (mu / v) if v > 0 else (Fraction(1) if mu == 0 else math.inf)
        for mu, v in zip(mus, values)
    )
    return MechanismReport(name, tuple(bundles), values, tuple(mus), method,
                           inst.n_agents, ratios, trace if isinstance(trace, PlantStealTrace) else None,
                           seed, extra)


def prepare_named(name: str, m: int, predictions=None, seed: int = 0,
                  epsilon=Fraction(1, 4), cap: int = DEFAULT_EXACT_CAP) -> "PlantedState":
    """Prediction-only stage of a named mechanism.

    The returned state depends on predictions and the seed but never on
    reports; feeding reports to :meth:`PlantedState.steal` finishes the run.
    For the report-blind mechanisms (``Random``, ``Partition``) stealing is
    disabled in the returned state, so their output ignores reports too.
    """
    if name not in MECHANISM_NAMES:
        raise UnknownMechanismError(f"unknown mechanism {name!r}")
    pool = list(range(m))

    def framework(a1, a2):
        a1, a2 = pad_nonempty(a1, a2, predictions, m)
        return plant(a1, a2, predictions, m)

    if name in ("B-RR-PAS", "1-2-RR-PAS"):
        orders = tuple(prediction_ordering(p, m) for p in predictions)
        proc = balanced_round_robin if name == "B-RR-PAS" else one_two_round_robin
        return framework(*proc(pool, orders))
    if name == "WF-PAS":
        if all(isinstance(p, WfEncoding) for p in predictions):
            split = water_filling(pool, predictions[0])
        else:
            split = water_filling(pool, _need_value_predictions(name, predictions))
        return framework(*split)
    if name == "CB-PAS":
        if all(isinstance(p, CbEncoding) for p in predictions):
            split = cut_and_balance(pool, predictions[0], epsilon, cap=cap)
        else:
            pair = _need_value_predictions(name, predictions)
            split = cut_and_balance(pool, (pair[0], predictions[1]), epsilon, cap=cap)
        return framework(*split)
    if name in ("Random", "Random-Steal"):
        gen = SplitMix64(seed).derive("random-split")
        a1, a2 = random_balanced_split(pool, gen)
        if name == "Random":
            return PlantedState(a1, a2, (a1, a2, None, None), steal_enabled=False)
        return PlantedState(a1, a2, (a1, a2, None, None))
    # Partition family
    pair = _need_value_predictions(name, predictions)
    a1, a2 = cut_and_choose(pool, pair)
    if name == "Partition":
        return PlantedState(a1, a2, (a1, a2, None, None), steal_enabled=False)
    if name == "Partition-Steal":
        return PlantedState(a1, a2, (a1, a2, None, None))
    a1, a2 = pad_nonempty(a1, a2, predictions, m)
    return plant(a1, a2, predictions, m)


def allocate_named(name: str, inst: Instance, predictions=None, reports=None,
                   seed: int = 0, epsilon=Fraction(1, 4),
                   cap: int = DEFAULT_EXACT_CAP) -> PlantStealTrace:
    if inst.n_agents != 2:
        raise UnsupportedInstanceError("two-agent mechanism needs exactly 2 agents")
    reports = reports if reports is not None else _report_orderings(inst)
    state = prepare_named(name, inst.m_items, predictions, seed=seed,
                          epsilon=epsilon, cap=cap)
    return state.steal(reports)


def run_named_mechanism(name: str, inst: Instance, predictions=None,
                        reports=None, seed: int = 0, epsilon=Fraction(1, 4),
                        cap: int = DEFAULT_EXACT_CAP) -> MechanismReport:
    """Run one of the named two-agent mechanisms and report values and ratios.

    ``reports`` defaults to the agents' true preference orders (truthful
    play); predictions are required by every mechanism except the Random
    pair.
    """
    trace = allocate_named(name, inst, predictions, reports, seed=seed,
                           epsilon=epsilon, cap=cap)
    return build_report(inst, name, trace, seed=seed, cap=cap)
