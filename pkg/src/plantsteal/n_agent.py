"""The n-agent mechanism: large-item pre-allocation, a tentative round-robin
with order reversal, and a recursive split/plant/steal phase.

Reports are consulted in exactly two places: the item a large-value agent
picks up, and the item an agent steals from the opposite half's tentative
bundles.  Everything else (who counts as large, the tentative bundles, the
planted items, the recursion order) is driven by predictions alone, which is
what makes the mechanism truthful.

One deliberate deviation from the obvious reading of the phase-one loop: the
loop never strips the queue below one agent.  Letting the last agent also
grab a single item and then routing leftovers to some earlier agent would
make that earlier agent's final bundle depend on the menu their own pick
left behind, and a concrete three-item profile then rewards lying (see
tests/test_n_agent.py).  Keeping one live agent gives the same guarantees
and keeps every agent's bundle independent of their own report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import Instance, bundle_value, favorite_by_ordering, favorite_by_values, ordering_from_values
from .mms import DEFAULT_EXACT_CAP, mms_exact, mms_heuristic
from .predictions import OrderingPrediction, ValuesPrediction
from .two_agent import MechanismReport, UnsupportedInstanceError


@dataclass(frozen=True)
class OrderingWithLargeFlags:
    """Ordering prediction plus one bit per item: is it worth at least half
    of the agent's predicted share?  Stands in for value predictions when
    only ranks are available."""

    ranking: tuple
    large: tuple

    def __init__(self, ranking: Sequence[int], large: Sequence[bool]):
        object.__setattr__(self, "ranking", tuple(ranking))
        object.__setattr__(self, "large", tuple(bool(x) for x in large))


@dataclass
class NAgentTrace:
    large_phase: list = field(default_factory=list)    # (agent, item) in pick order
    mu_predicted: dict = field(default_factory=dict)   # agent -> Fraction or None
    mu_method: str = "exact"
    tentative: dict = field(default_factory=dict)      # agent -> items in pick order
    plant_events: list = field(default_factory=list)   # (level, giver, receiver, item)
    steal_events: list = field(default_factory=list)   # (level, agent, pool, item)
    leftovers: dict = field(default_factory=dict)      # agent -> items kept at halt
    final: dict = field(default_factory=dict)          # agent -> sorted items

    def to_json(self) -> dict:
        return {
            "large_phase": [list(e) for e in self.large_phase],
            "mu_predicted": {str(a): (str(v) if v is not None else None)
                             for a, v in self.mu_predicted.items()},
            "mu_method": self.mu_method,
            "tentative": {str(a): list(items) for a, items in self.tentative.items()},
            "plant_events": [list(e) for e in self.plant_events],
            "steal_events": [[lvl, agent, list(pool), item]
                             for lvl, agent, pool, item in self.steal_events],
            "leftovers": {str(a): list(items) for a, items in self.leftovers.items()},
            "final": {str(a): list(items) for a, items in self.final.items()},
        }


def _pred_favorite(pred, pool, m: int) -> int:
    if isinstance(pred, ValuesPrediction):
        return favorite_by_values(pred.values, pool)
    if isinstance(pred, (OrderingPrediction, OrderingWithLargeFlags)):
        return favorite_by_ordering(pred.ranking, pool)
    raise TypeError(f"cannot rank items with a {type(pred).__name__} prediction")


def _report_favorite(report, pool) -> int:
    if isinstance(report, ValuesPrediction):
        return favorite_by_values(report.values, pool)
    if isinstance(report, OrderingPrediction):
        return favorite_by_ordering(report.ranking, pool)
    if isinstance(report, (tuple, list)):
        return favorite_by_values(report, pool)
    raise TypeError(f"cannot read report of type {type(report).__name__}")


def allocate_best(queue: Sequence[int], pool: set, prefs, m: int, by_reports: bool):
    """One selection round: each agent in queue order takes their favorite
    remaining pool item (agents finding an empty pool are skipped)."""
    picks = {}
    for agent in queue:
        if not pool:
            break
        pref = prefs[agent]
        item = _report_favorite(pref, pool) if by_reports else _pred_favorite(pref, pool, m)
        picks[agent] = item
        pool.discard(item)
    return picks


def allocate_large(inst: Instance, queue: Sequence[int], predictions, reports,
                   cap: int = DEFAULT_EXACT_CAP, trace: Optional[NAgentTrace] = None):
    """Pre-allocate one reported-favorite item to each agent whose top
    predicted remaining item is worth at least half their predicted share.

    Shares come from the predicted values over the full item set with the
    full agent count, computed once.  Flag-style predictions replace the
    value test with the item's own large bit.  The loop keeps at least one
    live agent (see module docstring).
    """
    n = inst.n_agents
    m = inst.m_items
    live = list(queue)
    remaining = set(inst.items)
    assigned = {}
    mu_pred = {}
    method = "exact"
    for i in live:
        pred = predictions[i]
        if isinstance(pred, ValuesPrediction):
            res = (mms_exact if m <= cap else mms_heuristic)(pred.values, n)
            mu_pred[i] = res.mu
            method = res.method
        elif isinstance(pred, OrderingWithLargeFlags):
            mu_pred[i] = None
        else:
            raise UnsupportedInstanceError(
                "phase one needs value predictions or orderings with large-item flags"
            )

    def is_large(i: int) -> bool:
        pred = predictions[i]
        if isinstance(pred, OrderingWithLargeFlags):
            top = favorite_by_ordering(pred.ranking, remaining)
            return pred.large[top]
        top = favorite_by_values(pred.values, remaining)
        return 2 * pred.values[top] >= mu_pred[i]

    while len(live) > 1 and remaining:
        picked = None
        for i in live:
            if is_large(i):
                picked = i
                break
        if picked is None:
            break
        item = _report_favorite(reports[picked], remaining)
        assigned[picked] = item
        remaining.discard(item)
        live.remove(picked)
        if trace is not None:
            trace.large_phase.append((picked, item))
    if trace is not None:
        trace.mu_predicted = dict(mu_pred)
        trace.mu_method = method
    return assigned, live, remaining


def tentative_rr(queue: Sequence[int], pool: set, predictions, m: int) -> dict:
    """Round one follows the queue; every later round runs in reversed order.
    Bundles keep their pick order."""
    pool = set(pool)
    bundles = {i: [] for i in queue}
    order = list(queue)
    first = True
    while pool:
        picks = allocate_best(order, pool, predictions, m, by_reports=False)
        for agent, item in picks.items():
            bundles[agent].append(item)
        if first:
            order = list(reversed(order))
            first = False
    return bundles


def split_plant_steal(queue: Sequence[int], tentative: dict, final: dict,
                      reports, predictions, m: int,
                      trace: Optional[NAgentTrace] = None,
                      odd_plant_receiver: str = "first",
                      _level: int = 1, _first_level: bool = True) -> None:
    """Recursive halving with planting by predictions and stealing by reports.

    ``odd_plant_receiver`` selects who hosts the unpaired agent's plant when
    the queue has odd length: the first agent of the even half (default) or
    the last one (the plausible alternative reading; kept for experiments).
    """
    if not queue:
        return
    if len(queue) == 1:
        agent = queue[0]
        final[agent].update(tentative[agent])
        if trace is not None:
            trace.leftovers[agent] = list(tentative[agent])
        tentative[agent] = []
        return

    n0 = list(queue[0::2])
    n1 = list(queue[1::2])

    def plant(giver: int, receiver: int) -> None:
        item = _pred_favorite(predictions[giver], tentative[giver], m)
        tentative[giver].remove(item)
        tentative[receiver].append(item)
        if trace is not None:
            trace.plant_events.append((_level, giver, receiver, item))

    for i0, i1 in zip(n0, n1):
        j0 = _pred_favorite(predictions[i0], tentative[i0], m) if tentative[i0] else None
        j1 = _pred_favorite(predictions[i1], tentative[i1], m) if tentative[i1] else None
        if j0 is not None:
            tentative[i0].remove(j0)
            tentative[i1].append(j0)
            if trace is not None:
                trace.plant_events.append((_level, i0, i1, j0))
        if j1 is not None:
            tentative[i1].remove(j1)
            tentative[i0].append(j1)
            if trace is not None:
                trace.plant_events.append((_level, i1, i0, j1))

    if len(queue) % 2 == 1:
        giver = n0[-1]  # the unpaired agent sits last in the odd half
        receiver = n1[0] if odd_plant_receiver == "first" else n1[-1]
        if tentative[giver]:
            plant(giver, receiver)

    for side, other in ((n0, n1), (n1, n0)):
        pool = []
        holder = {}
        for a in other:
            for item in tentative[a]:
                pool.append(item)
                holder[item] = a
        pool_set = set(pool)
        for agent in side:
            if not pool_set:
                break
            snapshot = tuple(sorted(pool_set))
            item = _report_favorite(reports[agent], pool_set)
            final[agent].add(item)
            pool_set.discard(item)
            tentative[holder[item]].remove(item)
            if trace is not None:
                trace.steal_events.append((_level, agent, snapshot, item))

    if _first_level:
        n0.reverse()
        n1.reverse()

    for half in (n0, n1):
        split_plant_steal(half, tentative, final, reports, predictions, m,
                          trace, odd_plant_receiver, _level + 1, False)


def n_agent_allocate(inst: Instance, predictions, reports=None,
                     cap: int = DEFAULT_EXACT_CAP,
                     odd_plant_receiver: str = "first"):
    """Three phases, bundles only: (tuple of frozensets, NAgentTrace)."""
    n = inst.n_agents
    m = inst.m_items
    if n < 2:
        raise UnsupportedInstanceError("need at least two agents")
    if reports is None:
        reports = tuple(OrderingPrediction(ordering_from_values(row)) for row in inst.valuations)
    trace = NAgentTrace()

    assigned, live, remaining = allocate_large(inst, range(n), predictions, reports,
                                               cap=cap, trace=trace)
    final = {i: set() for i in range(n)}
    for agent, item in assigned.items():
        final[agent].add(item)

    tentative = tentative_rr(live, remaining, predictions, m)
    trace.tentative = {a: list(items) for a, items in tentative.items()}

    split_plant_steal(live, tentative, final, reports, predictions, m, trace,
                      odd_plant_receiver=odd_plant_receiver)

    bundles = tuple(frozenset(final[i]) for i in range(n))
    trace.final = {i: sorted(final[i]) for i in range(n)}
    return bundles, trace


def run_n_agent_mechanism(inst: Instance, predictions, reports=None,
                          cap: int = DEFAULT_EXACT_CAP,
                          odd_plant_receiver: str = "first"):
    """Full three-phase mechanism; returns (MechanismReport, NAgentTrace).

    The report carries ratios against the n-bundle share and, under
    ``extra``, the relaxed ceil(3n/2)-bundle share with its worst-case
    denominator (marked vacuous when the item count is too small for the
    bound to say anything).
    """
    n = inst.n_agents
    m = inst.m_items
    bundles, trace = n_agent_allocate(inst, predictions, reports, cap=cap,
                                      odd_plant_receiver=odd_plant_receiver)
    values = tuple(bundle_value(inst, i, b) for i, b in enumerate(bundles))
    mu_fn = mms_exact if m <= cap else mms_heuristic
    mus = tuple(mu_fn(inst.valuations[i], n).mu for i in range(n))
    method = "exact" if m <= cap else "heuristic"
    ratios = tuple(
        (mu / v) if v > 0 else (Fraction(1) if mu == 0 else math.inf)
        for mu, v in zip(mus, values)
    )

    k_relaxed = (3 * n + 1) // 2  # ceil(3n/2)
    mus_relaxed = tuple(mu_fn(inst.valuations[i], k_relaxed).mu for i in range(n))
    alpha = m - k_relaxed - 1
    extra = {
        "k_relaxed": k_relaxed,
        "mu_relaxed": [str(v) for v in mus_relaxed],
        "alpha": alpha if alpha > 0 else None,
        "relaxed_bound": "vacuous" if alpha <= 0 else "mu_relaxed/alpha",
    }
    report = MechanismReport("n-agent", bundles, values, mus, method, n,
                             ratios, None, None, extra)
    return report, trace
