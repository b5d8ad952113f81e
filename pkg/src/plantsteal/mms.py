"""Maximin-share computation: exact small-instance solver and a scalable heuristic.

``mms_exact`` is the oracle used by all verification code: a depth-first
branch-and-bound over assignments of items (sorted by value descending) to k
bundles.  It prunes with a fractional "water level" upper bound, skips
symmetric branches (equal-load bundles, empty bundles fill left to right),
and is warm-started by the heuristic value, so it is exact and fast for the
desk-scale instances the verification suite runs on (m up to ~20).

``mms_heuristic`` is greedy longest-processing-time placement followed by a
first-improvement local search over single-item moves and pairwise swaps.  It
never exceeds the true maximin share and is the proxy used at experiment
scale (m = 100) where the exact search is out of reach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Instance, as_fraction

DEFAULT_EXACT_CAP = 20


class CapExceededError(RuntimeError):
    """Exact search refused: too many items. Use mms_heuristic instead."""


@dataclass(frozen=True)
class MmsResult:
    mu: Fraction
    witness_partition: tuple   # k bundles (frozensets) covering all items
    method: str                # "exact" or "heuristic"
    k: int


def _scale_to_ints(values: Sequence[Fraction]):
    """Common-denominator integer weights (exact, and much faster to add)."""
    fracs = [as_fraction(v) for v in values]
    denom = 1
    for v in fracs:
        denom = denom * v.denominator // math.gcd(denom, v.denominator)
    return [int(v * denom) for v in fracs], denom


def _lpt_partition(weights: Sequence[int], k: int, order: Sequence[int]) -> list:
    """Greedy placement into the currently lightest bundle (ties: lowest index)."""
    bundles = [[] for _ in range(k)]
    loads = [0] * k
    for idx in order:
        b = min(range(k), key=lambda t: loads[t])
        bundles[b].append(idx)
        loads[b] += weights[idx]
    return bundles


def _min_after(loads: list, a: int, b: int, la: int, lb: int) -> int:
    lo = min(la, lb)
    for t, load in enumerate(loads):
        if t != a and t != b and load < lo:
            lo = load
    return lo


def _local_search(weights: Sequence[int], bundles: list, k: int) -> list:
    """First-improvement moves/swaps until the minimum load stops increasing."""
    loads = [sum(weights[j] for j in b) for b in bundles]
    improved = True
    while improved:
        improved = False
        floor = min(loads)
        for a in range(k):
            if improved:
                break
            for b in range(k):
                if a == b or improved:
                    continue
                for ja in sorted(bundles[a]):
                    la = loads[a] - weights[ja]
                    lb = loads[b] + weights[ja]
                    if _min_after(loads, a, b, la, lb) > floor:
                        bundles[a].remove(ja)
                        bundles[b].append(ja)
                        loads[a], loads[b] = la, lb
                        improved = True
                        break
                    for jb in sorted(bundles[b]):
                        la2 = loads[a] - weights[ja] + weights[jb]
                        lb2 = loads[b] + weights[ja] - weights[jb]
                        if _min_after(loads, a, b, la2, lb2) > floor:
                            bundles[a].remove(ja)
                            bundles[b].remove(jb)
                            bundles[a].append(jb)
                            bundles[b].append(ja)
                            loads[a], loads[b] = la2, lb2
                            improved = True
                            break
                    if improved:
                        break
    return bundles


def mms_heuristic(values: Sequence, k: int) -> MmsResult:
    """Lower bound on the k-bundle maximin share (LPT + swap local search)."""
    if k < 1:
        raise ValueError("bundle count must be at least 1")
    fracs = [as_fraction(v) for v in values]
    m = len(fracs)
    weights, denom = _scale_to_ints(fracs)
    order = sorted(range(m), key=lambda j: (-weights[j], j))
    bundles = _local_search(weights, _lpt_partition(weights, k, order), k)
    mu = min(sum(weights[j] for j in b) for b in bundles)
    witness = tuple(frozenset(b) for b in bundles)
    return MmsResult(Fraction(mu, denom), witness, "heuristic", k)


def mms_exact(values: Sequence, k: int, cap: int = DEFAULT_EXACT_CAP) -> MmsResult:
    """Exact k-bundle maximin share by branch-and-bound.

    Deterministic: the witness is the first optimum met by the fixed search
    order (items by weight descending then identifier, candidate bundles by
    index, equal-load bundles visited once).
    """
    if k < 1:
        raise ValueError("bundle count must be at least 1")
    fracs = [as_fraction(v) for v in values]
    m = len(fracs)
    if m > cap:
        raise CapExceededError(
            f"exact maximin-share search capped at {cap} items (got {m}); use mms_heuristic"
        )
    weights, denom = _scale_to_ints(fracs)
    if k == 1:
        return MmsResult(Fraction(sum(weights), denom), (frozenset(range(m)),), "exact", k)
    if m < k:
        witness = tuple(frozenset([j]) if j < m else frozenset() for j in range(k))
        return MmsResult(Fraction(0), witness, "exact", k)

    order = sorted(range(m), key=lambda j: (-weights[j], j))
    w = [weights[j] for j in order]
    suffix = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] + w[i]

    warm_bundles = _local_search(w, _lpt_partition(w, k, range(m)), k)
    warm_value = min(sum(w[i] for i in b) for b in warm_bundles)

    best_value = warm_value - 1
    best_assign = None
    loads = [0] * k
    assign = [0] * m
    visited = set()  # (idx, sorted loads): re-entering explores a subset

    def upper_bound(idx: int) -> int:
        # pour the unassigned mass into the lightest bundles; the reachable
        # water level caps the final minimum load
        rem = suffix[idx]
        lv = sorted(loads)
        pre = 0
        for t in range(1, k):
            pre += lv[t - 1]
            if t * lv[t] - pre > rem:
                return (pre + rem) // t
        return (pre + lv[k - 1] + rem) // k

    def dfs(idx: int) -> None:
        nonlocal best_value, best_assign
        if idx == m:
            value = min(loads)
            if value > best_value:
                best_value = value
                best_assign = assign.copy()
            return
        if upper_bound(idx) <= best_value:
            return
        state = (idx, tuple(sorted(loads)))
        if state in visited:
            return
        visited.add(state)
        if idx == 0:
            limit = 1  # first item pinned to bundle 0
        else:
            nonempty = sum(1 for l in loads if l > 0)
            limit = min(k, nonempty + 1)
        seen = set()
        for b in range(limit):
            if loads[b] in seen:
                continue
            seen.add(loads[b])
            loads[b] += w[idx]
            assign[idx] = b
            dfs(idx + 1)
            loads[b] -= w[idx]

    dfs(0)
    if best_assign is None:  # warm start was already optimal; keep its witness
        best_value = warm_value
        bundles = [set(b) for b in warm_bundles]
    else:
        bundles = [set() for _ in range(k)]
        for i, b in enumerate(best_assign):
            bundles[b].add(i)
    witness = tuple(frozenset(order[i] for i in b) for b in bundles)
    return MmsResult(Fraction(best_value, denom), witness, "exact", k)


def mms_for_agent(inst: Instance, agent: int, k: int, cap: int = DEFAULT_EXACT_CAP) -> MmsResult:
    """Maximin share of one agent, exact when the instance is small enough."""
    values = inst.valuations[agent]
    if len(values) <= cap:
        return mms_exact(values, k, cap=cap)
    return mms_heuristic(values, k)


def approx_ratio(inst: Instance, agent: int, bundle, k: int, cap: int = DEFAULT_EXACT_CAP):
    """mu_i^k divided by the agent's bundle value.

    Returns ``math.inf`` when the bundle is worthless but the share is not,
    and 1 when both are zero (the agent is as well off as any partition
    could make them).
    """
    from .core import bundle_value

    mu = mms_for_agent(inst, agent, k, cap=cap).mu
    v = bundle_value(inst, agent, bundle)
    if v == 0:
        return Fraction(1) if mu == 0 else math.inf
    return mu / v
