"""Instances, bundles, orderings and the elementary selection operations.

Conventions used throughout the package:

* Items are the contiguous identifiers ``0 .. m-1``.
* Values are exact rationals (`fractions.Fraction`); floats passed in are
  interpreted through their shortest decimal representation so ``0.4`` means
  ``2/5``, not the nearest binary double.
* Every argmax over items breaks ties toward the lowest item identifier.
  This makes all mechanisms deterministic and all expected outputs in the
  test-suite reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Bundle = frozenset  # bundle of item identifiers
Ordering = tuple    # permutation of 0..m-1, highest-ranked first


def as_fraction(x) -> Fraction:
    """Exact rational from int / Fraction / str / float (decimal reading)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class Instance:
    """n agents with additive valuations over m indivisible items."""

    valuations: tuple

    def __init__(self, valuations: Sequence[Sequence]):
        rows = tuple(tuple(as_fraction(v) for v in row) for row in valuations)
        if not rows:
            raise ValueError("instance needs at least one agent")
        m = len(rows[0])
        if any(len(row) != m for row in rows):
            raise ValueError("valuation matrix must be rectangular")
        if any(v < 0 for row in rows for v in row):
            raise ValueError("valuations must be non-negative")
        object.__setattr__(self, "valuations", rows)

    @property
    def n_agents(self) -> int:
        return len(self.valuations)

    @property
    def m_items(self) -> int:
        return len(self.valuations[0])

    @property
    def items(self) -> range:
        return range(self.m_items)

    def value(self, agent: int, item: int) -> Fraction:
        return self.valuations[agent][item]


def bundle_value(inst: Instance, agent: int, bundle: Iterable[int]) -> Fraction:
    """Additive value of ``bundle`` for ``agent``."""
    row = inst.valuations[agent]
    total = Fraction(0)
    for j in bundle:
        if not 0 <= j < len(row):
            raise ValueError(f"unknown item identifier {j}")
        total += row[j]
    return total


def favorite_by_values(values: Sequence[Fraction], pool: Iterable[int]) -> int:
    """Highest-valued item of the pool; ties broken by lowest identifier."""
    best = None
    best_v = None
    for j in sorted(pool):
        v = values[j]
        if best is None or v > best_v:
            best, best_v = j, v
    if best is None:
        raise ValueError("favorite of an empty pool is undefined")
    return best


def favorite_by_ordering(ordering: Sequence[int], pool: Iterable[int]) -> int:
    """First pool member in rank order."""
    pool = set(pool)
    if not pool:
        raise ValueError("favorite of an empty pool is undefined")
    for j in ordering:
        if j in pool:
            return j
    raise ValueError("pool contains items missing from the ordering")


def favorite(source: Union[Instance, Sequence[int]], agent: int, pool: Iterable[int]) -> int:
    """Argmax item of ``pool`` under an instance's valuation row or an ordering."""
    if isinstance(source, Instance):
        return favorite_by_values(source.valuations[agent], pool)
    return favorite_by_ordering(source, pool)


def induced_ordering(inst: Instance, agent: int) -> tuple:
    """Items sorted by value descending, ties by lowest identifier."""
    row = inst.valuations[agent]
    return tuple(sorted(inst.items, key=lambda j: (-row[j], j)))


def ordering_from_values(values: Sequence) -> tuple:
    vals = [as_fraction(v) for v in values]
    return tuple(sorted(range(len(vals)), key=lambda j: (-vals[j], j)))


def rank_of(inst: Instance, agent: int, item: int) -> int:
    """1-based rank of ``item`` in the agent's induced total order."""
    row = inst.valuations[agent]
    if not 0 <= item < len(row):
        raise ValueError(f"unknown item identifier {item}")
    v = row[item]
    ahead = sum(1 for j in inst.items if row[j] > v or (row[j] == v and j < item))
    return ahead + 1


def kth_value(values: Sequence[Fraction], k: int) -> Fraction:
    """Value of the k-th highest item (1-based); 0 when k exceeds the count."""
    if k < 1:
        raise ValueError("rank must be at least 1")
    if k > len(values):
        return Fraction(0)
    return sorted(values, reverse=True)[k - 1]


def check_partition(bundles: Sequence[Iterable[int]], m: int, complete: bool = True) -> None:
    """Raise if bundles overlap, leave the item range, or (optionally) miss items."""
    seen = set()
    for b in bundles:
        for j in b:
            if not 0 <= j < m:
                raise ValueError(f"item {j} outside 0..{m - 1}")
            if j in seen:
                raise ValueError(f"item {j} appears in two bundles")
            seen.add(j)
    if complete and len(seen) != m:
        raise ValueError("allocation does not cover all items")


@dataclass(frozen=True)
class Allocation:
    """One bundle per agent; ``complete`` marks whether all of M is covered."""

    bundles: tuple
    complete: bool = True

    def __init__(self, bundles: Sequence[Iterable[int]], m: int, complete: bool = True):
        frozen = tuple(frozenset(b) for b in bundles)
        check_partition(frozen, m, complete=complete)
        object.__setattr__(self, "bundles", frozen)
        object.__setattr__(self, "complete", complete)

    def __getitem__(self, agent: int) -> frozenset:
        return self.bundles[agent]

    def __len__(self) -> int:
        return len(self.bundles)


def validate_ordering(ordering: Sequence[int], m: int) -> tuple:
    perm = tuple(ordering)
    if sorted(perm) != list(range(m)):
        raise ValueError("ordering must be a permutation of 0..m-1")
    return perm
