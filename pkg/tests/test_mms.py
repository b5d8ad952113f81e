import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from plantsteal.core import Instance
from plantsteal.mms import (
    CapExceededError,
    approx_ratio,
    mms_exact,
    mms_heuristic,
)


def brute_mms(values, k):
    """Independent oracle: enumerate every assignment of items to k bundles."""
    m = len(values)
    if m == 0:
        return Fraction(0)
    best = Fraction(-1)
    for assign in itertools.product(range(k), repeat=m):
        loads = [Fraction(0)] * k
        for item, b in enumerate(assign):
            loads[b] += Fraction(values[item])
        best = max(best, min(loads))
    return best


def test_footnote_instance():
    res = mms_exact([4, 1, 1, 1, 1], 2)
    assert res.mu == 4
    assert set(res.witness_partition) == {frozenset([0]), frozenset([1, 2, 3, 4])}
    assert res.method == "exact"


def test_barrier_instance():
    vals = [Fraction(1, 2), Fraction(1, 2), Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)]
    assert mms_exact(vals, 2).mu == 1


def test_single_item_two_bundles():
    assert mms_exact([7], 2).mu == 0


def test_three_equal_items_three_bundles():
    assert mms_exact([1, 1, 1], 3).mu == 1


def test_witness_partitions_all_items():
    res = mms_exact([5, 4, 3, 2, 1], 3)
    union = set().union(*res.witness_partition)
    assert union == set(range(5))
    assert sum(len(b) for b in res.witness_partition) == 5
    assert min(sum(Fraction(v) for v in ([5, 4, 3, 2, 1][j] for j in b))
               for b in res.witness_partition) == res.mu


def test_cap_guard():
    with pytest.raises(CapExceededError):
        mms_exact(list(range(25)), 2)


def test_heuristic_footnote_instance():
    assert mms_heuristic([4, 1, 1, 1, 1], 2).mu == 4


def test_heuristic_pair():
    assert mms_heuristic([1, 1], 2).mu == 1


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=12), min_size=1, max_size=7),
       st.integers(min_value=1, max_value=4))
def test_exact_matches_bruteforce(values, k):
    assert mms_exact(values, k).mu == brute_mms(values, k)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=12), min_size=1, max_size=8),
       st.integers(min_value=1, max_value=4))
def test_heuristic_never_exceeds_exact(values, k):
    assert mms_heuristic(values, k).mu <= mms_exact(values, k).mu


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=9), min_size=1, max_size=7),
       st.integers(min_value=1, max_value=4))
def test_averaging_bound_and_monotonicity(values, k):
    mu = mms_exact(values, k).mu
    assert mu * k <= sum(values)
    if k > 1:
        assert mu <= mms_exact(values, k - 1).mu
    positives = sum(1 for v in values if v > 0)
    if k > positives:
        assert mu == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=9), min_size=2, max_size=7),
       st.integers(min_value=2, max_value=4))
def test_drop_top_item_one_fewer_bundle(values, k):
    top = max(range(len(values)), key=lambda j: (values[j], -j))
    rest = [v for j, v in enumerate(values) if j != top]
    assert mms_exact(rest, k - 1).mu >= mms_exact(values, k).mu


def test_approx_ratio_examples():
    inst = Instance([[4, 1, 1, 1, 1]])
    assert approx_ratio(inst, 0, {1, 2}, 2) == 2
    witness = mms_exact([4, 1, 1, 1, 1], 2).witness_partition
    worst = min(witness, key=lambda b: sum([4, 1, 1, 1, 1][j] for j in b))
    assert approx_ratio(inst, 0, worst, 2) == 1
    assert approx_ratio(inst, 0, set(), 2) == float("inf")
    zero = Instance([[0, 0]])
    assert approx_ratio(zero, 0, set(), 2) == 1


def test_heuristic_near_half_on_tiered_values():
    # 100 generated values: worst heuristic bundle within 0.5% of half the total
    from plantsteal.experiments import GenSpec, gen_valuation_rows

    rows = gen_valuation_rows(GenSpec(m=100, mode="uncorrelated", seed=2024))
    for row in rows:
        mu = mms_heuristic(row, 2).mu
        half = Fraction(sum(row), 2)
        assert mu <= half
        assert mu >= half * Fraction(995, 1000)
