"""Prediction representations, Kendall tau distance, and the noise generator.

A prediction for an agent is one of:

* an item ordering (:class:`OrderingPrediction`),
* a full value vector (:class:`ValuesPrediction`),
* a succinct water-filling hint (:class:`WfEncoding`): the prefix index and
  the agent bit at which the water-filling scan stops,
* a succinct cut-and-balance hint (:class:`CbEncoding`): two explicit item
  lists, four identifier intervals and a chooser bit, decoding to the
  balanced two-bundle split used by the cut-and-balance procedure.

The noise generator reproduces a bubble-sort walk: repeatedly draw a random
index window and sweep adjacent swaps left to right inside it, keeping only
swaps that move the permutation one unit further from the base ordering,
until the Kendall tau distance hits the requested target exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import as_fraction, ordering_from_values, validate_ordering
from .mms import DEFAULT_EXACT_CAP, mms_exact, mms_heuristic
from .rng import SplitMix64


class DecodeError(ValueError):
    """Succinct encoding failed validation."""


class EncodingError(RuntimeError):
    """Encoder could not satisfy its own output contract."""


@dataclass(frozen=True)
class OrderingPrediction:
    ranking: tuple

    def __init__(self, ranking: Sequence[int]):
        object.__setattr__(self, "ranking", tuple(ranking))

    def as_ordering(self, m: int) -> tuple:
        return validate_ordering(self.ranking, m)


@dataclass(frozen=True)
class ValuesPrediction:
    values: tuple

    def __init__(self, values: Sequence):
        vals = tuple(as_fraction(v) for v in values)
        if any(v < 0 for v in vals):
            raise ValueError("predicted values must be non-negative")
        object.__setattr__(self, "values", vals)

    def as_ordering(self, m: int) -> tuple:
        if len(self.values) != m:
            raise ValueError("value vector length does not match item count")
        return ordering_from_values(self.values)


def prediction_ordering(pred, m: int) -> tuple:
    """Ordering view of a prediction (value vectors are sorted down)."""
    if isinstance(pred, (OrderingPrediction, ValuesPrediction)):
        return pred.as_ordering(m)
    raise TypeError(f"no ordering view for prediction {type(pred).__name__}")


# ---------------------------------------------------------------------------
# Kendall tau distance
# ---------------------------------------------------------------------------

def kendall_tau(a: Sequence[int], b: Sequence[int]) -> int:
    """Number of item pairs ranked oppositely by the two orderings."""
    a = tuple(a)
    b = tuple(b)
    if sorted(a) != sorted(b):
        raise ValueError("orderings must be over the same item set")
    pos_b = {item: i for i, item in enumerate(b)}
    seq = [pos_b[item] for item in a]
    return _count_inversions(seq)


def _count_inversions(seq: list) -> int:
    n = len(seq)
    if n < 2:
        return 0
    work = list(seq)
    buf = [0] * n
    total = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if work[i] <= work[j]:
                    buf[k] = work[i]
                    i += 1
                else:
                    buf[k] = work[j]
                    total += mid - i
                    j += 1
                k += 1
            buf[k:hi] = work[i:mid] if i < mid else work[j:hi]
            work[lo:hi] = buf[lo:hi]
        width *= 2
    return total


def kt_profile_distance(induced: Sequence[Sequence[int]], profile: Sequence) -> int:
    """Max over agents of the distance between truth-induced and predicted orders."""
    worst = 0
    for agent, pred in enumerate(profile):
        if not isinstance(pred, OrderingPrediction):
            raise TypeError("profile distance is defined for ordering predictions")
        worst = max(worst, kendall_tau(induced[agent], pred.ranking))
    return worst


# ---------------------------------------------------------------------------
# Controlled noise
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NoiseSpec:
    target_kt_distance: int
    rng_seed: int


def perturb_to_distance(base: Sequence[int], spec: NoiseSpec) -> tuple:
    """Permutation at exactly the requested Kendall tau distance from ``base``.

    Adjacent-bubble walk with rejection: each proposal round draws a window
    j < k uniformly, scans it left to right, and performs the first adjacent
    swap whose pair still agrees with the base order (so the accepted swap
    raises the distance by exactly one).  One accepted swap per round keeps
    the walk diffusive, which is what lets predictions at moderate distances
    retain their local structure.
    """
    base = tuple(base)
    m = len(base)
    d = spec.target_kt_distance
    max_d = m * (m - 1) // 2
    if d < 0 or d > max_d:
        raise ValueError(f"target distance {d} outside 0..{max_d}")
    perm = list(base)
    if d == 0:
        return tuple(perm)
    base_rank = {item: r for r, item in enumerate(base)}
    gen = SplitMix64(spec.rng_seed)
    dist = 0
    rounds = 0
    cap = 100 * m * m + 100
    while dist < d:
        rounds += 1
        if rounds > cap:
            raise RuntimeError("noise walk exceeded its proposal budget")
        j = gen.randrange(m)
        k = gen.randrange(m)
        if j == k:
            continue
        if j > k:
            j, k = k, j
        for r in range(j, k):
            if base_rank[perm[r]] < base_rank[perm[r + 1]]:
                perm[r], perm[r + 1] = perm[r + 1], perm[r]
                dist += 1
                break
    return tuple(perm)


def permute_values_to_distance(values: Sequence, d: int, seed: int) -> tuple:
    """Value vector whose induced order sits at distance d from the truth's.

    The value multiset is preserved: the L-th largest value is reassigned to
    the item ranked L-th by the perturbed ordering.
    """
    vals = [as_fraction(v) for v in values]
    base = ordering_from_values(vals)
    noisy = perturb_to_distance(base, NoiseSpec(d, seed))
    out = [None] * len(vals)
    for level, item in enumerate(noisy):
        out[item] = vals[base[level]]
    return tuple(out)


# ---------------------------------------------------------------------------
# Succinct water-filling hint
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WfEncoding:
    j0: int   # 1-based prefix length at which the scan stops
    b: int    # 1 or 2: which agent's prefix crossed half first
    m: int

    @property
    def bit_size(self) -> int:
        # ceil(log2 m) bits for the index plus the agent bit
        return (self.m - 1).bit_length() + 1

    def to_json(self) -> dict:
        return {"kind": "wf", "j0": self.j0, "b": self.b, "m": self.m}

    @staticmethod
    def from_json(obj: dict) -> "WfEncoding":
        try:
            enc = WfEncoding(int(obj["j0"]), int(obj["b"]), int(obj["m"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise DecodeError(f"bad water-filling encoding: {exc}") from exc
        if not (1 <= enc.j0 <= enc.m and enc.b in (1, 2)):
            raise DecodeError("water-filling encoding out of range")
        return enc


def encode_wf(values1: Sequence, values2: Sequence) -> WfEncoding:
    """Stop point of the water-filling scan on the two predicted value vectors."""
    v1 = [as_fraction(v) for v in values1]
    v2 = [as_fraction(v) for v in values2]
    m = len(v1)
    if len(v2) != m or m == 0:
        raise ValueError("need two equal-length, non-empty value vectors")
    t1, t2 = sum(v1), sum(v2)
    if t1 == 0 or t2 == 0:
        raise ValueError("water-filling needs positive total value for both agents")
    p1 = p2 = Fraction(0)
    for j in range(1, m + 1):
        p1 += v1[j - 1]
        p2 += v2[j - 1]
        if 2 * p1 >= t1:
            return WfEncoding(j, 1, m)
        if 2 * p2 >= t2:
            return WfEncoding(j, 2, m)
    raise AssertionError("water-filling scan must stop by the last prefix")


# ---------------------------------------------------------------------------
# Succinct cut-and-balance hint
# ---------------------------------------------------------------------------

_EMPTY_INTERVAL = (1, 0)


@dataclass(frozen=True)
class CbEncoding:
    """Two explicit item lists plus four identifier intervals and a chooser bit.

    With S the items outside both lists, the decoder reads
    ``S1 = L1 | (S & [a1, b1])``, ``S2 = L2 | (S & [a2, b2])`` and
    ``S' = S & ([a3, b3] | [a4, b4])``.  Intervals are over raw item
    identifiers; an interval with alpha > beta is empty.
    """

    L1: tuple
    L2: tuple
    alphas: tuple  # (a1, a2, a3, a4), each in 0..m
    betas: tuple   # (b1, b2, b3, b4), each in 0..m
    i2: int        # 1 or 2: bundle index agent 2 is predicted to prefer
    m: int

    @property
    def bit_size(self) -> int:
        per_field = self.m.bit_length()  # ceil(log2(m + 1))
        return (len(self.L1) + len(self.L2) + 8) * per_field + 1

    def to_json(self) -> dict:
        return {
            "kind": "cb",
            "L1": list(self.L1),
            "L2": list(self.L2),
            "alpha": list(self.alphas),
            "beta": list(self.betas),
            "i2": self.i2,
            "m": self.m,
        }

    @staticmethod
    def from_json(obj: dict) -> "CbEncoding":
        try:
            enc = CbEncoding(
                tuple(int(j) for j in obj["L1"]),
                tuple(int(j) for j in obj["L2"]),
                tuple(int(a) for a in obj["alpha"]),
                tuple(int(b) for b in obj["beta"]),
                int(obj["i2"]),
                int(obj["m"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DecodeError(f"bad cut-and-balance encoding: {exc}") from exc
        return enc


def decode_cb(enc: CbEncoding, m: Optional[int] = None):
    """Reconstruct (S1, S2, S', i2) from a cut-and-balance encoding.

    Raises :class:`DecodeError` when the intervals overlap on the shared
    remainder, run out of range, or the decoded pieces fail to partition the
    item set.
    """
    if m is None:
        m = enc.m
    if m != enc.m:
        raise DecodeError("encoding was built for a different item count")
    if len(enc.alphas) != 4 or len(enc.betas) != 4:
        raise DecodeError("need exactly four intervals")
    if enc.i2 not in (1, 2):
        raise DecodeError("chooser bit must be 1 or 2")
    for a, b in zip(enc.alphas, enc.betas):
        if not (0 <= a <= m and 0 <= b <= m):
            raise DecodeError("interval index out of range")
    L1, L2 = set(enc.L1), set(enc.L2)
    if L1 & L2:
        raise DecodeError("explicit lists overlap")
    for j in L1 | L2:
        if not 0 <= j < m:
            raise DecodeError(f"listed item {j} out of range")
    S = [j for j in range(m) if j not in L1 and j not in L2]

    def grab(a, b):
        return {j for j in S if a <= j <= b}

    part1 = grab(enc.alphas[0], enc.betas[0])
    part2 = grab(enc.alphas[1], enc.betas[1])
    if part1 & part2:
        raise DecodeError("bundle intervals overlap")
    s1 = frozenset(L1 | part1)
    s2 = frozenset(L2 | part2)
    if len(s1) + len(s2) != m:
        raise DecodeError("decoded bundles do not partition the items")
    sprime = frozenset(grab(enc.alphas[2], enc.betas[2]) | grab(enc.alphas[3], enc.betas[3]))
    if not sprime <= s1:
        raise DecodeError("transfer set is not inside the first bundle")
    return s1, s2, sprime, enc.i2


def _min_cyclic_window(seq_values: list, k2: int):
    """Start position (lowest on ties) of the minimum-sum cyclic window of size k2.

    Also checks the window-averaging fact the construction relies on: the
    minimum window average never exceeds the global average.
    """
    k1 = len(seq_values)
    doubled = seq_values + seq_values
    window = sum(doubled[:k2])
    best_sum, best_start = window, 0
    for start in range(1, k1):
        window += doubled[start + k2 - 1] - doubled[start - 1]
        if window < best_sum:
            best_sum, best_start = window, start
    total = sum(seq_values)
    assert best_sum * k1 <= total * k2, "minimum window average exceeded the mean"
    return best_start, best_sum


def _two_set_split(values: Sequence[Fraction], members: list, cap: int):
    """Max-min split of ``members`` into two explicit sets by value."""
    if not members:
        return [], []
    sub = [values[j] for j in members]
    result = mms_exact(sub, 2) if len(members) <= cap else mms_heuristic(sub, 2)
    g1, g2 = (sorted(members[i] for i in side) for side in result.witness_partition)
    return g1, g2


def encode_cb(values1: Sequence, pred2, epsilon, cap: int = DEFAULT_EXACT_CAP) -> CbEncoding:
    """Succinct cut-and-balance hint for agent 1's predicted values.

    Splits items into "large" (value above eps*mu/4, listed explicitly and
    divided by an exact max-min split when few enough) and "small" (divided
    by a two-pointer sweep over identifiers, so each side's small items form
    one identifier interval).  The transfer set that rebalances the sizes is
    the minimum-average cyclic window of the first bundle's small items.
    Falls back to an explicit listing when the first bundle has too few
    small items to carve the transfer set from.
    """
    eps = as_fraction(epsilon)
    if not 0 < eps <= 1:
        raise ValueError("epsilon must be in (0, 1]")
    v1 = [as_fraction(v) for v in values1]
    m = len(v1)
    if m == 0:
        raise ValueError("no items to encode")

    mu_fn = mms_exact if m <= cap else mms_heuristic
    mu1 = mu_fn(v1, 2).mu

    threshold = eps * mu1 / 4
    large = [j for j in range(m) if v1[j] > threshold]
    small = [j for j in range(m) if v1[j] <= threshold]

    l1, l2 = _two_set_split(v1, large, cap)

    # two-pointer sweep: prefix of small identifiers joins side 1, suffix side 2
    lo, hi = 0, len(small)
    val_lo = sum((v1[j] for j in l1), Fraction(0))
    val_hi = sum((v1[j] for j in l2), Fraction(0))
    while lo != hi:
        if val_lo < val_hi:
            val_lo += v1[small[lo]]
            lo += 1
        else:
            hi -= 1
            val_hi += v1[small[hi]]

    side1 = (list(l1), small[:lo])
    side2 = (list(l2), small[lo:])
    if len(side1[0]) + len(side1[1]) < len(side2[0]) + len(side2[1]):
        side1, side2 = side2, side1

    enc = _assemble_cb(v1, side1, side2, m)
    if enc is None:
        enc = _fallback_cb(v1, mu1, m, cap)
    finished = _attach_chooser(enc, v1, pred2, m)

    _check_cb_contract(finished, v1, mu1, eps, m)
    return finished


def _assemble_cb(v1, side1, side2, m) -> Optional[CbEncoding]:
    """Interval-based encoding; None when the transfer set cannot be carved."""
    list1, smalls1 = side1
    list2, smalls2 = side2

    k2 = m // 2 - (len(list2) + len(smalls2))
    if k2 < 0:
        return None

    # the two highest-valued members of side 1 must sit in the explicit list
    members1 = sorted(list1 + smalls1)
    tops = sorted(members1, key=lambda j: (-v1[j], j))[:2]
    for j in tops:
        if j in smalls1:
            smalls1 = [x for x in smalls1 if x != j]
            list1 = list1 + [j]

    if k2 > len(smalls1):
        return None

    smalls1 = sorted(smalls1)
    smalls2 = sorted(smalls2)
    iv1 = (smalls1[0], smalls1[-1]) if smalls1 else _EMPTY_INTERVAL
    iv2 = (smalls2[0], smalls2[-1]) if smalls2 else _EMPTY_INTERVAL
    if smalls1 and smalls2 and not (iv1[1] < iv2[0] or iv2[1] < iv1[0]):
        return None  # sweep produces disjoint identifier ranges; guard anyway

    if k2 == 0:
        iv3 = iv4 = _EMPTY_INTERVAL
    else:
        start, _ = _min_cyclic_window([v1[j] for j in smalls1], k2)
        if start + k2 <= len(smalls1):
            iv3 = (smalls1[start], smalls1[start + k2 - 1])
            iv4 = _EMPTY_INTERVAL
        else:
            iv3 = (smalls1[start], smalls1[-1])
            iv4 = (smalls1[0], smalls1[(start + k2 - 1) % len(smalls1)])

    return CbEncoding(
        tuple(sorted(list1)),
        tuple(sorted(list2)),
        (iv1[0], iv2[0], iv3[0], iv4[0]),
        (iv1[1], iv2[1], iv3[1], iv4[1]),
        1,
        m,
    )


def _fallback_cb(v1, mu1, m, cap) -> CbEncoding:
    """Explicit listing: both bundles spelled out, transfer set spans all of S."""
    split = mms_exact(v1, 2, cap=cap) if m <= cap else mms_heuristic(v1, 2)
    g1, g2 = (sorted(side) for side in split.witness_partition)
    if len(g1) < len(g2):
        g1, g2 = g2, g1
    k2 = m // 2 - len(g2)
    by_value = sorted(g1, key=lambda j: (v1[j], j))
    transfer = sorted(by_value[:k2])
    list1 = sorted(set(g1) - set(transfer))
    return CbEncoding(
        tuple(list1),
        tuple(g2),
        (0, m, 0, m) if transfer else (0, m, 1, 1),
        (m - 1, m - 1, m - 1, 0) if transfer else (m - 1, m - 1, 0, 0),
        1,
        m,
    )


def _borda_scores(ordering: Sequence[int], m: int) -> list:
    scores = [0] * m
    for pos, item in enumerate(ordering):
        scores[item] = m - pos
    return scores


def _attach_chooser(enc: CbEncoding, v1, pred2, m: int) -> CbEncoding:
    s1, s2, sprime, _ = decode_cb(enc)
    tilde1 = s1 - sprime
    tilde2 = s2 | sprime
    if isinstance(pred2, ValuesPrediction):
        p2 = list(pred2.values)
    elif isinstance(pred2, OrderingPrediction):
        p2 = _borda_scores(pred2.as_ordering(m), m)
    elif pred2 is None:
        p2 = [0] * m  # no information: the tie rule picks bundle 1
    else:
        p2 = [as_fraction(v) for v in pred2]
    w1 = sum(p2[j] for j in tilde1)
    w2 = sum(p2[j] for j in tilde2)
    i2 = 1 if w1 >= w2 else 2
    return CbEncoding(enc.L1, enc.L2, enc.alphas, enc.betas, i2, m)


def _check_cb_contract(enc: CbEncoding, v1, mu1, eps, m) -> None:
    s1, s2, sprime, _ = decode_cb(enc)
    val1 = sum((v1[j] for j in s1), Fraction(0))
    val2 = sum((v1[j] for j in s2), Fraction(0))
    if len(s1) < len(s2):
        raise EncodingError("first bundle must not be the smaller one")
    if min(val1, val2) * 4 < (4 - eps) * mu1:
        raise EncodingError("balanced split misses the near-share guarantee")
    if len(sprime) != m // 2 - len(s2):
        raise EncodingError("transfer set has the wrong size")
    vp = sum((v1[j] for j in sprime), Fraction(0))
    if 2 * vp > val1:
        raise EncodingError("transfer set too valuable")
    if len(s2) > 1:
        tops = sorted(s1, key=lambda j: (-v1[j], j))[:2]
        rest = val1 - sum(v1[j] for j in tops)
        if 2 * vp > rest:
            raise EncodingError("transfer set too valuable next to the top two")


def cb_achieved_gap(enc: CbEncoding, values1: Sequence) -> Fraction:
    """min(v1(S1), v1(S2)) / mu1 for the decoded split (1 means no loss)."""
    v1 = [as_fraction(v) for v in values1]
    mu_fn = mms_exact if len(v1) <= DEFAULT_EXACT_CAP else mms_heuristic
    mu1 = mu_fn(v1, 2).mu
    s1, s2, _, _ = decode_cb(enc)
    if mu1 == 0:
        return Fraction(1)
    lo = min(sum(v1[j] for j in s1), sum(v1[j] for j in s2))
    return lo / mu1


def prediction_to_json(pred) -> dict:
    if isinstance(pred, OrderingPrediction):
        return {"kind": "ordering", "ranking": list(pred.ranking)}
    if isinstance(pred, ValuesPrediction):
        return {"kind": "values", "values": [str(v) for v in pred.values]}
    if isinstance(pred, (WfEncoding, CbEncoding)):
        return pred.to_json()
    raise TypeError(f"cannot serialize prediction {type(pred).__name__}")


def prediction_from_json(obj: dict):
    kind = obj.get("kind")
    if kind == "ordering":
        return OrderingPrediction(obj["ranking"])
    if kind == "values":
        return ValuesPrediction([as_fraction(v) for v in obj["values"]])
    if kind == "wf":
        return WfEncoding.from_json(obj)
    if kind == "cb":
        return CbEncoding.from_json(obj)
    raise DecodeError(f"unknown prediction kind {kind!r}")
