"""Executable checks of the mechanisms' advertised properties.

Four checkers, each returning a :class:`PropertyReport` that records every
violation together with the inputs that produced it:

* :func:`fuzz_truthfulness` — for sampled (truth, prediction) pairs,
  enumerate every preference-order misreport of one agent (order is all a
  report can change here) and flag any strict utility gain.
* :func:`check_consistency` — accurate predictions, exact shares, the
  claimed per-mechanism ratio.
* :func:`check_robustness` — adversarial predictions (always including the
  reversed truth), size-based worst-case ratio, plus the structural
  guarantees: a top-two item for two agents, a top-ceil(3n/2) item for n.
* :func:`check_noise_curve` — predictions at a controlled bubble-sort
  distance d, the 2*sqrt(d)+6 degradation bound, and the per-threshold
  count inequality behind it.

All bound comparisons are exact: values are rationals and sqrt(d) is
handled by squaring, so a reported violation is never rounding noise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .core import Instance, bundle_value, kth_value, ordering_from_values
from .mms import DEFAULT_EXACT_CAP, mms_exact, mms_for_agent
from .n_agent import n_agent_allocate, run_n_agent_mechanism
from .predictions import NoiseSpec, OrderingPrediction, ValuesPrediction, perturb_to_distance
from .rng import SplitMix64
from .two_agent import (
    MECHANISM_NAMES,
    allocate_named,
    balanced_round_robin,
    pad_nonempty,
    plant,
    prepare_named,
    prediction_ordering,
)


@dataclass
class PropertyReport:
    name: str
    tested: int = 0
    violations: list = field(default_factory=list)
    seed: Optional[int] = None
    params: dict = field(default_factory=dict)
    budget_exhausted: bool = False
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def record(self, **info) -> None:
        if len(self.violations) < 100:
            self.violations.append(info)
        else:
            self.budget_exhausted = True

    def to_json(self) -> dict:
        return {
            "property": self.name,
            "tested": self.tested,
            "passed": self.passed,
            "violations": self.violations,
            "seed": self.seed,
            "params": {k: str(v) for k, v in self.params.items()},
            "budget_exhausted": self.budget_exhausted,
            "notes": self.notes,
        }


# ---------------------------------------------------------------------------
# instance and prediction sampling
# ---------------------------------------------------------------------------

def sample_grid_instance(gen: SplitMix64, n: int, m: int, grid=range(4)) -> Instance:
    grid = list(grid)
    return Instance([[gen.choice(grid) for _ in range(m)] for _ in range(n)])


def sample_positive_instance(gen: SplitMix64, n: int, m: int, hi: int = 9) -> Instance:
    """Random integer values 0..hi with at least one positive per agent."""
    rows = []
    for _ in range(n):
        row = [gen.randint(0, hi) for _ in range(m)]
        if not any(row):
            row[gen.randrange(m)] = gen.randint(1, hi)
        rows.append(row)
    return Instance(rows)


def permutation_panel(gen: SplitMix64, m: int, size: int) -> list:
    perms = []
    for _ in range(size):
        p = list(range(m))
        gen.shuffle(p)
        perms.append(tuple(p))
    return perms


def values_along_ordering(ordering: Sequence[int], magnitudes: Sequence) -> tuple:
    """Value vector whose induced order equals ``ordering``; magnitudes are
    assigned best-first."""
    out = [0] * len(ordering)
    for level, item in enumerate(ordering):
        out[item] = magnitudes[level]
    return tuple(out)


def ordering_profile(perm_pair) -> tuple:
    return tuple(OrderingPrediction(p) for p in perm_pair)


def value_profile(perm_pair, m: int) -> tuple:
    mags = list(range(m, 0, -1))
    return tuple(ValuesPrediction(values_along_ordering(p, mags)) for p in perm_pair)


def profile_for(name: str, perm_pair, m: int) -> tuple:
    if name in ("B-RR-PAS", "1-2-RR-PAS"):
        return ordering_profile(perm_pair)
    return value_profile(perm_pair, m)


def accurate_profile(name: str, inst: Instance) -> tuple:
    if name in ("B-RR-PAS", "1-2-RR-PAS"):
        return tuple(OrderingPrediction(ordering_from_values(row)) for row in inst.valuations)
    return tuple(ValuesPrediction(row) for row in inst.valuations)


def adversarial_orderings(gen: SplitMix64, inst: Instance, agent: int, extra_random: int = 2) -> list:
    """Truth, reversed truth, identity, and a few uniform draws."""
    truth = ordering_from_values(inst.valuations[agent])
    outs = [truth, tuple(reversed(truth)), tuple(range(inst.m_items))]
    for _ in range(extra_random):
        p = list(range(inst.m_items))
        gen.shuffle(p)
        outs.append(tuple(p))
    return outs


def adversarial_profiles(gen: SplitMix64, inst: Instance, name: str) -> list:
    """Cartesian pairing is too wide; pair the per-agent lists positionally
    plus the all-important (reverse, reverse) profile."""
    m = inst.m_items
    lists = [adversarial_orderings(gen, inst, i) for i in range(inst.n_agents)]
    pairs = list(zip(*lists))
    pairs.append(tuple(tuple(reversed(ordering_from_values(inst.valuations[i])))
                       for i in range(inst.n_agents)))
    profiles = []
    for pair in pairs:
        if name in ("B-RR-PAS", "1-2-RR-PAS" ) or name == "n-agent-orderings":
            profiles.append(tuple(OrderingPrediction(p) for p in pair))
        else:
            profiles.append(tuple(
                ValuesPrediction(values_along_ordering(
                    pair[i], sorted(inst.valuations[i], reverse=True)))
                for i in range(inst.n_agents)))
    return profiles


# ---------------------------------------------------------------------------
# truthfulness
# ---------------------------------------------------------------------------

def all_order_misreports(m: int):
    """Every preference-order report. The mechanisms read reports only
    through argmax queries, so this space is exhaustive."""
    return itertools.permutations(range(m))


def fuzz_truthfulness(run_with_reports: Callable, inst: Instance, predictions,
                      report: PropertyReport, misreport_budget: Optional[int] = None,
                      stop_on_violation: bool = False) -> bool:
    """Exhaustively try order misreports of each agent against truthful peers.

    ``run_with_reports(reports) -> bundles`` must capture the instance and
    predictions. Returns True when a violation was found (and recorded).
    """
    n = inst.n_agents
    m = inst.m_items
    truthful = tuple(OrderingPrediction(ordering_from_values(row)) for row in inst.valuations)
    base_bundles = run_with_reports(truthful)
    found = False
    for agent in range(n):
        base_utility = bundle_value(inst, agent, base_bundles[agent])
        misreports = all_order_misreports(m)
        if misreport_budget is not None:
            misreports = itertools.islice(misreports, misreport_budget)
        for lie in misreports:
            reports = list(truthful)
            reports[agent] = OrderingPrediction(lie)
            bundles = run_with_reports(tuple(reports))
            report.tested += 1
            lie_utility = bundle_value(inst, agent, bundles[agent])
            if lie_utility > base_utility:
                found = True
                report.record(
                    agent=agent,
                    misreport=list(lie),
                    truthful_value=str(base_utility),
                    lying_value=str(lie_utility),
                    valuations=[[str(v) for v in row] for row in inst.valuations],
                )
                if stop_on_violation:
                    return True
    return found


def fuzz_two_agent(name: str, truths: int = 30, panel: int = 50, seed: int = 0,
                   m_choices=(2, 3, 4, 5), epsilon=Fraction(1, 4),
                   runner_factory: Optional[Callable] = None,
                   stop_on_violation: bool = False) -> PropertyReport:
    """Truthfulness fuzz for one named two-agent mechanism (or a mutant).

    ``runner_factory(inst, predictions) -> (reports -> bundles)`` defaults to
    the real prepared mechanism; mutants plug in here.  With
    ``stop_on_violation`` the report's ``tested`` count is the number of
    trials needed to expose the first violation.
    """
    rep = PropertyReport(f"truthfulness[{name}]", seed=seed,
                         params={"truths": truths, "panel": panel})
    gen = SplitMix64(seed).derive("fuzz", name)
    panels = {m: permutation_panel(gen.derive("panel", m), m, panel)
              for m in m_choices}  # one fixed prediction panel per item count
    for t in range(truths):
        m = gen.choice(list(m_choices))
        inst = sample_grid_instance(gen.derive("truth", t), 2, m)
        perms = panels[m]
        for idx in range(panel):
            pair = (perms[idx], perms[(idx * 7 + 3) % panel])
            predictions = profile_for(name if runner_factory is None else "B-RR-PAS",
                                      pair, m)
            if runner_factory is None:
                state = prepare_named(name, m, predictions, seed=gen.randint(0, 2**32),
                                      epsilon=epsilon)
                runner = lambda reports: state.steal(reports).bundles()
            else:
                runner = runner_factory(inst, predictions)
            hit = fuzz_truthfulness(runner, inst, predictions, rep,
                                    stop_on_violation=stop_on_violation)
            if hit and stop_on_violation:
                return rep
    return rep


def mutant_plant_by_reports(inst: Instance, predictions):
    """Broken framework: the planting step reads reports, so the planted item
    (and with it both bundles) depends on the planter's own report."""
    m = inst.m_items
    orders = tuple(prediction_ordering(p, m) for p in predictions)

    def run(reports):
        a1, a2 = balanced_round_robin(range(m), orders)
        a1, a2 = pad_nonempty(a1, a2, predictions, m)
        return plant((a1, a2)[0], (a1, a2)[1], reports, m).steal(reports).bundles()

    return run


def fuzz_n_agent(trials: int = 10_000, n: int = 3, seed: int = 0,
                 m_choices=(3, 4, 5), cap: int = DEFAULT_EXACT_CAP) -> PropertyReport:
    """Sampled misreport fuzz for the n-agent mechanism."""
    rep = PropertyReport("truthfulness[n-agent]", seed=seed,
                         params={"trials": trials, "n": n})
    gen = SplitMix64(seed).derive("fuzz-n")
    done = 0
    case = 0
    while done < trials:
        case += 1
        m = gen.choice(list(m_choices))
        inst = sample_grid_instance(gen.derive("truth", case), n, m)
        perms = permutation_panel(gen.derive("panel", case), m, n)
        predictions = tuple(
            ValuesPrediction(values_along_ordering(perms[i], list(range(m, 0, -1))))
            for i in range(n))

        def runner(reports):
            bundles, _ = n_agent_allocate(inst, predictions, reports, cap=cap)
            return bundles

        before = rep.tested
        fuzz_truthfulness(runner, inst, predictions, rep)
        done += rep.tested - before
    return rep


# ---------------------------------------------------------------------------
# consistency / robustness
# ---------------------------------------------------------------------------

def check_consistency(name: str, gamma, instances: Sequence[Instance],
                      epsilon=Fraction(1, 4), cap: int = DEFAULT_EXACT_CAP,
                      seed: Optional[int] = None) -> PropertyReport:
    """Accurate predictions: every agent must reach their share over gamma."""
    from .two_agent import run_named_mechanism

    gamma = Fraction(gamma) if not isinstance(gamma, Fraction) else gamma
    rep = PropertyReport(f"consistency[{name}]", seed=seed, params={"gamma": gamma})
    for inst in instances:
        predictions = accurate_profile(name, inst)
        if name == "n-agent":
            out, _ = run_n_agent_mechanism(inst, predictions, cap=cap)
        else:
            out = run_named_mechanism(name, inst, predictions, epsilon=epsilon, cap=cap)
        rep.tested += 1
        if out.mu_method != "exact":
            rep.notes.append("heuristic share used; lower-bound check only")
        for i in range(inst.n_agents):
            if out.values[i] * gamma < out.mu[i]:
                rep.record(agent=i, value=str(out.values[i]), mu=str(out.mu[i]),
                           valuations=[[str(v) for v in row] for row in inst.valuations])
    return rep


def check_robustness(name: str, beta_of_m: Callable[[int], Fraction],
                     instances: Sequence[Instance], seed: int = 0, k_of_n=None,
                     epsilon=Fraction(1, 4), cap: int = DEFAULT_EXACT_CAP,
                     skip_allocation=None) -> PropertyReport:
    """Adversarial predictions: size-based ratio plus the top-rank guarantees.

    Shares are computed once per (instance, agent) and reused across the
    prediction profiles.  ``skip_allocation(inst, bundles)`` may veto the
    ratio check for degenerate cases while the structural rank check still
    runs (unused by default).
    """
    from .two_agent import run_named_mechanism

    rep = PropertyReport(f"robustness[{name}]", seed=seed, params={})
    gen = SplitMix64(seed).derive("robust", name)
    for inst in instances:
        n, m = inst.n_agents, inst.m_items
        k = k_of_n(n) if k_of_n else n
        beta = Fraction(beta_of_m(m))
        mu_cache = [mms_for_agent(inst, i, k, cap=cap).mu for i in range(n)]
        rank_cap = 2 if name != "n-agent" else (3 * n + 1) // 2
        needed = [kth_value(inst.valuations[i], rank_cap) for i in range(n)]
        for predictions in adversarial_profiles(gen, inst, name):
            rep.tested += 1
            if name == "n-agent":
                bundles, _ = n_agent_allocate(inst, predictions, cap=cap)
            else:
                bundles = allocate_named(name, inst, predictions, epsilon=epsilon,
                                         cap=cap).bundles()
            values = [bundle_value(inst, i, bundles[i]) for i in range(n)]
            for i in range(n):
                if beta > 0 and values[i] * beta < mu_cache[i]:
                    rep.record(kind="ratio", agent=i, value=str(values[i]),
                               mu_k=str(mu_cache[i]), beta=str(beta),
                               valuations=[[str(v) for v in row] for row in inst.valuations],
                               bundles=[sorted(b) for b in bundles])
                best = max((inst.value(i, j) for j in bundles[i]), default=Fraction(0))
                if best < needed[i]:
                    rep.record(kind="top-rank", agent=i, rank_cap=rank_cap,
                               best=str(best), needed=str(needed[i]),
                               valuations=[[str(v) for v in row] for row in inst.valuations])
    return rep


# ---------------------------------------------------------------------------
# noise degradation
# ---------------------------------------------------------------------------

def _ratio_within_sqrt_bound(mu: Fraction, value: Fraction, d: int) -> bool:
    """value * (2*sqrt(d) + 6) >= mu, exactly."""
    rest = mu - 6 * value
    if rest <= 0:
        return True
    return rest * rest <= 4 * d * value * value


def check_noise_curve(m_values=(8, 10, 12), instances_per_d: int = 200,
                      seed: int = 0, d_values=None,
                      cap: int = DEFAULT_EXACT_CAP) -> PropertyReport:
    """Noise sweep for the balanced-round-robin mechanism.

    For each distance d both agents' predicted orders sit at exactly d from
    the truth.  Checks the multiplicative 2*sqrt(d)+6 bound on final values
    and the additive sqrt(d) bound on per-threshold counts between the
    procedure's bundles and the even-ranked reference set.
    """
    from .two_agent import run_named_mechanism

    rep = PropertyReport("noise-curve[B-RR-PAS]", seed=seed,
                         params={"instances_per_d": instances_per_d})
    gen = SplitMix64(seed).derive("noise")
    for m in m_values:
        dmax = m * (m - 1) // 2
        ds = d_values if d_values is not None else range(dmax + 1)
        for d in ds:
            if d > dmax:
                continue
            for t in range(instances_per_d):
                g = gen.derive(m, d, t)
                # distinct values: order distance equals the value-pair distance
                vals = []
                for _ in range(2):
                    row = list(range(1, 3 * m, 3))
                    g.shuffle(row)
                    vals.append(row)
                inst = Instance(vals)
                preds = []
                for i in range(2):
                    base = ordering_from_values(inst.valuations[i])
                    noisy = perturb_to_distance(base, NoiseSpec(d, g.derive("p", i).next_u64()))
                    preds.append(OrderingPrediction(noisy))
                preds = tuple(preds)
                out = run_named_mechanism("B-RR-PAS", inst, preds, cap=cap)
                rep.tested += 1
                for i in range(2):
                    if not _ratio_within_sqrt_bound(out.mu[i], out.values[i], d):
                        rep.record(kind="ratio", m=m, d=d, agent=i,
                                   mu=str(out.mu[i]), value=str(out.values[i]),
                                   valuations=[[str(v) for v in row] for row in inst.valuations])
                # per-threshold count bound for the procedure's own bundles
                orders = tuple(p.ranking for p in preds)
                a = balanced_round_robin(range(m), orders)
                for i in range(2):
                    row = inst.valuations[i]
                    true_order = ordering_from_values(row)
                    reference = [true_order[r] for r in range(1, m, 2)]
                    for tau in sorted({row[j] for j in range(m)}):
                        c_bundle = sum(1 for j in a[i] if row[j] >= tau)
                        c_ref = sum(1 for j in reference if row[j] >= tau)
                        gap = c_ref - c_bundle
                        if gap > 0 and gap * gap > d:
                            rep.record(kind="threshold", m=m, d=d, agent=i,
                                       tau=str(tau), gap=gap,
                                       valuations=[[str(v) for v in row_] for row_ in inst.valuations])
    return rep
