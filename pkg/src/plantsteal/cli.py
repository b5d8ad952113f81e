"""Command-line entry point.

Subcommands:

* ``mms`` — exact or heuristic maximin share of an agent from an instance file
* ``allocate`` — run a named mechanism (or the n-agent one) and print the
  allocation with its trace
* ``verify`` — run a property checker and exit 1 on any violation
* ``experiment`` — the synthetic sweep, written as CSV
* ``noise`` — sample a permutation at an exact Kendall tau distance

Exit codes: 0 ok, 1 property violation, 2 unreadable/invalid input file,
3 exact-share cap exceeded, 4 unknown mechanism or agent-count mismatch.

Instance files are JSON: ``{"n": int, "m": int, "valuations": [[...], ...],
"predictions": {"kind": "ordering"|"values"|"succinct", ...}}``.  Numbers in
valuations may be ints, decimal strings, or floats (read as decimals).
All randomness flows from ``--seed`` (a fixed default keeps runs
reproducible when the flag is omitted).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .core import Instance, as_fraction
from .mms import CapExceededError, DEFAULT_EXACT_CAP, mms_exact, mms_heuristic
from .n_agent import run_n_agent_mechanism
from .predictions import (
    DecodeError,
    NoiseSpec,
    OrderingPrediction,
    ValuesPrediction,
    kendall_tau,
    perturb_to_distance,
    prediction_from_json,
)
from .rng import DEFAULT_SEED
from .two_agent import (
    MECHANISM_NAMES,
    UnknownMechanismError,
    UnsupportedInstanceError,
    run_named_mechanism,
)

EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_MECHANISM = 4


class InputFileError(Exception):
    pass


def load_instance(path: str):
    """(Instance, predictions-or-None) from an instance JSON file."""
    try:
        with open(path) as fh:
            data = json.load(fh, parse_float=Fraction)
    except OSError as exc:
        raise InputFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFileError(f"{path} is not valid JSON: {exc}") from exc
    try:
        vals = data["valuations"]
        inst = Instance(vals)
        if "n" in data and int(data["n"]) != inst.n_agents:
            raise InputFileError(f"{path}: field n does not match the matrix")
        if "m" in data and int(data["m"]) != inst.m_items:
            raise InputFileError(f"{path}: field m does not match the matrix")
        preds = None
        if data.get("predictions") is not None:
            preds = parse_predictions(data["predictions"], inst)
        return inst, preds
    except InputFileError:
        raise
    except (KeyError, TypeError, ValueError, DecodeError) as exc:
        raise InputFileError(f"{path}: {exc}") from exc


def parse_predictions(obj, inst: Instance):
    kind = obj.get("kind")
    if kind == "ordering":
        rankings = obj["orderings"]
        return tuple(OrderingPrediction(r) for r in rankings)
    if kind == "values":
        return tuple(ValuesPrediction([as_fraction(v) for v in row])
                     for row in obj["values"])
    if kind == "succinct":
        enc = prediction_from_json(obj["encoding"])
        return tuple(enc for _ in range(inst.n_agents))
    raise InputFileError(f"unknown prediction kind {kind!r}")


def _fraction_str(x) -> str:
    return "inf" if x == math.inf else str(x)


def cmd_mms(args) -> int:
    try:
        inst, _ = load_instance(args.instance)
    except InputFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    values = inst.valuations[args.agent]
    try:
        if args.heuristic:
            res = mms_heuristic(values, args.k)
        else:
            res = mms_exact(values, args.k, cap=args.exact_cap)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    out = {
        "agent": args.agent,
        "k": args.k,
        "mu": _fraction_str(res.mu),
        "mu_float": float(res.mu),
        "method": res.method,
        "witness": [sorted(b) for b in res.witness_partition],
    }
    print(json.dumps(out, indent=2))
    return 0


def cmd_allocate(args) -> int:
    try:
        inst, preds = load_instance(args.instance)
    except InputFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if preds is None:
        print("error: instance file carries no predictions", file=sys.stderr)
        return EXIT_PARSE
    epsilon = as_fraction(args.epsilon)
    try:
        if args.mechanism == "n-agent":
            report, trace = run_n_agent_mechanism(inst, preds, cap=args.exact_cap)
            out = report.to_json()
            out["trace"] = trace.to_json()
        else:
            report = run_named_mechanism(args.mechanism, inst, preds,
                                         seed=args.seed, epsilon=epsilon,
                                         cap=args.exact_cap)
            out = report.to_json()
    except (UnknownMechanismError, UnsupportedInstanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MECHANISM
    print(json.dumps(out, indent=2))
    return 0


def cmd_verify(args) -> int:
    from . import verify
    from .rng import SplitMix64

    gen = SplitMix64(args.seed)
    if args.property == "truthfulness":
        if args.mechanism == "n-agent":
            rep = verify.fuzz_n_agent(trials=args.budget, seed=args.seed)
        else:
            rep = verify.fuzz_two_agent(args.mechanism, truths=max(1, args.budget // 1000),
                                        panel=20, seed=args.seed)
    elif args.property == "consistency":
        instances = [verify.sample_positive_instance(gen.derive("c", t),
                                                     2 if args.mechanism != "n-agent" else 3,
                                                     gen.randint(2, 10))
                     for t in range(args.budget)]
        gamma = {"B-RR-PAS": Fraction(2), "1-2-RR-PAS": Fraction(3, 2),
                 "WF-PAS": Fraction(4), "CB-PAS": Fraction(9, 4),
                 "n-agent": Fraction(2)}.get(args.mechanism, Fraction(2))
        rep = verify.check_consistency(args.mechanism, gamma, instances, seed=args.seed)
    elif args.property == "robustness":
        instances = [verify.sample_positive_instance(gen.derive("r", t), 2,
                                                     gen.randint(2, 10))
                     for t in range(args.budget)]
        beta = {"B-RR-PAS": lambda m: Fraction(math.ceil(m / 2)),
                "1-2-RR-PAS": lambda m: Fraction(max(2 * m // 3, 1)),
                "WF-PAS": lambda m: Fraction(max(m - 1, 1)),
                "CB-PAS": lambda m: Fraction(math.ceil(m / 2))}.get(
                    args.mechanism, lambda m: Fraction(max(m - 1, 1)))
        rep = verify.check_robustness(args.mechanism, beta, instances, seed=args.seed)
    else:  # noise
        rep = verify.check_noise_curve(m_values=(8,), instances_per_d=max(1, args.budget // 30),
                                       seed=args.seed)
    print(json.dumps(rep.to_json(), indent=2))
    return 0 if rep.passed else EXIT_VIOLATION


def cmd_experiment(args) -> int:
    from .experiments import SweepSpec, run_sweep, write_aggregate_csv, write_raw_csv

    spec = SweepSpec(
        distances=tuple(args.distances),
        epsilons=tuple(args.epsilons),
        profiles=args.profiles,
        predictions=args.predictions,
        modes=tuple(args.modes),
        m=args.m,
        seed=args.seed,
    )
    agg, raw = run_sweep(spec, keep_raw=args.raw, threads=args.threads)
    write_aggregate_csv(agg, args.out)
    print(f"wrote {len(agg)} aggregate rows to {args.out}")
    if args.raw:
        raw_path = args.out.rsplit(".", 1)[0] + "_raw.csv"
        write_raw_csv(raw, raw_path)
        print(f"wrote {len(raw)} raw rows to {raw_path}")
    return 0


def cmd_noise(args) -> int:
    base = tuple(args.base) if args.base else tuple(range(args.m))
    try:
        noisy = perturb_to_distance(base, NoiseSpec(args.d, args.seed))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    print(json.dumps({
        "base": list(base),
        "perturbed": list(noisy),
        "d": args.d,
        "check": kendall_tau(base, noisy),
        "seed": args.seed,
    }))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plantsteal",
        description="Truthful prediction-augmented mechanisms for maximin-share allocation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mms", help="maximin share of one agent")
    p.add_argument("instance")
    p.add_argument("--k", type=int, required=True, help="number of bundles")
    p.add_argument("--agent", type=int, default=0)
    p.add_argument("--heuristic", action="store_true")
    p.add_argument("--exact-cap", type=int, default=DEFAULT_EXACT_CAP)
    p.set_defaults(func=cmd_mms)

    p = sub.add_parser("allocate", help="run a mechanism on an instance file")
    p.add_argument("instance")
    p.add_argument("--mechanism", required=True,
                   help=f"one of {', '.join(MECHANISM_NAMES)} or n-agent")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--epsilon", default="0.25")
    p.add_argument("--exact-cap", type=int, default=DEFAULT_EXACT_CAP)
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("verify", help="run a property checker")
    p.add_argument("--property", required=True,
                   choices=("truthfulness", "consistency", "robustness", "noise"))
    p.add_argument("--mechanism", default="B-RR-PAS")
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="synthetic success-rate sweep")
    p.add_argument("--out", default="sweep.csv")
    p.add_argument("--profiles", type=int, default=100)
    p.add_argument("--predictions", type=int, default=20)
    p.add_argument("--m", type=int, default=100)
    p.add_argument("--distances", type=int, nargs="+",
                   default=[1, 5, 10, 20, 40, 80, 160, 320, 640, 1280, 2560])
    p.add_argument("--epsilons", nargs="+", default=["0.02", "0.05", "0.1"])
    p.add_argument("--modes", nargs="+", default=["correlated", "uncorrelated"],
                   choices=["correlated", "uncorrelated"])
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--raw", action="store_true", help="also write per-trial records")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("noise", help="permutation at an exact Kendall tau distance")
    p.add_argument("--m", type=int, default=100)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--base", type=int, nargs="*")
    p.set_defaults(func=cmd_noise)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
