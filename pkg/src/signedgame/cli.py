"""Command line entry point: ``signedgame {gen,inspect,simulate,verify,experiment}``.

Exit status: 0 success, 1 a verification check failed, 2 bad invocation or input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import dynamics, experiments, game, oracle
from .game import Variant
from .network import (
    NetworkError,
    SignedNetwork,
    all_negative,
    all_positive,
    clustering_partition,
    deserialize,
    is_structurally_balanced,
    num_pairs,
    pair_index,
    serialize,
    triad_census,
)

PRESETS = ("all-positive", "all-negative", "paper-counterexample", "one-triad-example")


class UsageError(Exception):
    pass


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _read_network(path: str) -> SignedNetwork:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read network file {path!r}: {exc.strerror}") from None
    try:
        return deserialize(text)
    except NetworkError as exc:
        raise UsageError(f"invalid network file {path!r}: {exc}") from None


def _read_weights(path: str, n: int) -> np.ndarray:
    """Weights document: ``{"n": n, "weights": [[i, j, w], ...]}`` covering every pair."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read weights file {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed weights file {path!r}: {exc}") from None
    if not isinstance(doc, dict) or doc.get("n") != n or not isinstance(doc.get("weights"), list):
        raise UsageError(f"weights file must have 'n' = {n} and a 'weights' list")
    w = np.full(num_pairs(n), np.nan)
    try:
        for i, j, val in doc["weights"]:
            w[pair_index(n, int(i), int(j))] = float(val)
    except (ValueError, TypeError, NetworkError) as exc:
        raise UsageError(f"bad weights entry: {exc}") from None
    if np.isnan(w).any():
        raise UsageError("weights file must give a weight for every pair")
    if (w <= 0).any():
        raise UsageError("every pair weight must be > 0")
    return w


def _seed_or_fresh(seed: int | None) -> int:
    if seed is not None:
        if not 0 <= seed < 2**64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        return seed
    fresh = int(np.random.SeedSequence().entropy) % 2**64
    print(f"seed: {fresh}", file=sys.stderr)
    return fresh


# -- subcommands -------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.preset and args.random:
        raise UsageError("choose either --preset or --random")
    if args.random:
        if args.n is None:
            raise UsageError("--random needs --n")
        seed = _seed_or_fresh(args.seed)
        try:
            G = experiments.random_network(args.n, args.p, dynamics.make_rng(seed))
        except (ValueError, NetworkError) as exc:
            raise UsageError(str(exc)) from None
    else:
        preset = args.preset or "all-positive"
        if preset == "paper-counterexample":
            if args.n not in (None, 6):
                raise UsageError("paper-counterexample has n=6")
            G = oracle.paper_counterexample()
        elif preset == "one-triad-example":
            if args.n not in (None, 3):
                raise UsageError("one-triad-example has n=3")
            # x01 = x02 = +1, x12 = -1
            G = SignedNetwork(3, [1, 1, -1])
        else:
            if args.n is None:
                raise UsageError(f"preset {preset} needs --n")
            try:
                G = all_positive(args.n) if preset == "all-positive" else all_negative(args.n)
            except NetworkError as exc:
                raise UsageError(str(exc)) from None
    _write(serialize(G), args.out)
    return 0


def inspect_document(G: SignedNetwork, variant: Variant) -> dict:
    edges = []
    for i, j, s in G.edges():
        st = game.edge_stats(G, i, j)
        edges.append({
            "i": i, "j": j, "sign": s,
            "delta_b": st.delta_b, "delta_u": st.delta_u, "delta_n": st.delta_n,
            "lambda": st.lam, "p_count": st.p_count, "n_count": st.n_count,
            "utility": game.utility_from_stats(st, s, variant),
            "influence": dynamics.influence_value(G, i, j, variant),
        })
    census = triad_census(G)
    part = clustering_partition(G)
    return {
        "n": G.n,
        "variant": variant.value,
        "edges": edges,
        "triads": {c.value: v for c, v in census.items()},
        "dissonance": game.dissonance(G, variant),
        "social_welfare": game.social_welfare(G, variant),
        "nash": game.is_nash(G, variant),
        "efficient": game.is_efficient(G, variant),
        "clustering_balanced": part is not None,
        "structurally_balanced": is_structurally_balanced(G),
        "clusters": None if part is None else part.clusters(),
    }


def cmd_inspect(args) -> int:
    G = _read_network(args.network)
    doc = inspect_document(G, Variant.parse(args.variant))
    if args.format == "json":
        _write(json.dumps(doc, indent=2) + "\n", args.out)
        return 0
    cols = ["i", "j", "sign", "delta_b", "delta_u", "delta_n", "lambda",
            "p_count", "n_count", "utility", "influence"]
    lines = ["  ".join(f"{c:>8}" for c in cols)]
    for e in doc["edges"]:
        lines.append("  ".join(f"{e[c]:>8}" for c in cols))
    for key in ("n", "variant", "triads", "dissonance", "social_welfare", "nash", "efficient",
                "clustering_balanced", "structurally_balanced", "clusters"):
        lines.append(f"{key}: {doc[key]}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def simulate_document(G0: SignedNetwork, seed: int, variant: Variant, max_steps: int | None,
                      weights=None) -> dict:
    selector = dynamics.EdgeSelector(G0.n, seed=seed, weights=weights)
    budget = max_steps if max_steps is not None else dynamics.default_max_steps(G0, variant)
    out = dynamics.run(G0, selector, variant, budget)
    return {
        "seed": seed,
        "variant": variant.value,
        "max_steps": budget,
        "absorbed": out.absorbed,
        "steps": out.steps_taken,
        "flips": out.flips,
        "final_cluster_count": out.final_cluster_count,
        "dissonance_trace": out.dissonance_trace,
        "final_network": json.loads(serialize(out.final_network)),
    }


def cmd_simulate(args) -> int:
    G0 = _read_network(args.network)
    if args.max_steps is not None and args.max_steps < 1:
        raise UsageError("--max-steps must be >= 1")
    weights = _read_weights(args.weights, G0.n) if args.weights else None
    seed = _seed_or_fresh(args.seed)
    doc = simulate_document(G0, seed, Variant.parse(args.variant), args.max_steps, weights)
    _write(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    try:
        report = oracle.verify_theorems(args.n_max, Variant.parse(args.variant),
                                        allow_n7=args.allow_n7, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write(report.to_text())
    if args.json:
        _write(json.dumps(report.to_dict(), indent=2) + "\n", args.json)
    return 0 if report.passed else 1


def cmd_experiment(args) -> int:
    seed = _seed_or_fresh(args.seed)
    try:
        cfg = experiments.ExperimentConfig(
            n_min=args.n_min, n_max=args.n_max, trials=args.trials, p_positive=args.p,
            master_seed=seed, variant=Variant.parse(args.variant), step_factor=args.step_factor,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    progress = (lambda n: print(f"n={n} done", file=sys.stderr)) if args.verbose else None
    report = experiments.run_experiment(cfg, jobs=args.jobs, progress=progress)
    _write(experiments.emit_report(report, args.format), args.out)
    if args.format == "csv" and args.out not in (None, "-"):
        Path(str(args.out) + ".config.json").write_text(experiments.config_document(cfg))
    return 0


# -- parser --------------------------------------------------------------------

def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="signedgame", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    variant_kw = dict(choices=[v.value for v in Variant], default="clustering",
                      help="game variant (default: clustering)")
    jobs_kw = dict(type=_positive_int, default=os.cpu_count() or 1,
                   help="worker processes (default: all CPUs); results do not depend on it")

    g = sub.add_parser("gen", help="write a preset or random network file")
    g.add_argument("--preset", choices=PRESETS)
    g.add_argument("--random", action="store_true", help="draw each sign +1 with probability --p")
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=float, default=0.5)
    g.add_argument("--seed", type=int, help="seed for --random (generated and printed if absent)")
    g.add_argument("--out", help="output path (default: stdout)")
    g.set_defaults(func=cmd_gen)

    i = sub.add_parser("inspect", help="per-edge statistics, utilities and balance flags")
    i.add_argument("--network", required=True)
    i.add_argument("--variant", **variant_kw)
    i.add_argument("--format", choices=["text", "json"], default="text")
    i.add_argument("--out")
    i.set_defaults(func=cmd_inspect)

    s = sub.add_parser("simulate", help="run the dynamics from a network file")
    s.add_argument("--network", required=True)
    s.add_argument("--seed", type=int, help="selector seed (generated and printed if absent)")
    s.add_argument("--variant", **variant_kw)
    s.add_argument("--max-steps", type=int,
                   help="step budget (default: 50 * C(n,2) * (initial dissonance + 1))")
    s.add_argument("--weights", help='pair weights file {"n": n, "weights": [[i, j, w], ...]}')
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="exhaustive checks of the static results")
    v.add_argument("--n-max", type=int, required=True, help="largest node count (3..6)")
    v.add_argument("--variant", **variant_kw)
    v.add_argument("--allow-n7", action="store_true", help="permit --n-max 7 (2^21 networks)")
    v.add_argument("--json", help="also write the machine-readable report here")
    v.add_argument("--jobs", **jobs_kw)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="seeded Monte Carlo success rates")
    e.add_argument("--n-min", type=int, required=True)
    e.add_argument("--n-max", type=int, required=True)
    e.add_argument("--trials", type=_positive_int, default=2000)
    e.add_argument("--p", type=float, default=0.5, help="probability of an initial +1 sign")
    e.add_argument("--seed", type=int, help="master seed (generated and printed if absent)")
    e.add_argument("--variant", **variant_kw)
    e.add_argument("--step-factor", type=_positive_int, default=dynamics.STEP_FACTOR,
                   help="step budget factor in factor * C(n,2) * (C0 + 1)")
    e.add_argument("--format", choices=["csv", "json"], default="json")
    e.add_argument("--out", help="output path (default: stdout); CSV also writes PATH.config.json")
    e.add_argument("--jobs", **jobs_kw)
    e.add_argument("--verbose", action="store_true")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"signedgame {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"signedgame {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
