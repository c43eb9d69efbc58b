"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 input or configuration error,
3 guard refusal, 4 randomized-construction failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import InputError, MimicError, RandomizedConstructionError
from .field import MERSENNE_61, PrimeField
from .graph import from_weighted
from .graphio import atomic_write, format_graph, read_graph, relabel_for_output
from .instances import random_digraph, random_instance
from .matroid import gammoid_rep, make_rng
from .partition import DEFAULT_THRESHOLD
from .pipeline import BuildConfig, build_network
from .verify import MAX_TERMINALS, gammoid_oracle_check, tc_equivalent

log = logging.getLogger("mimicnet")


def _format_stats(stats: dict, skip=()) -> str:
    return "".join(f"{k}={v}\n" for k, v in stats.items() if k not in skip)


def _load(path, c):
    wg = read_graph(path)
    return wg, from_weighted(wg.edges, c, range(1, wg.n + 1))


def cmd_build(args) -> int:
    config = BuildConfig(c=args.c, mode=args.mode, oracle=args.oracle, seed=args.seed,
                         prime=args.prime, phi=args.phi, sigma=args.sigma,
                         enum_threshold=args.enum_threshold, batch_contract=args.batch_contract)
    config.validate()
    wg, G = _load(args.input, args.c)
    if not wg.terminals:
        raise InputError("the input lists no terminals")
    net = build_network(G, wg.terminals, config)
    H = net.graph
    out = relabel_for_output(H.vertices, (H.edges[e] for e in sorted(H.edges)), wg.terminals,
                             comments=[f"mimicking network c={args.c} mode={args.mode} "
                                       f"seed={args.seed}"])
    atomic_write(args.out, format_graph(out))
    if args.stats:
        atomic_write(args.stats, _format_stats(net.stats, skip=("wall_time",)))
    sys.stdout.write(_format_stats(net.stats))
    return 0


def _paired(G_file, H_file, c):
    """Load both graphs and rename the sparsifier's terminals to the
    original's, pairing them by the order of their ``t`` lines."""
    gw, G = _load(G_file, c)
    hw, _ = _load(H_file, c)
    if len(gw.terminals) != len(hw.terminals):
        raise InputError(f"terminal counts differ: {len(gw.terminals)} vs {len(hw.terminals)}")
    rename = dict(zip(hw.terminals, gw.terminals))
    nxt = gw.n + 1
    for v in range(1, hw.n + 1):
        if v not in rename:
            rename[v] = nxt
            nxt += 1
    H = from_weighted([(rename[u], rename[v], w) for u, v, w in hw.edges], c,
                      rename.values())
    return G, H, gw.terminals


def cmd_verify(args) -> int:
    G, H, T = _paired(args.original, args.sparsifier, args.c)
    rep = tc_equivalent(G, H, T, args.c, guard=args.max_terminals)
    print(f"equivalent={str(rep.equivalent).lower()}")
    print(f"bipartitions_checked={rep.checked}")
    if not rep.equivalent:
        print(f"failing_side={' '.join(map(str, rep.failing))}")
        print(f"cut_values={rep.values[0]},{rep.values[1]}")
        return 1
    return 0


def cmd_stats(args) -> int:
    wg = read_graph(args.input)
    stats = {
        "vertices": wg.n,
        "edges": len(wg.edges),
        "terminals": len(wg.terminals),
        "total_weight": sum(w for _, _, w in wg.edges),
    }
    if args.c is not None:
        G = from_weighted(wg.edges, args.c, range(1, wg.n + 1))
        stats["unit_edges_capped"] = G.m
    degree = {v: 0 for v in range(1, wg.n + 1)}
    for u, v, w in wg.edges:
        if u != v:
            degree[u] += w
            degree[v] += w
    stats["max_weighted_degree"] = max(degree.values(), default=0)
    stats["isolated_vertices"] = sum(1 for d in degree.values() if d == 0)
    sys.stdout.write(_format_stats(stats))
    return 0


def run_selftest(seed: int = 0, trials: int = 10, prime: int = MERSENNE_61) -> dict:
    """Small randomized end-to-end check.  Declared failures (exceptions the
    library raises on purpose) are counted apart from silent wrong answers."""
    rng = make_rng([seed, 7])
    summary = {"seed": seed, "prime": prime, "trials": trials,
               "equivalence_checks": 0, "equivalence_failures": 0,
               "gammoid_queries": 0, "gammoid_disagreements": 0,
               "gammoid_rerandomizations": 0, "declared_failures": 0}
    fld = PrimeField(prime)
    for i in range(trials):
        inst = random_instance(rng, n_max=12, m_max=24, k_max=5, c_values=(1, 2, 3))
        G = inst.graph()
        for mode in ("existence", "expander"):
            config = BuildConfig(c=inst.c, mode=mode, seed=seed + i, prime=prime)
            try:
                net = build_network(G, inst.terminals, config)
            except (RandomizedConstructionError, InputError) as exc:
                log.warning("declared failure: %s", exc)
                summary["declared_failures"] += 1
                continue
            summary["equivalence_checks"] += 1
            if not tc_equivalent(G, net.graph, inst.terminals, inst.c).equivalent:
                summary["equivalence_failures"] += 1
        D = random_digraph(rng, int(rng.integers(4, 13)))
        T = [int(x) for x in rng.choice(len(D), size=int(rng.integers(1, 4)), replace=False)]
        try:
            R = gammoid_rep(D, T, [seed, i], field=fld, queries=50)
        except RandomizedConstructionError as exc:
            log.warning("declared failure: %s", exc)
            summary["declared_failures"] += 1
            continue
        summary["gammoid_rerandomizations"] += R.rerandomizations
        chk = gammoid_oracle_check(R, D, T, 50, [seed, i, 1])
        summary["gammoid_queries"] += chk.queries
        summary["gammoid_disagreements"] += chk.disagreements
    silent = summary["equivalence_failures"] + summary["gammoid_disagreements"]
    summary["status"] = "pass" if silent == 0 else "fail"
    return summary


def cmd_selftest(args) -> int:
    summary = run_selftest(args.seed, args.trials, args.prime)
    sys.stdout.write(_format_stats(summary))
    return 0 if summary["status"] == "pass" else 1


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mimicnet", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a mimicking network")
    b.add_argument("input")
    b.add_argument("--c", type=int, required=True)
    b.add_argument("--mode", choices=("existence", "expander"), default="existence")
    b.add_argument("--oracle", choices=("exact", "spectral"), default="exact")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--prime", type=int, default=MERSENNE_61)
    b.add_argument("--phi", type=float, default=None)
    b.add_argument("--sigma", type=float, default=1.0)
    b.add_argument("--enum-threshold", type=int, default=DEFAULT_THRESHOLD)
    b.add_argument("--batch-contract", action="store_true",
                   help="experimental: contract all non-candidates per round")
    b.add_argument("--out", required=True)
    b.add_argument("--stats", default=None, help="also write the statistics here")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check (T, c)-equivalence of two graph files")
    v.add_argument("original")
    v.add_argument("sparsifier")
    v.add_argument("--c", type=int, required=True)
    v.add_argument("--max-terminals", type=int, default=MAX_TERMINALS)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", help="print graph statistics")
    s.add_argument("input")
    s.add_argument("--c", type=int, default=None)
    s.set_defaults(func=cmd_stats)

    t = sub.add_parser("selftest", help="run a small randomized self-check")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--trials", type=int, default=10)
    t.add_argument("--prime", type=int, default=MERSENNE_61)
    t.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except MimicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
