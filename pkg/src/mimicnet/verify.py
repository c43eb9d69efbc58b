"""Brute-force checks used as ground truth by the tests and the CLI.

Everything here enumerates terminal bipartitions explicitly and is therefore
guarded by a terminal-count limit; past it the functions refuse instead of
running for hours.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import GuardRefusal, InputError
from .flow import EdgeCutOracle, VertexCutOracle
from .graph import Multigraph, check_terminals, contract_edges
from .matroid import LinearRep, batch_independent, make_rng

MAX_TERMINALS = 20


def bipartitions(T: Sequence, guard: int = MAX_TERMINALS) -> Iterator[tuple[tuple, tuple]]:
    """All ``(S, T - S)`` with ``T[0]`` in ``S``, in increasing bitmask order
    over ``T[1:]``.  ``S = T`` (the trivial cut) comes last."""
    T = tuple(T)
    if len(T) > guard:
        raise GuardRefusal(f"{len(T)} terminals exceed the enumeration guard of {guard}")
    if not T:
        return
    rest = T[1:]
    for mask in range(1 << len(rest)):
        S = (T[0],) + tuple(t for i, t in enumerate(rest) if mask >> i & 1)
        yield S, tuple(t for i, t in enumerate(rest) if not mask >> i & 1)


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    checked: int
    failing: tuple | None = None  # first S where the capped cuts differ
    values: tuple | None = None  # (value in G, value in H), capped at c


def tc_equivalent(G: Multigraph, H: Multigraph, T: Sequence[int], c: int,
                  guard: int = MAX_TERMINALS) -> EquivalenceReport:
    """Do ``G`` and ``H`` agree on ``min(mincut(S, T - S), c)`` for every ``S``?"""
    T = check_terminals(G, T)
    check_terminals(H, T)
    og, oh = EdgeCutOracle(G), EdgeCutOracle(H)
    checked = 0
    for S, R in bipartitions(T, guard):
        checked += 1
        a = og.query(S, R, c).capped(c)
        b = oh.query(S, R, c).capped(c)
        if a != b:
            return EquivalenceReport(False, checked, S, (a, b))
    return EquivalenceReport(True, checked)


@dataclass(frozen=True)
class CoverReport:
    covers: bool
    checked: int
    failing: tuple | None = None


def covers_all_c_cuts(G: Multigraph, T: Sequence[int], F: Iterable[int], c: int, *,
                      method: str = "enumerate", budget: int = 2_000_000,
                      guard: int = MAX_TERMINALS) -> CoverReport:
    """Does ``F`` contain a minimum cut for every terminal cut of value <= ``c``?

    ``method="enumerate"`` tries every ``lambda``-subset of ``F`` (refusing when
    more than ``budget`` subsets would be needed); ``method="contract"``
    contracts the edges outside ``F`` and compares the cut value.
    """
    T = check_terminals(G, T)
    F = frozenset(F)
    if not F <= G.edges.keys():
        raise InputError("F contains unknown edge ids")
    if method not in ("enumerate", "contract"):
        raise InputError(f"unknown method {method!r}")
    og = EdgeCutOracle(G)
    if method == "contract":
        H, vmap = contract_edges(G, G.edges.keys() - F)
        oh = EdgeCutOracle(H)
    Fs = sorted(F)
    checked = 0
    for S, R in bipartitions(T, guard):
        lam = og.query(S, R, c).value
        if lam is None or lam == 0:
            continue
        checked += 1
        if method == "contract":
            A, B = {vmap[v] for v in S}, {vmap[v] for v in R}
            ok = not A & B and oh.query(A, B, lam).value == lam
        else:
            if comb(len(Fs), lam) > budget:
                raise GuardRefusal(f"C({len(Fs)}, {lam}) subsets exceed the budget of {budget}")
            ok = any(_separates(G, S, R, set(X)) for X in combinations(Fs, lam))
        if not ok:
            return CoverReport(False, checked, S)
    return CoverReport(True, checked)


def _separates(G: Multigraph, S, R, removed: set) -> bool:
    target = set(R)
    seen = set(S)
    stack = list(S)
    while stack:
        u = stack.pop()
        for eid in G.incident(u):
            if eid in removed:
                continue
            w = G.other_end(eid, u)
            if w in target:
                return False
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return True


def essential_vertices_bruteforce(digraph: Mapping, terminals: Sequence, c: int,
                                  candidates: Iterable | None = None, *,
                                  method: str = "residual",
                                  guard: int = MAX_TERMINALS) -> frozenset:
    """Vertices that lie in every minimum vertex cut of some terminal
    bipartition with cut value at most ``c``.

    ``digraph`` may also be a ``SplitGraph``, in which case ``candidates``
    defaults to its split vertices.  Otherwise ``candidates`` restricts the
    answer (default: every vertex).  The
    ``"recompute"`` method re-solves each cut with the vertex made uncuttable;
    ``"residual"`` reads the same answer off one residual network.
    """
    if hasattr(digraph, "split"):  # a SplitGraph: candidates default to its split vertices
        if candidates is None:
            candidates = list(digraph.split.values())
        digraph = digraph.digraph
    oracle = VertexCutOracle(digraph)
    pool = list(digraph) if candidates is None else list(candidates)
    found = set()
    for S, R in bipartitions(tuple(terminals), guard):
        if not R:
            continue
        if method == "residual":
            val, ess = oracle.in_every_min_cut(S, R, c)
            if val:
                found |= ess & set(pool)
        elif method == "recompute":
            base = oracle.min_cut(S, R, c).value
            if not base:
                continue
            for v in pool:
                if v not in found and oracle.min_cut(S, R, base, uncuttable=[v]).exceeds:
                    found.add(v)
        else:
            raise InputError(f"unknown method {method!r}")
    return frozenset(found)


@dataclass(frozen=True)
class OracleCheck:
    queries: int
    disagreements: int
    first: tuple | None = None


def gammoid_oracle_check(R: LinearRep, D: Mapping, T: Sequence, trials: int, seed=0,
                         max_size: int | None = None) -> OracleCheck:
    """Compare ``R`` with pure-Python max-flow on ``trials`` random subsets of
    its ground set."""
    rng = make_rng(seed)
    oracle = VertexCutOracle(D)
    T = tuple(T)
    ground = R.ground
    top = min(len(ground), max_size if max_size is not None else len(T) + 1)
    sets = []
    for _ in range(trials):
        size = int(rng.integers(1, top + 1))
        pick = rng.choice(len(ground), size=size, replace=False)
        sets.append([ground[i] for i in sorted(pick)])
    mine = batch_independent(R, sets)
    bad, first = 0, None
    for X, ok in zip(sets, mine):
        truth = oracle.disjoint_paths(T, X) == len(X)
        if ok != truth:
            bad += 1
            first = first or tuple(X)
    return OracleCheck(len(sets), bad, first)


def augmentation_witness(D_in: Mapping, D_out: Mapping, sink_copy, source_copy,
                         A, B, v, C) -> bool:
    """Are there ``|C| + 1`` disjoint paths from ``A`` into ``C + v_in`` in
    ``D_in`` and from ``C + v_out`` into ``B`` in ``D_out``?"""
    C = set(C)
    k = len(C) + 1
    fwd = VertexCutOracle(D_in).disjoint_paths(A, C | {sink_copy})
    bwd = VertexCutOracle(D_out).disjoint_paths(C | {source_copy}, B)
    return fwd == k and bwd == k
