"""Edge sets that contain a minimum cut for every small terminal cut.

Edge cuts of a graph whose terminals have degree one are turned into vertex
cuts of a *split graph*: each edge becomes a vertex, and each non-terminal
vertex becomes a clique of ``2c`` vertices, too large to be worth cutting.
Edges whose split vertex cannot lie in every minimum cut of any small terminal
cut are contracted one at a time until none remain.

Split-graph vertices are tagged tuples: ``("t", v)`` terminal, ``("e", id)``
split vertex of an edge, ``("k", v, i)`` clique member, ``("in", id)`` and
``("out", id)`` the sink-only and source-only copies of a split vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .errors import InputError
from .field import DEFAULT_FIELD, PrimeField
from .graph import Multigraph, check_terminals, contract_edges
from .matroid import gammoid_rep, make_rng, representative_set, truncate_rep, uniform_rep


@dataclass(frozen=True)
class SplitGraph:
    digraph: Mapping  # symmetric: every undirected edge appears as two arcs
    terminals: tuple  # ("t", v) in the order of the source terminal list
    split: Mapping[int, tuple]  # edge id -> split vertex
    cliques: Mapping[int, tuple]  # non-terminal vertex -> its clique
    c: int

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self.digraph.values()) // 2

    def terminal_edge_vertices(self) -> list:
        ts = set(self.terminals)
        return [x for x in self.split.values() if any(w in ts for w in self.digraph[x])]


def terminal_edges(G: Multigraph, T) -> list[int]:
    ts = set(T)
    return [e for e in G.edge_ids() if G.edges[e][0] in ts or G.edges[e][1] in ts]


def build_split_graph(G: Multigraph, T: Sequence[int], c: int) -> SplitGraph:
    """Split graph of ``G``.  Every terminal must have degree exactly one."""
    T = check_terminals(G, T)
    if c < 1:
        raise InputError("c must be positive")
    for t in T:
        if G.degree(t) != 1:
            raise InputError(f"terminal {t} has degree {G.degree(t)}, expected 1")
    ts = set(T)
    adj: dict = {}
    term = tuple(("t", t) for t in T)
    for x in term:
        adj[x] = []
    cliques = {}
    for v in sorted(G.vertices - ts):
        cliques[v] = tuple(("k", v, i) for i in range(2 * c))
        for x in cliques[v]:
            adj[x] = [y for y in cliques[v] if y != x]

    def attach(v):
        return [("t", v)] if v in ts else list(cliques[v])

    split = {}
    for eid in G.edge_ids():
        x = ("e", eid)
        split[eid] = x
        nbrs = []
        for v in G.edges[eid]:
            nbrs += attach(v)
        adj[x] = nbrs
        for y in nbrs:
            adj[y].append(x)
    return SplitGraph(adj, term, split, cliques, c)


@dataclass(frozen=True)
class Copies:
    sink: Mapping[tuple, tuple]  # split vertex -> copy with only in-arcs
    source: Mapping[tuple, tuple]  # split vertex -> copy with only out-arcs


def augment_copies(S: SplitGraph):
    """``(D_in, D_out, copies)``: the split graph plus a sink-only (resp.
    source-only) copy of every split vertex."""
    D_in = {v: list(ws) for v, ws in S.digraph.items()}
    D_out = {v: list(ws) for v, ws in S.digraph.items()}
    sink, source = {}, {}
    for eid, x in S.split.items():
        a, b = ("in", eid), ("out", eid)
        sink[x], source[x] = a, b
        D_in[a] = []
        for y in S.digraph[x]:  # symmetric, so out-neighbours are in-neighbours
            D_in[y].append(a)
        D_out[b] = list(S.digraph[x])
    return D_in, D_out, Copies(sink, source)


def reverse_digraph(D: Mapping) -> dict:
    R = {v: [] for v in D}
    for u, ws in D.items():
        for w in ws:
            R[w].append(u)
    return R


def _elimination_blocks(S: SplitGraph):
    """Pairwise non-adjacent groups for the gammoid solver: whichever of
    {split vertices} or {cliques} is larger is eliminated blockwise."""
    split_cost = len(S.split)
    clique_cost = sum(len(k) for k in S.cliques.values())
    if clique_cost >= split_cost:
        return [list(k) for k in S.cliques.values()]
    return [[x] for x in S.split.values()]


def essential_candidates(G: Multigraph, T: Sequence[int], c: int, d: int, seed=0, *,
                         field: PrimeField = DEFAULT_FIELD, queries: int = 200) -> frozenset:
    """Split vertices that may lie in every minimum cut of some terminal cut
    of value at most ``c`` whose smaller side has at most ``d`` terminals.

    The answer is a representative family of ``(v, v_in, v_out)`` triples over
    all split vertices, scanned with terminal-edge split vertices first, plus
    every terminal-edge split vertex (those edges are never contracted).
    """
    if d < c:
        raise InputError(f"d = {d} must be at least c = {c}")
    S = build_split_graph(G, T, c)
    D_in, D_out, cp = augment_copies(S)
    always = S.terminal_edge_vertices()
    first = set(always)
    inner = [x for x in S.split.values() if x not in first]
    if not inner:
        return frozenset(always)
    order = always + inner
    base = list(seed) if isinstance(seed, (tuple, list)) else [seed]
    blocks = _elimination_blocks(S)
    R1 = uniform_rep(order, c, field)
    R2 = gammoid_rep(D_in, S.terminals, base + [2], ground=[cp.sink[x] for x in order],
                     blocks=blocks, field=field, queries=queries)
    R3 = gammoid_rep(reverse_digraph(D_out), S.terminals, base + [3],
                     ground=[cp.source[x] for x in order], blocks=blocks, field=field,
                     queries=queries)
    if c + d < R3.rows:
        R3 = truncate_rep(R3, c + d, make_rng(base + [4]))
    J = [(x, cp.sink[x], cp.source[x]) for x in order]
    chosen = representative_set(R1, R2, R3, J)
    return frozenset(always) | frozenset(x for x, _, _ in chosen)


def _terminal_free_edges(G: Multigraph, T) -> list[int]:
    """Edges in connected components that hold no terminal."""
    ts = set(T)
    seen = set()
    out = []
    for s in sorted(G.vertices):
        if s in seen:
            continue
        comp, stack = {s}, [s]
        while stack:
            for w in G.neighbors(stack.pop()):
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        if not comp & ts:
            out += [e for v in comp for e in G.incident(v) if G.edges[e][0] == v]
    return sorted(out)


@dataclass(frozen=True)
class CoverRound:
    graph: Multigraph
    candidates: frozenset | None  # None for the terminal-free clean-up step
    contracted: tuple  # edge ids contracted after this round


def cover_rounds(G: Multigraph, T: Sequence[int], c: int, d: int, seed=0, *,
                 batch: bool = False, field: PrimeField = DEFAULT_FIELD,
                 queries: int = 200) -> Iterator[CoverRound]:
    """The contraction loop behind :func:`cover_all_c_cuts`, one round at a time.

    The last round yielded has nothing left to contract.
    """
    T = check_terminals(G, T)
    base = list(seed) if isinstance(seed, (tuple, list)) else [seed]
    free = _terminal_free_edges(G, T)
    if free:
        yield CoverRound(G, None, tuple(free))
        G, _ = contract_edges(G, free)
    keep = set(terminal_edges(G, T))
    rnd = 0
    while True:
        cand = essential_candidates(G, T, c, d, base + [rnd], field=field, queries=queries)
        kept = {x[1] for x in cand}
        drop = [e for e in G.edge_ids() if e not in kept and e not in keep]
        if not drop:
            yield CoverRound(G, cand, ())
            return
        step = tuple(drop) if batch else (drop[0],)
        yield CoverRound(G, cand, step)
        G, _ = contract_edges(G, step)
        rnd += 1


def cover_all_c_cuts(G: Multigraph, T: Sequence[int], c: int, d: int, seed=0, *,
                     batch: bool = False, field: PrimeField = DEFAULT_FIELD,
                     queries: int = 200) -> frozenset:
    """Edge ids of ``G`` that contain a minimum cut for every terminal cut of
    value at most ``c`` (given that small cuts have at most ``d`` terminals on
    their smaller side).  Terminal edges are always kept.

    ``batch=True`` contracts every non-candidate at once per round; this is
    experimental and not covered by the correctness argument.
    """
    T = check_terminals(G, T)
    if len(T) <= 1:
        return frozenset(terminal_edges(G, T))
    last = None
    for last in cover_rounds(G, T, c, d, seed, batch=batch, field=field, queries=queries):
        pass
    return frozenset(last.graph.edges)
