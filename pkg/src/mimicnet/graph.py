"""Undirected multigraphs with stable edge ids, plus the reductions built on them.

A :class:`Multigraph` never stores self-loops.  Parallel edges are distinct
edges with distinct ids; contraction keeps the ids of every surviving edge so
that retained-edge sets can be traced back to the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Integral
from typing import Iterable, Mapping, Sequence

from .errors import InputError, InvariantError


class Multigraph:
    """Vertices are ints; ``edges`` maps an edge id to its endpoint pair."""

    __slots__ = ("_vertices", "_edges", "_adj")

    def __init__(self, vertices: Iterable[int], edges: Mapping[int, tuple[int, int]] | Iterable = ()):
        self._vertices = frozenset(vertices)
        items = edges.items() if isinstance(edges, Mapping) else edges
        self._edges: dict[int, tuple[int, int]] = {}
        for eid, (u, v) in items:
            if u == v:
                raise InputError(f"self-loop on vertex {u} (edge {eid})")
            if u not in self._vertices or v not in self._vertices:
                raise InputError(f"edge {eid} has an endpoint outside the vertex set")
            if eid in self._edges:
                raise InputError(f"duplicate edge id {eid}")
            self._edges[eid] = (u, v)
        self._adj = None

    @property
    def vertices(self) -> frozenset:
        return self._vertices

    @property
    def edges(self) -> Mapping[int, tuple[int, int]]:
        return self._edges

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return len(self._edges)

    def edge_ids(self) -> list[int]:
        return sorted(self._edges)

    def endpoints(self, eid: int) -> tuple[int, int]:
        return self._edges[eid]

    def _index(self):
        if self._adj is None:
            adj = {v: [] for v in self._vertices}
            for eid in sorted(self._edges):
                u, v = self._edges[eid]
                adj[u].append(eid)
                adj[v].append(eid)
            self._adj = adj
        return self._adj

    def incident(self, v: int) -> list[int]:
        """Edge ids at ``v`` in increasing id order."""
        return self._index()[v]

    def degree(self, v: int) -> int:
        return len(self._index()[v])

    def neighbors(self, v: int) -> list[int]:
        out = []
        for eid in self.incident(v):
            a, b = self._edges[eid]
            out.append(b if a == v else a)
        return out

    def other_end(self, eid: int, v: int) -> int:
        a, b = self._edges[eid]
        return b if a == v else a

    def max_vertex(self) -> int:
        return max(self._vertices, default=0)

    def canonical(self):
        """Hashable summary ignoring edge ids: vertices plus sorted endpoint pairs."""
        pairs = sorted(tuple(sorted(p)) for p in self._edges.values())
        return (tuple(sorted(self._vertices)), tuple(pairs))

    def __eq__(self, other):
        return (isinstance(other, Multigraph) and self._vertices == other._vertices
                and self._edges == other._edges)

    def __hash__(self):
        return hash((self._vertices, tuple(sorted(self._edges.items()))))

    def __repr__(self):
        return f"Multigraph(n={self.n}, m={self.m})"


def check_terminals(G: Multigraph, T: Sequence[int]) -> tuple[int, ...]:
    T = tuple(T)
    if len(set(T)) != len(T):
        raise InputError("duplicate terminal")
    missing = [t for t in T if t not in G.vertices]
    if missing:
        raise InputError(f"terminal {missing[0]} is not a vertex of the graph")
    return T


def from_weighted(edges: Iterable[tuple[int, int, int]], c: int,
                  vertices: Iterable[int] | None = None) -> Multigraph:
    """Expand weighted edges into unit parallel edges, capping each at ``c + 1`` copies.

    Unit edges are numbered 0, 1, ... in input order.  Self-loops are dropped.
    """
    if not isinstance(c, Integral) or c < 1:
        raise InputError(f"connectivity threshold must be a positive integer, got {c!r}")
    edges = list(edges)
    verts = set(vertices) if vertices is not None else set()
    unit = {}
    for i, (u, v, w) in enumerate(edges):
        if isinstance(w, bool) or not isinstance(w, Integral):
            raise InputError(f"edge {i}: weight {w!r} is not an integer")
        if w < 1:
            raise InputError(f"edge {i}: weight {w} must be at least 1")
        if vertices is None:
            verts.update((u, v))
        elif u not in verts or v not in verts:
            raise InputError(f"edge {i}: endpoint not in vertex set")
        if u == v:
            continue
        for _ in range(min(int(w), c + 1)):
            unit[len(unit)] = (u, v)
    return Multigraph(verts, unit)


@dataclass(frozen=True)
class PendantMap:
    """Which pendant terminals hang off which original terminal."""

    groups: Mapping[int, tuple[int, ...]]
    edges: Mapping[int, tuple[int, ...]]
    owner: Mapping[int, int] = field(default_factory=dict)


def attach_pendant_terminals(G: Multigraph, T: Sequence[int], c: int):
    """Hang ``c`` fresh degree-1 terminals off every terminal.

    Returns ``(G_new, T_new, pendant_map)``.  The old terminals become ordinary
    vertices of ``G_new``.  Fresh vertex and edge ids continue past the maxima.
    """
    T = check_terminals(G, T)
    if c < 1:
        raise InputError("c must be positive")
    verts = set(G.vertices)
    edges = dict(G.edges)
    nv = G.max_vertex() + 1
    ne = max(edges, default=-1) + 1
    groups, pedges, owner, T_new = {}, {}, {}, []
    for t in T:
        ps, es = [], []
        for _ in range(c):
            verts.add(nv)
            edges[ne] = (t, nv)
            ps.append(nv)
            es.append(ne)
            owner[nv] = t
            T_new.append(nv)
            nv += 1
            ne += 1
        groups[t], pedges[t] = tuple(ps), tuple(es)
    return Multigraph(verts, edges), tuple(T_new), PendantMap(groups, pedges, owner)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)
        return ra != rb


def contract_edges(G: Multigraph, E: Iterable[int], prefer: Sequence[int] = ()):
    """Contract every edge in ``E``.

    Each merged class is named after its first vertex in ``prefer`` if it holds
    one, otherwise after its smallest vertex.  Surviving edges keep their ids;
    edges that become loops are dropped.  Returns ``(graph, vertex_map)``.
    """
    E = set(E)
    unknown = E - G.edges.keys()
    if unknown:
        raise InputError(f"unknown edge id {min(unknown)}")
    uf = _UnionFind(G.vertices)
    for eid in E:
        uf.union(*G.edges[eid])
    name = {}
    for p in prefer:
        if p in G.vertices:
            name.setdefault(uf.find(p), p)
    vmap = {v: name.get(uf.find(v), uf.find(v)) for v in G.vertices}
    edges = {}
    for eid, (u, v) in G.edges.items():
        a, b = vmap[u], vmap[v]
        if a != b:
            edges[eid] = (a, b)
    return Multigraph(set(vmap.values()), edges), vmap


def separating_contraction(G: Multigraph, E: Iterable[int], apart: Iterable[int]) -> list[int]:
    """The edges of ``E`` (in id order) that can be contracted without ever
    merging two vertices of ``apart`` into one class."""
    apart = set(apart)
    uf = _UnionFind(G.vertices)
    marked = {v: v in apart for v in G.vertices}
    keep = []
    for eid in sorted(E):
        ra, rb = uf.find(G.edges[eid][0]), uf.find(G.edges[eid][1])
        if ra == rb:
            keep.append(eid)
            continue
        if marked[ra] and marked[rb]:
            continue
        uf.union(ra, rb)
        marked[uf.find(ra)] = marked[ra] or marked[rb]
        keep.append(eid)
    return keep


@dataclass(frozen=True)
class Piece:
    """One part of a partition, cut out of the surrounding graph.

    ``graph`` holds the interior vertices plus one fresh stub terminal per
    boundary edge.  Edge ids are those of the surrounding graph.
    """

    interior: frozenset
    graph: Multigraph
    terminals: tuple
    stub_edge: Mapping[int, int]


def build_piece(G: Multigraph, T: Iterable[int], X: Iterable[int], first_stub: int | None = None) -> Piece:
    """Induced piece on ``X`` with a stub terminal replacing each outside endpoint."""
    X = frozenset(X)
    if X & set(T):
        raise InputError("a piece may not contain terminals")
    if not X <= G.vertices:
        raise InputError("piece vertices must belong to the graph")
    nxt = G.max_vertex() + 1 if first_stub is None else first_stub
    edges, stubs, stub_edge = {}, [], {}
    for eid in G.edge_ids():
        u, v = G.edges[eid]
        inu, inv = u in X, v in X
        if inu and inv:
            edges[eid] = (u, v)
        elif inu or inv:
            inside = u if inu else v
            edges[eid] = (inside, nxt)
            stubs.append(nxt)
            stub_edge[nxt] = eid
            nxt += 1
    return Piece(X, Multigraph(X | set(stubs), edges), tuple(stubs), stub_edge)


def merge_pendant_groups(H: Multigraph, pm: PendantMap):
    """Identify each terminal's pendant group into one vertex named after the terminal.

    A surviving non-pendant vertex that already carries the terminal's id is
    renamed to a fresh id first.  Returns ``(graph, vertex_map)``.
    """
    owner = pm.owner
    for t, ps in pm.groups.items():
        for p in ps:
            if p not in H.vertices:
                raise InvariantError(f"pendant {p} of terminal {t} was contracted away")
    nxt = max(max(H.vertices, default=0), max(owner, default=0)) + 1
    vmap = {}
    for v in sorted(H.vertices):
        if v in owner:
            vmap[v] = owner[v]
        elif v in pm.groups:
            vmap[v] = nxt
            nxt += 1
        else:
            vmap[v] = v
    edges = {}
    for eid, (u, v) in H.edges.items():
        a, b = vmap[u], vmap[v]
        if a != b:
            edges[eid] = (a, b)
    return Multigraph(set(vmap.values()), edges), vmap
