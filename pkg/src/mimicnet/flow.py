"""Bounded max-flow / min-cut queries.

Everything here is exact integer flow.  Edge and vertex capacities are unit;
sets of sources or sinks are attached to virtual super-nodes.  "Bounded" means
augmentation stops once the flow exceeds ``bound``, so a query costs at most
``bound + 1`` breadth-first searches.

Digraphs are plain mappings ``vertex -> iterable of successors`` whose keys
list every vertex.  The oracle classes build their residual network once and
answer many queries on the same graph; the module-level functions are
one-shot conveniences on top of them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .errors import InputError
from .graph import Multigraph

INF = 1 << 40


@dataclass(frozen=True)
class CutAnswer:
    """Result of a bounded cut query.

    ``value`` is None when the true value exceeds ``bound``.  Otherwise
    ``witness`` is a minimum cut (edge ids or vertices) and ``side`` the
    vertices still reachable from the source side once it is removed.
    """

    value: int | None
    bound: int
    witness: frozenset = frozenset()
    side: frozenset = frozenset()

    @property
    def exceeds(self) -> bool:
        return self.value is None

    def capped(self, cap: int) -> int:
        """``min(true value, cap)``; valid whenever ``cap <= bound + 1``."""
        if cap > self.bound + 1:
            raise ValueError(f"cap {cap} needs bound >= {cap - 1}")
        return cap if self.value is None else min(self.value, cap)


class _Network:
    """Residual network with paired arcs (arc ``i ^ 1`` is the reverse of ``i``).

    ``reset`` restores the capacities recorded by ``freeze``.
    """

    def __init__(self, n: int):
        self.adj = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []
        self._base: list[int] = []

    def add(self, u: int, v: int, cap: int, rcap: int = 0) -> int:
        i = len(self.to)
        self.adj[u].append(i)
        self.to.append(v)
        self.cap.append(cap)
        self.adj[v].append(i + 1)
        self.to.append(u)
        self.cap.append(rcap)
        return i

    def freeze(self):
        self._base = list(self.cap)

    def reset(self):
        self.cap[:] = self._base

    def max_flow(self, s: int, t: int, limit: int) -> int:
        adj, to, cap = self.adj, self.to, self.cap
        flow = 0
        n = len(adj)
        while flow < limit:
            pred = [-1] * n
            pred[s] = -2
            queue = deque([s])
            while queue and pred[t] == -1:
                u = queue.popleft()
                for a in adj[u]:
                    if cap[a] > 0:
                        w = to[a]
                        if pred[w] == -1:
                            pred[w] = a
                            queue.append(w)
            if pred[t] == -1:
                break
            push, w = limit - flow, t
            while w != s:
                a = pred[w]
                push = min(push, cap[a])
                w = to[a ^ 1]
            w = t
            while w != s:
                a = pred[w]
                cap[a] -= push
                cap[a ^ 1] += push
                w = to[a ^ 1]
            flow += push
        return flow

    def reachable(self, s: int) -> list[bool]:
        seen = [False] * len(self.adj)
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for a in self.adj[u]:
                if self.cap[a] > 0 and not seen[self.to[a]]:
                    seen[self.to[a]] = True
                    stack.append(self.to[a])
        return seen

    def coreachable(self, t: int) -> list[bool]:
        """Nodes that can still reach ``t`` in the residual network."""
        seen = [False] * len(self.adj)
        seen[t] = True
        stack = [t]
        while stack:
            u = stack.pop()
            for a in self.adj[u]:
                # a leaves u, so its partner a ^ 1 enters u from to[a]
                if self.cap[a ^ 1] > 0 and not seen[self.to[a]]:
                    seen[self.to[a]] = True
                    stack.append(self.to[a])
        return seen


def _check_bound(bound):
    if bound < 0:
        raise InputError("bound must be nonnegative")


def _check_sides(A, B, universe):
    A, B = frozenset(A), frozenset(B)
    if A & B:
        raise InputError("source and sink sets overlap")
    for v in A | B:
        if v not in universe:
            raise InputError(f"{v!r} is not a vertex of the graph")
    return A, B


class EdgeCutOracle:
    """Bounded edge min-cut queries on one undirected multigraph."""

    def __init__(self, G: Multigraph):
        self.graph = G
        self.order = sorted(G.vertices)
        self.index = {v: i for i, v in enumerate(self.order)}
        n = len(self.order)
        self.s, self.t = n, n + 1
        net = _Network(n + 2)
        for eid in G.edge_ids():
            u, v = G.edges[eid]
            net.add(self.index[u], self.index[v], 1, 1)
        self._src = [net.add(self.s, i, 0) for i in range(n)]
        self._snk = [net.add(i, self.t, 0) for i in range(n)]
        net.freeze()
        self.net = net

    def query(self, A: Iterable[int], B: Iterable[int], bound: int) -> CutAnswer:
        _check_bound(bound)
        A, B = _check_sides(A, B, self.index)
        if not A or not B:
            return CutAnswer(0, bound, frozenset(), A)
        net = self.net
        net.reset()
        for a in A:
            net.cap[self._src[self.index[a]]] = INF
        for b in B:
            net.cap[self._snk[self.index[b]]] = INF
        f = net.max_flow(self.s, self.t, bound + 1)
        if f > bound:
            return CutAnswer(None, bound)
        seen = net.reachable(self.s)
        side = frozenset(v for v in self.order if seen[self.index[v]])
        cut = frozenset(e for e, (u, v) in self.graph.edges.items() if (u in side) != (v in side))
        return CutAnswer(f, bound, cut, side)


def bounded_edge_mincut(G: Multigraph, A: Iterable[int], B: Iterable[int], bound: int) -> CutAnswer:
    """Minimum number of edges separating ``A`` from ``B``, if at most ``bound``."""
    return EdgeCutOracle(G).query(A, B, bound)


class VertexCutOracle:
    """Vertex-capacity flow queries on one digraph.

    Node ``2i`` is the in-copy and ``2i + 1`` the out-copy of vertex ``i``,
    joined by a unit arc; digraph arcs get infinite capacity.
    """

    def __init__(self, D: Mapping):
        self.order = list(D)
        self.index = {v: i for i, v in enumerate(self.order)}
        n = len(self.order)
        self.s, self.t = 2 * n, 2 * n + 1
        net = _Network(2 * n + 2)
        self._inner = [net.add(2 * i, 2 * i + 1, 1) for i in range(n)]
        for u in self.order:
            for w in D[u]:
                if w not in self.index:
                    raise InputError(f"arc to unknown vertex {w!r}")
                net.add(2 * self.index[u] + 1, 2 * self.index[w], INF)
        self._src = [net.add(self.s, 2 * i, 0) for i in range(n)]
        self._snk = [net.add(2 * i + 1, self.t, 0) for i in range(n)]
        net.freeze()
        self.net = net

    def _run(self, A, B, limit, cap=INF, uncuttable=()):
        net = self.net
        net.reset()
        for v in uncuttable:
            net.cap[self._inner[self.index[v]]] = INF
        for a in A:
            net.cap[self._src[self.index[a]]] = cap
        for b in B:
            net.cap[self._snk[self.index[b]]] = cap
        return net.max_flow(self.s, self.t, limit)

    def min_cut(self, A, B, bound: int, uncuttable: Iterable = ()) -> CutAnswer:
        _check_bound(bound)
        A, B = _check_sides(A, B, self.index)
        if not A or not B:
            return CutAnswer(0, bound)
        f = self._run(A, B, bound + 1, uncuttable=uncuttable)
        if f > bound:
            return CutAnswer(None, bound)
        seen = self.net.reachable(self.s)
        idx = self.index
        cut = frozenset(v for v in self.order if seen[2 * idx[v]] and not seen[2 * idx[v] + 1])
        side = frozenset(v for v in self.order if seen[2 * idx[v]])
        return CutAnswer(f, bound, cut, side)

    def in_every_min_cut(self, A, B, bound: int):
        """``(value, vertices lying in every minimum A-B vertex cut)``.

        A vertex is in every minimum cut iff making it uncuttable raises the
        value, iff after a maximum flow the residual network has a path from
        the source to its in-copy and from its out-copy to the sink.
        Returns ``(None, frozenset())`` when the value exceeds ``bound``.
        """
        _check_bound(bound)
        A, B = _check_sides(A, B, self.index)
        if not A or not B:
            return 0, frozenset()
        f = self._run(A, B, bound + 1)
        if f > bound:
            return None, frozenset()
        fwd = self.net.reachable(self.s)
        bwd = self.net.coreachable(self.t)
        idx = self.index
        return f, frozenset(v for v in self.order if fwd[2 * idx[v]] and bwd[2 * idx[v] + 1])

    def disjoint_paths(self, T, X) -> int:
        T, X = frozenset(T), frozenset(X)
        for v in T | X:
            if v not in self.index:
                raise InputError(f"{v!r} is not a vertex of the digraph")
        if not T or not X:
            return 0
        return self._run(T, X, min(len(T), len(X)), cap=1)


def min_vertex_cut(D: Mapping, A: Iterable, B: Iterable, bound: int,
                   uncuttable: Iterable = ()) -> CutAnswer:
    """Fewest vertices meeting every ``A``-``B`` path, if at most ``bound``.

    The cut may contain vertices of ``A`` or ``B`` themselves.  Vertices in
    ``uncuttable`` get infinite capacity.
    """
    return VertexCutOracle(D).min_cut(A, B, bound, uncuttable)


def max_vertex_disjoint_paths(D: Mapping, T: Iterable, X: Iterable) -> int:
    """Most fully vertex-disjoint paths from ``T`` to ``X``.

    A vertex in both sets counts as a path of length zero.
    """
    return VertexCutOracle(D).disjoint_paths(T, X)


class LinkageOracle:
    """Repeated "how many disjoint T-to-X paths" queries on one fixed digraph.

    Backed by scipy's compiled max-flow.  The network is assembled once; a
    query only switches on the arcs from the chosen vertices to the sink.
    """

    def __init__(self, D: Mapping, T: Sequence):
        order = list(D)
        self.index = {v: i for i, v in enumerate(order)}
        n = len(order)
        self.source, self.sink = 2 * n, 2 * n + 1
        rows, cols, caps = [], [], []
        for i in range(n):
            rows += [2 * i, 2 * i + 1]
            cols += [2 * i + 1, self.sink]
            caps += [1, 0]
        for u in order:
            iu = 2 * self.index[u] + 1
            for w in D[u]:
                rows.append(iu)
                cols.append(2 * self.index[w])
                caps.append(1)
        for v in T:
            rows.append(self.source)
            cols.append(2 * self.index[v])
            caps.append(1)
        size = 2 * n + 2
        key = np.asarray(rows, dtype=np.int64) * size + np.asarray(cols, dtype=np.int64)
        uniq, inv = np.unique(key, return_inverse=True)
        data = np.zeros(len(uniq), dtype=np.int32)
        np.add.at(data, inv, np.asarray(caps, dtype=np.int32))
        data = np.minimum(data, 1)
        r, c = np.divmod(uniq, size)
        indptr = np.zeros(size + 1, dtype=np.int32)
        np.add.at(indptr, r + 1, 1)
        indptr = np.cumsum(indptr).astype(np.int32)
        self.graph = csr_matrix((data, c.astype(np.int32), indptr), shape=(size, size))
        # the sink has the largest index, so each out-node's sink arc ends its row
        self._sink_pos = indptr[2 * np.arange(n) + 2] - 1
        self.terminals = tuple(T)

    def query(self, X: Iterable) -> int:
        pos = [self._sink_pos[self.index[x]] for x in X]
        if not pos or not self.terminals:
            return 0
        data = self.graph.data
        data[pos] = 1
        try:
            return int(maximum_flow(self.graph, self.source, self.sink, method="dinic").flow_value)
        finally:
            data[pos] = 0

    def independent(self, X) -> bool:
        X = list(X)
        return len(set(X)) == len(X) and self.query(X) == len(X)
