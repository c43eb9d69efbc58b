"""Shared test oracles.  Everything here is independent of the library's own
flow code: networkx max-flow for cut values, plain enumeration otherwise."""

from itertools import combinations

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings

from mimicnet.graph import Multigraph

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


def nx_edge_mincut(G: Multigraph, A, B) -> int:
    """Minimum number of unit edges separating ``A`` from ``B`` (networkx)."""
    A, B = set(A), set(B)
    if not A or not B:
        return 0
    H = nx.Graph()
    H.add_nodes_from(G.vertices)
    for u, v in G.edges.values():
        if H.has_edge(u, v):
            H[u][v]["capacity"] += 1
        else:
            H.add_edge(u, v, capacity=1)
    for a in A:
        H.add_edge("s*", a)  # no capacity attribute means infinite
    for b in B:
        H.add_edge(b, "t*")
    return int(nx.maximum_flow_value(H, "s*", "t*"))


def enum_edge_mincut(G: Multigraph, A, B) -> float:
    """Minimum over all vertex bipartitions ``S`` with ``A <= S``, ``B`` outside."""
    A, B = set(A), set(B)
    free = sorted(G.vertices - A - B)
    best = float("inf")
    for r in range(len(free) + 1):
        for extra in combinations(free, r):
            S = A | set(extra)
            best = min(best, sum(1 for u, v in G.edges.values() if (u in S) != (v in S)))
    return best


def weighted_mincut(edges, A, B) -> int:
    """Min cut of a weighted undirected edge list via networkx."""
    H = nx.Graph()
    for u, v, w in edges:
        if u == v:
            continue
        if H.has_edge(u, v):
            H[u][v]["capacity"] += w
        else:
            H.add_edge(u, v, capacity=w)
    for a in A:
        H.add_node(a)
        H.add_edge("s*", a)
    for b in B:
        H.add_node(b)
        H.add_edge(b, "t*")
    return int(nx.maximum_flow_value(H, "s*", "t*"))


def nx_vertex_disjoint(D, T, X) -> int:
    """Maximum number of vertex-disjoint ``T -> X`` paths (networkx, split nodes)."""
    H = nx.DiGraph()
    for v in D:
        H.add_edge(("i", v), ("o", v), capacity=1)
    for u, ws in D.items():
        for w in ws:
            H.add_edge(("o", u), ("i", w), capacity=1)
    for t in T:
        H.add_edge("s*", ("i", t), capacity=1)
    for x in X:
        H.add_edge(("o", x), "t*", capacity=1)
    if not T or not X:
        return 0
    return int(nx.maximum_flow_value(H, "s*", "t*"))


def multigraph(pairs, vertices=None) -> Multigraph:
    pairs = list(pairs)
    verts = set(vertices or ())
    for u, v in pairs:
        verts |= {u, v}
    return Multigraph(verts, dict(enumerate(pairs)))


@pytest.fixture
def path_t1_a_t2():
    return multigraph([(1, 2), (2, 3)]), (1, 3)
