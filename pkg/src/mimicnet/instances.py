"""Seeded random instances shared by the self-test and the test-suite."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Multigraph, from_weighted


@dataclass(frozen=True)
class Instance:
    n: int
    edges: tuple  # (u, v, w), vertices 1..n
    terminals: tuple
    c: int

    def graph(self) -> Multigraph:
        return from_weighted(self.edges, self.c, range(1, self.n + 1))


def random_instance(rng: np.random.Generator, *, n_max: int = 20, m_max: int = 40,
                    k_max: int = 6, c_values=(1, 2, 3, 4), weights=(1, 1, 1, 2, 3)) -> Instance:
    """Random multigraph: ``n <= n_max`` vertices, ``m <= m_max`` weighted edges
    before capping, ``2 <= k <= k_max`` terminals."""
    n = int(rng.integers(3, n_max + 1))
    m = int(rng.integers(n - 1, m_max + 1))
    edges = []
    while len(edges) < m:
        u, v = (int(x) for x in rng.integers(1, n + 1, 2))
        if u != v:
            edges.append((u, v, int(rng.choice(weights))))
    k = int(rng.integers(2, min(k_max, n) + 1))
    T = tuple(int(x) for x in rng.choice(np.arange(1, n + 1), size=k, replace=False))
    c = int(rng.choice(c_values))
    return Instance(n, tuple(edges), T, c)


def random_degree_one(rng: np.random.Generator, *, core_max: int = 10, m_max: int = 20,
                      k_max: int = 5, c_values=(1, 2, 3)):
    """A random multigraph whose ``k`` terminals each hang off one core vertex.

    Returns ``(G, T, c)``.
    """
    core = int(rng.integers(2, core_max + 1))
    m = int(rng.integers(core - 1, m_max + 1))
    edges = {}
    while len(edges) < m:
        u, v = (int(x) for x in rng.integers(0, core, 2))
        if u != v:
            edges[len(edges)] = (u, v)
    k = int(rng.integers(2, k_max + 1))
    T = tuple(range(core, core + k))
    for t in T:
        edges[len(edges)] = (t, int(rng.integers(0, core)))
    return Multigraph(range(core + k), edges), T, int(rng.choice(c_values))


def random_digraph(rng: np.random.Generator, n: int, arc_prob: float = 0.3) -> dict:
    D = {v: [] for v in range(n)}
    for u in range(n):
        for w in range(n):
            if u != w and rng.random() < arc_prob:
                D[u].append(w)
    return D
