"""Partitioning the non-terminal vertices into well-linked pieces.

Both refinement loops start from a single piece holding every non-terminal
vertex and keep splitting a piece along a terminal cut until no piece has a
cut of the kind they look for.  Each final piece gets a certificate giving
the ``d`` used by the cut-covering step: every terminal cut of value at most
``c`` in the piece has at most ``d`` terminals on its smaller side.

Terminals of a piece always have degree one.  The exact oracles group the
terminals by the vertex they hang off, enumerate bipartitions of those
*attachment vertices*, and then place individual terminals optimally (moving a
terminal away from its attachment vertex costs exactly one cut edge).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import eigh

from .errors import GuardRefusal, InputError, InvariantError
from .flow import EdgeCutOracle
from .graph import Multigraph, Piece, build_piece, check_terminals

DEFAULT_THRESHOLD = 18


@dataclass(frozen=True)
class _Groups:
    attach: tuple  # attachment vertices, sorted
    members: dict  # attachment vertex -> sorted terminals
    interior: Multigraph  # the graph without its terminals


def _groups(G: Multigraph, T: Sequence[int]) -> _Groups:
    ts = set(T)
    members: dict = {}
    for t in T:
        if G.degree(t) != 1:
            raise InputError(f"terminal {t} must have degree 1, has {G.degree(t)}")
        (x,) = G.neighbors(t)
        if x in ts:
            raise InputError(f"terminals {t} and {x} are adjacent")
        members.setdefault(x, []).append(t)
    members = {x: sorted(v) for x, v in members.items()}
    inner = Multigraph(G.vertices - ts,
                       {e: uv for e, uv in G.edges.items() if not ts & set(uv)})
    return _Groups(tuple(sorted(members)), members, inner)


def _split_terminals(g: _Groups, P: Sequence):
    Pset = set(P)
    tP = sorted(t for x in g.attach if x in Pset for t in g.members[x])
    tQ = sorted(t for x in g.attach if x not in Pset for t in g.members[x])
    return tP, tQ


def _assemble(side: Iterable[int], tP: list, tQ: list, j: int) -> frozenset:
    """Side ``side`` plus its terminals after moving ``j`` terminals from the
    larger terminal group to the smaller one (smallest ids move first)."""
    if len(tP) <= len(tQ):
        mine = tP + tQ[:j]
    else:
        mine = tP[j:]
    return frozenset(side) | frozenset(mine)


def _masks(g: _Groups, threshold: int):
    if len(g.attach) > threshold:
        raise GuardRefusal(f"{len(g.attach)} terminal groups exceed the enumeration "
                           f"threshold of {threshold}")
    rest = g.attach[1:]
    for mask in range(1 << len(rest)):
        yield [x for i, x in enumerate(rest) if mask >> i & 1]


def cut_size(G: Multigraph, S: Iterable[int]) -> int:
    S = set(S)
    return sum(1 for u, v in G.edges.values() if (u in S) != (v in S))


def violating_cut_exact(G: Multigraph, T: Sequence[int], c: int,
                        threshold: int = DEFAULT_THRESHOLD) -> frozenset | None:
    """A vertex set ``S`` with ``|delta(S)| <= c`` and at least ``3c`` terminals
    on each side, or None if there is none."""
    T = check_terminals(G, T)
    need = 3 * c
    if len(T) < 2 * need:
        return None
    g = _groups(G, T)
    oracle = EdgeCutOracle(g.interior)
    for P in _masks(g, threshold):
        Q = [x for x in g.attach if x not in set(P)]
        if P:
            ans = oracle.query(P, Q, c)
            if ans.exceeds:
                continue
            lam, side = ans.value, ans.side
        else:
            lam, side = 0, frozenset()
        tP, tQ = _split_terminals(g, P)
        small, large = sorted((len(tP), len(tQ)))
        budget = c - lam
        if min((small + large) // 2, small + budget) < need:
            continue
        j = max(0, need - small)
        return _assemble(side, tP, tQ, j)
    return None


def _side_key(S: frozenset, T: Sequence[int]):
    a = tuple(sorted(t for t in T if t in S))
    b = tuple(sorted(t for t in T if t not in S))
    return min(a, b)


def sparsest_exact(G: Multigraph, T: Sequence[int], threshold: int = DEFAULT_THRESHOLD):
    """Exact minimum of ``|delta(S)| / min(|S & T|, |T - S|)``.

    Ties go to the lexicographically smallest terminal side.
    """
    T = check_terminals(G, T)
    if len(T) < 2:
        raise InputError("a sparsest terminal cut needs at least two terminals")
    g = _groups(G, T)
    oracle = EdgeCutOracle(g.interior)
    full = g.interior.m
    best = None
    for P in _masks(g, threshold):
        Q = [x for x in g.attach if x not in set(P)]
        if P:
            ans = oracle.query(P, Q, full)
            lam, side = ans.value, ans.side
        else:
            lam, side = 0, frozenset()
        tP, tQ = _split_terminals(g, P)
        small, large = sorted((len(tP), len(tQ)))
        top = (large - small) // 2
        for j in sorted({0, 1, top}):
            if j > top or small + j == 0:
                continue
            ratio = Fraction(lam + j, small + j)
            S = _assemble(side, tP, tQ, j)
            key = (ratio, _side_key(S, T))
            if best is None or key < best[0]:
                best = (key, S)
    if best is None:
        raise InputError("no terminal bipartition found")
    return best[1], best[0][0]


def _components(G: Multigraph) -> list[frozenset]:
    seen, out = set(), []
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
        out.append(frozenset(comp))
    return out


def sparsest_spectral(G: Multigraph, T: Sequence[int], vectors: int = 3):
    """Heuristic sparsest terminal cut: sweep the low eigenvectors of the
    Laplacian taken relative to a terminal-weighted mass matrix, plus the
    connected components.  Returns ``(S, ratio)`` of the best set seen."""
    T = check_terminals(G, T)
    if len(T) < 2:
        raise InputError("a sparsest terminal cut needs at least two terminals")
    ts = set(T)
    k = len(T)
    order = sorted(G.vertices)
    idx = {v: i for i, v in enumerate(order)}
    candidates = []
    for comp in _components(G):
        inside = len(comp & ts)
        if 0 < inside < k:
            candidates.append((Fraction(0), comp))
    n = len(order)
    L = np.zeros((n, n))
    for u, v in G.edges.values():
        a, b = idx[u], idx[v]
        L[a, a] += 1
        L[b, b] += 1
        L[a, b] -= 1
        L[b, a] -= 1
    mass = np.array([1.0 if v in ts else 1e-2 for v in order])
    _, vecs = eigh(L, np.diag(mass))
    for col in range(1, min(n, vectors + 1)):
        x = vecs[:, col]
        seq = sorted(range(n), key=lambda i: (x[i], order[i]))
        inset = np.zeros(n, dtype=bool)
        cut = 0
        tin = 0
        for pos in seq[:-1]:
            v = order[pos]
            inside = sum(1 for w in G.neighbors(v) if inset[idx[w]])
            cut += G.degree(v) - 2 * inside
            inset[pos] = True
            tin += v in ts
            if 0 < tin < k:
                candidates.append((Fraction(cut, min(tin, k - tin)),
                                   frozenset(order[i] for i in np.flatnonzero(inset))))
    if not candidates:
        raise InputError("no terminal bipartition found")
    ratio, S = min(candidates, key=lambda rs: (rs[0], _side_key(rs[1], T)))
    return S, ratio


def sparsest_terminal_cut(G: Multigraph, T: Sequence[int], mode: str = "exact",
                          threshold: int = DEFAULT_THRESHOLD):
    """``(S, ratio)`` minimising ``|delta(S)| / min(|S & T|, |T - S|)``
    (exactly, or heuristically with ``mode="spectral"``)."""
    if mode == "exact":
        return sparsest_exact(G, T, threshold)
    if mode == "spectral":
        return sparsest_spectral(G, T)
    raise InputError(f"unknown oracle mode {mode!r}")


@dataclass(frozen=True)
class Certificate:
    """Why a piece satisfies the small-side bound ``d``.

    ``kind`` is ``"existence"`` (no violating cut, so ``d = 3c``),
    ``"certified"`` (exact expansion ``phi``, so ``d = ceil(c / phi)``),
    ``"trivial"`` (fewer than two terminals) or ``"fallback"`` (``d`` is the
    terminal count, which holds for any piece).
    """

    kind: str
    d: int
    phi: Fraction | None = None


@dataclass(frozen=True)
class SplitRecord:
    terminals: int  # terminals of the piece that was split
    cut: int
    sides: tuple  # terminal counts of the two new pieces
    potential: int | None = None  # sum of (|T_i| - 3c) after the split


@dataclass
class Partition:
    parts: list  # frozensets of non-terminal vertices
    certificates: list
    splits: list = field(default_factory=list)
    rejected: int = 0  # expander-mode splits refused by the progress guard

    def pieces(self, G: Multigraph, T: Sequence[int]) -> list[Piece]:
        return [build_piece(G, T, X) for X in self.parts]


def certify_piece(piece: Piece, c: int, threshold: int = DEFAULT_THRESHOLD) -> Certificate:
    """Tightest certificate available without the refinement history."""
    k = len(piece.terminals)
    if k < 2:
        return Certificate("trivial", c)
    fallback = Certificate("fallback", max(c, k))
    if len(set(piece.graph.neighbors(t)[0] for t in piece.terminals)) > threshold:
        return fallback
    _, phi = sparsest_exact(piece.graph, piece.terminals, threshold)
    if phi == 0:
        return fallback
    return Certificate("certified", min(max(c, math.ceil(c / phi)), max(c, k)), phi)


def refine_existence(G: Multigraph, T: Sequence[int], c: int,
                     threshold: int = DEFAULT_THRESHOLD) -> Partition:
    """Split along cuts of value <= c with >= 3c terminals on both sides."""
    T = check_terminals(G, T)
    todo = deque([frozenset(G.vertices - set(T))])
    final, splits = [], []
    potential = None
    sizes: dict = {}
    while todo:
        X = todo.popleft()
        piece = build_piece(G, T, X)
        sizes[X] = len(piece.terminals)
        S = violating_cut_exact(piece.graph, piece.terminals, c, threshold)
        if S is None:
            final.append(X)
            continue
        A, B = X & S, X - S
        if not A or not B:
            raise InvariantError("violating cut left a piece without interior vertices")
        cut = cut_size(piece.graph, S)
        kA = len(build_piece(G, T, A).terminals)
        kB = len(build_piece(G, T, B).terminals)
        if potential is None:
            potential = len(piece.terminals) - 3 * c
        new = potential - (len(piece.terminals) - 3 * c) + (kA - 3 * c) + (kB - 3 * c)
        if new > potential - c or new < 0:
            raise InvariantError(f"potential went from {potential} to {new}")
        potential = new
        splits.append(SplitRecord(len(piece.terminals), cut, (kA, kB), potential))
        todo.appendleft(B)
        todo.appendleft(A)
    certs = [Certificate("existence", 3 * c) for _ in final]
    return Partition(final, certs, splits)


def default_phi(n: int, sigma: float) -> float:
    return 1.0 / (10.0 * sigma * math.log2(max(n, 2)))


def refine_expander(G: Multigraph, T: Sequence[int], c: int, *, phi: float | None = None,
                    sigma: float = 1.0, oracle: str = "exact",
                    threshold: int = DEFAULT_THRESHOLD) -> Partition:
    """Split along terminal cuts sparser than ``phi * sigma``.

    A split is refused (and the piece kept with a fallback certificate) unless
    both new pieces end up with fewer terminals than the piece they came from.
    """
    T = check_terminals(G, T)
    if phi is None:
        phi = default_phi(G.n, sigma)
    if phi <= 0 or sigma <= 0:
        raise InputError("phi and sigma must be positive")
    limit = Fraction(phi).limit_denominator(10**9) * Fraction(sigma).limit_denominator(10**9)
    todo = deque([frozenset(G.vertices - set(T))])
    final, certs, splits = [], [], []
    rejected = 0
    while todo:
        X = todo.popleft()
        piece = build_piece(G, T, X)
        k = len(piece.terminals)
        if k < 2:
            final.append(X)
            certs.append(Certificate("trivial", c))
            continue
        S, ratio = sparsest_terminal_cut(piece.graph, piece.terminals, oracle, threshold)
        if ratio < limit:
            A, B = X & S, X - S
            kA = len(build_piece(G, T, A).terminals) if A else k
            kB = len(build_piece(G, T, B).terminals) if B else k
            if A and B and max(kA, kB) < k:
                splits.append(SplitRecord(k, cut_size(piece.graph, S), (kA, kB)))
                todo.appendleft(B)
                todo.appendleft(A)
                continue
            rejected += 1
            final.append(X)
            certs.append(Certificate("fallback", max(c, k)))
            continue
        final.append(X)
        if oracle == "exact" and ratio > 0:
            certs.append(Certificate("certified", min(max(c, math.ceil(c / ratio)), max(c, k)),
                                     ratio))
        else:
            certs.append(certify_piece(piece, c, threshold))
    return Partition(final, certs, splits, rejected)
