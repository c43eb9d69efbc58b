"""Linear matroid representations over F_p.

A :class:`LinearRep` is a matrix whose columns are labelled by ground-set
elements; a set is independent iff its columns are linearly independent.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from . import field as ff
from .errors import InputError, RandomizedConstructionError, SingularMatrixError
from .field import DEFAULT_FIELD, PrimeField
from .flow import LinkageOracle

log = logging.getLogger(__name__)

# Below this field size a random draw is wrong often enough that 200 sampled
# queries miss it; small grounds are then certified on every subset instead.
SMALL_FIELD = 1 << 31
SMALL_FIELD_EXHAUSTIVE = 20_000


def make_rng(seed) -> np.random.Generator:
    """Generator from an int or a tuple of ints (used to derive sub-seeds)."""
    parts = list(seed) if isinstance(seed, (tuple, list)) else [seed]
    return np.random.default_rng([int(x) for x in parts])


@dataclass(frozen=True, eq=False)
class LinearRep:
    field: PrimeField
    matrix: np.ndarray
    ground: tuple
    rerandomizations: int = 0
    _index: dict = dc_field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.matrix.ndim != 2 or self.matrix.shape[1] != len(self.ground):
            raise InputError("matrix columns must match the ground set")
        if len(set(self.ground)) != len(self.ground):
            raise InputError("ground elements must be distinct")
        object.__setattr__(self, "_index", {g: i for i, g in enumerate(self.ground)})

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    def column(self, g):
        return self.matrix[:, self._index[g]]

    def columns(self, items: Iterable):
        return self.matrix[:, [self._index[g] for g in items]]

    def rank(self) -> int:
        return ff.rank(self.matrix, self.field)

    def is_independent(self, items) -> bool:
        items = list(items)
        if len(set(items)) != len(items):
            return False
        if len(items) > self.rows:
            return False
        return ff.rank(self.columns(items), self.field) == len(items)

    def reduced(self) -> "LinearRep":
        """Same matroid with the matrix trimmed to full row rank."""
        rows = ff.row_basis(self.matrix, self.field)
        return LinearRep(self.field, rows, self.ground, self.rerandomizations)

    def restrict(self, items: Sequence) -> "LinearRep":
        return LinearRep(self.field, self.columns(items), tuple(items), self.rerandomizations)


def uniform_rep(ground: Sequence, r: int, field: PrimeField = DEFAULT_FIELD) -> LinearRep:
    """Rank-``r`` uniform matroid from a Vandermonde matrix on points 1..n."""
    ground = tuple(ground)
    n = len(ground)
    if r < 0:
        raise InputError("rank must be nonnegative")
    if n >= field.p:
        raise InputError(f"field of size {field.p} is too small for {n} distinct points")
    pts = np.arange(1, n + 1, dtype=np.int64)
    M = field.zeros((r, n))
    if r:
        M[0] = field.array(np.ones(n, dtype=np.int64))
        x = field.array(pts)
        for i in range(1, r):
            M[i] = field.mul(M[i - 1], x)
    return LinearRep(field, M, ground)


def _walk_columns(D: Mapping, T: Sequence, rng, f: PrimeField, ground: Sequence, blocks):
    """Rows ``T`` of ``(I - A)^{-1}`` for random arc weights ``A``, on ``ground``.

    Vertices with no out-arcs (outside ``T``) and the vertices of ``blocks``
    (groups with no arcs between different groups) are eliminated without
    entering the dense core system.
    """
    verts = list(D)
    Tset = set(T)
    sink = {v for v in verts if v not in Tset and not D[v]}
    blocks = [tuple(b) for b in (blocks or ()) if len(b)]
    bid = {}
    for i, b in enumerate(blocks):
        for v in b:
            if v in Tset or v in sink or v in bid:
                raise InputError(f"vertex {v!r} cannot be placed in an elimination block")
            bid[v] = i
    core = list(T) + [v for v in verts if v not in Tset and v not in sink and v not in bid]
    cidx = {v: i for i, v in enumerate(core)}
    bpos = {v: j for b in blocks for j, v in enumerate(b)}

    arcs = [(u, w) for u in verts for w in D[u]]
    weights = f.random(rng, len(arcs), nonzero=True)
    neg = f.neg(weights)

    X_RR = f.eye(len(core))
    into = [dict() for _ in blocks]  # core row -> {block pos: entry}
    out_of = [dict() for _ in blocks]
    inner = [f.eye(len(b)) for b in blocks]
    sink_in = {z: [] for z in sink}
    for (u, w), a, na in zip(arcs, weights, neg):
        if w in sink:
            sink_in[w].append((u, a))
        elif u in cidx and w in cidx:
            X_RR[cidx[u], cidx[w]] = f.add(X_RR[cidx[u], cidx[w]], na)
        elif u in cidx:
            d = into[bid[w]].setdefault(cidx[u], {})
            d[bpos[w]] = f.add(d.get(bpos[w], f.scalar(0)), na)
        elif w in cidx:
            d = out_of[bid[u]].setdefault(cidx[w], {})
            d[bpos[u]] = f.add(d.get(bpos[u], f.scalar(0)), na)
        elif bid[u] == bid[w]:
            B = inner[bid[u]]
            B[bpos[u], bpos[w]] = f.add(B[bpos[u], bpos[w]], na)
        else:
            raise InputError("elimination blocks must not be joined by arcs")

    S = X_RR
    block_data = []
    for i, b in enumerate(blocks):
        Binv = ff.inverse(inner[i], f)
        rin = sorted(into[i])
        rout = sorted(out_of[i])
        U = f.zeros((len(rin), len(b)))
        for r, row in enumerate(rin):
            for j, val in into[i][row].items():
                U[r, j] = val
        V = f.zeros((len(b), len(rout)))
        for cpos, col in enumerate(rout):
            for j, val in out_of[i][col].items():
                V[j, cpos] = val
        UB = f.matmul(U, Binv)
        if rin and rout:
            S[np.ix_(rin, rout)] = f.sub(S[np.ix_(rin, rout)], f.matmul(UB, V))
        block_data.append((rin, UB))

    E = f.zeros((len(core), len(T)))
    for i in range(len(T)):
        E[i, i] = 1
    Y = ff.solve(S.T.copy(), E, f).T  # rows T of S^{-1}

    cols: dict = {v: Y[:, cidx[v]] for v in core}
    for (rin, UB), b in zip(block_data, blocks):
        if rin:
            Mb = f.neg(f.matmul(Y[:, rin], UB))
        else:
            Mb = f.zeros((len(T), len(b)))
        for j, v in enumerate(b):
            cols[v] = Mb[:, j]
    zero = f.zeros(len(T))
    for z, ins in sink_in.items():
        acc = zero
        for u, a in ins:
            acc = f.add(acc, f.mul(cols[u], a))
        cols[z] = acc
    M = f.zeros((len(T), len(ground)))
    for j, g in enumerate(ground):
        M[:, j] = cols[g]
    return M


def _query_sets(ground: Sequence, rows: int, q: int, rng, exhaustive_limit: int):
    n = len(ground)
    top = min(n, rows)  # larger sets are dependent on both sides
    total = sum(comb(n, s) for s in range(1, top + 1))
    if total <= exhaustive_limit:
        for s in range(1, top + 1):
            for X in combinations(range(n), s):
                yield [ground[i] for i in X]
        return
    for _ in range(q):
        s = int(rng.integers(1, top + 1))
        X = rng.choice(n, size=s, replace=False)
        yield [ground[i] for i in sorted(X)]


def batch_independent(rep: LinearRep, sets: Sequence[Sequence]) -> list[bool]:
    """Independence of many subsets at once (sets of equal size share one
    vectorised elimination)."""
    out = [False] * len(sets)
    by_size: dict[int, list[int]] = {}
    for i, X in enumerate(sets):
        if len(set(X)) == len(X) and len(X) <= rep.rows:
            by_size.setdefault(len(X), []).append(i)
    for size, idxs in by_size.items():
        if size == 0:
            for i in idxs:
                out[i] = True
            continue
        cols = np.array([[rep._index[g] for g in sets[i]] for i in idxs])
        stack = np.transpose(rep.matrix[:, cols], (1, 0, 2))
        ranks = ff.batch_rank(stack, rep.field)
        for i, rk in zip(idxs, ranks):
            out[i] = int(rk) == size
    return out


def first_disagreement(rep: LinearRep, sets: Sequence[Sequence], independent) -> list | None:
    """First set on which ``rep`` and the ``independent`` predicate differ."""
    mine = batch_independent(rep, sets)
    for X, ok in zip(sets, mine):
        if ok != independent(X):
            return list(X)
    return None


def gammoid_rep(D: Mapping, T: Sequence, seed=0, *, ground: Sequence | None = None,
                blocks: Iterable[Sequence] | None = None, field: PrimeField = DEFAULT_FIELD,
                queries: int = 200, retries: int = 3,
                exhaustive_limit: int | None = None) -> LinearRep:
    """Representation of the gammoid of ``D`` with source set ``T``.

    ``X`` is independent iff there are ``|X|`` vertex-disjoint paths from ``T``
    ending in ``X``.  The matrix is checked against max-flow on ``queries``
    random subsets of ``ground``, or on every subset of size at most ``|T|``
    when there are at most ``exhaustive_limit`` of them.  By default that
    limit is 0 for large fields and ``SMALL_FIELD_EXHAUSTIVE`` below
    ``SMALL_FIELD``.  A disagreement or a singular system triggers a fresh
    draw, at most ``retries`` times.
    """
    T = tuple(T)
    ground = tuple(D) if ground is None else tuple(ground)
    for v in T + ground:
        if v not in D:
            raise InputError(f"{v!r} is not a vertex of the digraph")
    if len(set(T)) != len(T):
        raise InputError("duplicate source vertex")
    if not T or not ground:
        return LinearRep(field, field.zeros((len(T), len(ground))), ground)
    if exhaustive_limit is None:
        exhaustive_limit = SMALL_FIELD_EXHAUSTIVE if field.p < SMALL_FIELD else 0
    blocks = list(blocks) if blocks is not None else None
    oracle = LinkageOracle(D, T)
    base = list(seed) if isinstance(seed, (tuple, list)) else [seed]
    for attempt in range(retries + 1):
        try:
            M = _walk_columns(D, T, make_rng(base + [attempt, 0]), field, ground, blocks)
        except SingularMatrixError:
            log.warning("gammoid attempt %d (seed %r): singular system, redrawing", attempt, seed)
            continue
        rep = LinearRep(field, M, ground, attempt)
        sets = list(_query_sets(ground, len(T), queries, make_rng(base + [attempt, 1]),
                                exhaustive_limit))
        bad = first_disagreement(rep, sets, oracle.independent)
        if bad is None:
            if attempt:
                log.info("gammoid certified after %d re-randomization(s), seed %r", attempt, seed)
            return rep
        log.warning("gammoid attempt %d (seed %r): disagrees with max-flow on %r, redrawing",
                    attempt, seed, bad)
    raise RandomizedConstructionError(
        f"gammoid representation failed certification {retries + 1} times (seed {seed!r})",
        seed=seed)


def truncate_rep(R: LinearRep, r: int, rng) -> LinearRep:
    """Rank-``r`` truncation by a random ``r x rows`` projection."""
    if not 0 <= r <= R.rows:
        raise InputError(f"truncation rank {r} must lie in [0, {R.rows}]")
    M = ff.random_projection(R.matrix, r, rng, R.field)
    return LinearRep(R.field, M, R.ground, R.rerandomizations)


def direct_sum(*reps: LinearRep) -> LinearRep:
    """Block-diagonal sum; ground elements become ``(i, element)`` pairs."""
    if not reps:
        raise InputError("direct sum of nothing")
    f = reps[0].field
    if any(R.field != f for R in reps):
        raise InputError("representations over different fields")
    rows = sum(R.rows for R in reps)
    cols = sum(len(R.ground) for R in reps)
    M = f.zeros((rows, cols))
    r = c = 0
    ground = []
    for i, R in enumerate(reps):
        M[r:r + R.rows, c:c + len(R.ground)] = R.matrix
        ground += [(i, g) for g in R.ground]
        r += R.rows
        c += len(R.ground)
    return LinearRep(f, M, tuple(ground))


def tensor_vector(f: PrimeField, *cols):
    out = cols[0]
    for col in cols[1:]:
        out = f.mul(out[:, None], col[None, :]).ravel()
    return out


def representative_set(R1: LinearRep, R2: LinearRep, R3: LinearRep,
                       J: Sequence[tuple[Hashable, Hashable, Hashable]]) -> list:
    """Greedy maximal independent subfamily of ``J`` under ``x -> v1 (x) v2 (x) v3``.

    Scans ``J`` in order, so the result is deterministic.  Its size never
    exceeds the product of the three ranks.
    """
    f = R1.field
    if R2.field != f or R3.field != f:
        raise InputError("representations over different fields")
    reps = [R.reduced() for R in (R1, R2, R3)]
    dim = reps[0].rows * reps[1].rows * reps[2].rows
    basis = ff.IncrementalBasis(dim, f)
    chosen = []
    for x in J:
        if len(basis) == dim:
            break
        w = tensor_vector(f, *(R.column(g) for R, g in zip(reps, x)))
        if basis.add(w):
            chosen.append(x)
    return chosen
