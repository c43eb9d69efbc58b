"""End-to-end construction of a connectivity-c mimicking network.

Steps: hang ``c`` pendant terminals off every terminal, partition the
non-terminals into pieces, compute a cut-covering edge set inside every piece,
contract everything else, and fold each pendant group back into its terminal.
The result is a minor of the input whose edges are all input edges.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Sequence

from .cutcover import cover_all_c_cuts
from .errors import InputError, InvariantError, MimicError
from .field import MERSENNE_61, PrimeField
from .graph import (Multigraph, attach_pendant_terminals, build_piece, check_terminals,
                    contract_edges, from_weighted, merge_pendant_groups, separating_contraction)
from .partition import (DEFAULT_THRESHOLD, Partition, certify_piece, refine_existence,
                        refine_expander)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BuildConfig:
    c: int
    mode: str = "existence"  # or "expander"
    oracle: str = "exact"  # or "spectral"; expander mode only
    seed: int = 0
    prime: int = MERSENNE_61
    phi: float | None = None
    sigma: float = 1.0
    enum_threshold: int = DEFAULT_THRESHOLD
    batch_contract: bool = False
    queries: int = 200

    def validate(self):
        if isinstance(self.c, bool) or not isinstance(self.c, int) or self.c < 1:
            raise InputError(f"c must be a positive integer, got {self.c!r}")
        if self.mode not in ("existence", "expander"):
            raise InputError(f"unknown mode {self.mode!r}")
        if self.oracle not in ("exact", "spectral"):
            raise InputError(f"unknown oracle {self.oracle!r}")
        if self.phi is not None and self.phi <= 0:
            raise InputError("phi must be positive")
        if self.sigma <= 0:
            raise InputError("sigma must be positive")
        if self.enum_threshold < 1:
            raise InputError("enumeration threshold must be positive")
        if self.queries < 1:
            raise InputError("certification needs at least one query")


@dataclass(frozen=True)
class PieceReport:
    interior: int
    terminals: int
    d: int
    certificate: str
    retained: int
    bound: int  # c * terminals * (c + d)


@dataclass
class MimickingNetwork:
    graph: Multigraph
    terminals: tuple
    vertex_map: dict  # input vertex -> vertex of ``graph``
    retained: frozenset  # input edge ids that survive as edges of ``graph``
    partition: Partition
    pieces: list  # PieceReport per piece
    stats: dict = field(default_factory=dict)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except MimicError as exc:
        if exc.stage is None:
            exc.stage = name
        raise


def validate_parts(parts, universe) -> list:
    parts = [frozenset(p) for p in parts]
    seen = set()
    for p in parts:
        if not p:
            raise InputError("empty part in injected partition")
        if p & seen:
            raise InputError("injected partition has overlapping parts")
        seen |= p
    if seen != set(universe):
        raise InputError("injected partition must cover every non-terminal vertex")
    return parts


def build_network(G: Multigraph, T: Sequence[int], config: BuildConfig,
                  parts: Sequence | None = None) -> MimickingNetwork:
    """Build a mimicking network for ``G`` (unit multigraph) and terminals ``T``.

    ``parts`` replaces the refinement step with a given partition of the
    non-terminal vertices; pieces then get the best certificate available.
    """
    start = time.perf_counter()
    config.validate()
    T = _stage("input", check_terminals, G, T)
    c = config.c
    fld = _stage("input", PrimeField, config.prime)
    G_new, T_new, pm = _stage("pendants", attach_pendant_terminals, G, T, c)

    if parts is not None:
        chosen = _stage("partition", validate_parts, parts, G_new.vertices - set(T_new))
        certs = [_stage("partition", certify_piece, build_piece(G_new, T_new, X), c,
                        config.enum_threshold) for X in chosen]
        part = Partition(chosen, certs)
    elif config.mode == "existence":
        part = _stage("partition", refine_existence, G_new, T_new, c, config.enum_threshold)
    else:
        part = _stage("partition", refine_expander, G_new, T_new, c, phi=config.phi,
                      sigma=config.sigma, oracle=config.oracle,
                      threshold=config.enum_threshold)

    F = set()
    reports = []
    for i, (X, cert) in enumerate(zip(part.parts, part.certificates)):
        piece = build_piece(G_new, T_new, X)
        Fi = _stage("cover", cover_all_c_cuts, piece.graph, piece.terminals, c, cert.d,
                    [config.seed, i], batch=config.batch_contract, field=fld,
                    queries=config.queries)
        k = len(piece.terminals)
        reports.append(PieceReport(len(X), k, cert.d, cert.kind, len(Fi), size_bound(c, k, cert.d)))
        F |= Fi

    drop = separating_contraction(G_new, G_new.edges.keys() - F, T)
    H_new, vm1 = contract_edges(G_new, drop)
    H_m, vm2 = _stage("merge", merge_pendant_groups, H_new, pm)
    pendant_edges = [e for t in T for e in pm.edges[t]]
    H, vm3 = contract_edges(H_m, pendant_edges, prefer=T)
    vmap = {v: vm3[vm2[vm1[v]]] for v in G.vertices}
    if len({vmap[t] for t in T}) != len(T) or any(vmap[t] != t for t in T):
        raise InvariantError("terminals did not survive as distinct vertices", stage="merge")
    if not H.edges.keys() <= G.edges.keys():
        raise InvariantError("output contains an edge that is not an input edge", stage="merge")

    stats = {
        "c": c,
        "mode": config.mode,
        "oracle": config.oracle if config.mode == "expander" else "exact",
        "seed": config.seed,
        "prime": config.prime,
        "input_vertices": G.n,
        "input_edges": G.m,
        "terminals": len(T),
        "output_vertices": H.n,
        "output_edges": H.m,
        "retained_edges": len(F & G.edges.keys()),
        "pieces": len(part.parts),
        "splits": len(part.splits),
        "rejected_splits": part.rejected,
        "piece_terminals": ",".join(str(r.terminals) for r in reports),
        "piece_d": ",".join(str(r.d) for r in reports),
        "piece_retained": ",".join(str(r.retained) for r in reports),
        "wall_time": round(time.perf_counter() - start, 3),
    }
    log.info("built network: %d vertices, %d edges", H.n, H.m)
    return MimickingNetwork(H, T, vmap, frozenset(H.edges), part, reports, stats)


def build_from_weighted(n: int, edges, T: Sequence[int], config: BuildConfig,
                        parts: Sequence | None = None) -> MimickingNetwork:
    """Convenience wrapper: vertices ``1..n`` and weighted ``(u, v, w)`` edges."""
    config.validate()
    G = _stage("input", from_weighted, edges, config.c, range(1, n + 1))
    return build_network(G, T, config, parts)


def size_bound(c: int, terminals: int, d: int) -> int:
    """Per-piece ceiling on the retained-edge count: ``c * |T_i| * (c + d)``."""
    return c * terminals * (c + d)

