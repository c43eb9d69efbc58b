"""Plain-text graph format.

::

    c free-form comment
    p <n> <m> <k>
    e <u> <v> <w>      (m lines, 1-based vertex ids, integer weight >= 1)
    t <v>              (k lines, terminal order is significant)

Writers sort edges by ``(u, v)`` and never include timestamps, so equal inputs
give byte-identical files.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from typing import Sequence

from .errors import InputError


@dataclass
class WeightedGraph:
    n: int
    edges: list  # (u, v, w) triples
    terminals: tuple
    comments: tuple = ()


def _int(tok, lineno, what):
    try:
        return int(tok)
    except ValueError:
        raise InputError(f"line {lineno}: {what} {tok!r} is not an integer") from None


def parse_graph(text: str) -> WeightedGraph:
    header = None
    edges, terminals, comments = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        tag, *rest = line.split()
        if tag == "c":
            comments.append(line[1:].strip())
            continue
        if tag == "p":
            if header is not None:
                raise InputError(f"line {lineno}: second header line")
            if len(rest) != 3:
                raise InputError(f"line {lineno}: header needs 'p n m k'")
            header = tuple(_int(x, lineno, "count") for x in rest)
            if min(header) < 0:
                raise InputError(f"line {lineno}: negative count")
            continue
        if header is None:
            raise InputError(f"line {lineno}: missing 'p n m k' header before data")
        n = header[0]
        if tag == "e":
            if len(rest) != 3:
                raise InputError(f"line {lineno}: edge needs 'e u v w'")
            u, v = (_int(x, lineno, "vertex") for x in rest[:2])
            w = _int(rest[2], lineno, "weight")
            for x in (u, v):
                if not 1 <= x <= n:
                    raise InputError(f"line {lineno}: vertex {x} outside 1..{n}")
            if w < 1:
                raise InputError(f"line {lineno}: weight {w} must be at least 1")
            edges.append((u, v, w))
        elif tag == "t":
            if len(rest) != 1:
                raise InputError(f"line {lineno}: terminal needs 't v'")
            t = _int(rest[0], lineno, "vertex")
            if not 1 <= t <= n:
                raise InputError(f"line {lineno}: terminal {t} outside 1..{n}")
            if t in terminals:
                raise InputError(f"line {lineno}: duplicate terminal {t}")
            terminals.append(t)
        else:
            raise InputError(f"line {lineno}: unknown line type {tag!r}")
    if header is None:
        raise InputError("missing 'p n m k' header")
    n, m, k = header
    if len(edges) != m:
        raise InputError(f"header promises {m} edges, found {len(edges)}")
    if len(terminals) != k:
        raise InputError(f"header promises {k} terminals, found {len(terminals)}")
    return WeightedGraph(n, edges, tuple(terminals), tuple(comments))


def read_graph(path) -> WeightedGraph:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return parse_graph(text)


def format_graph(g: WeightedGraph) -> str:
    lines = [f"c {c}" for c in g.comments]
    edges = sorted((min(u, v), max(u, v), w) for u, v, w in g.edges)
    lines.append(f"p {g.n} {len(edges)} {len(g.terminals)}")
    lines += [f"e {u} {v} {w}" for u, v, w in edges]
    lines += [f"t {t}" for t in g.terminals]
    return "\n".join(lines) + "\n"


def atomic_write(path, text: str) -> None:
    """Write via a temp file in the target directory, then rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_graph(path, g: WeightedGraph) -> None:
    atomic_write(path, format_graph(g))


def relabel_for_output(vertices, edge_pairs, terminals: Sequence[int], comments=()) -> WeightedGraph:
    """Number terminals 1..k in order, other vertices after them in sorted order,
    and aggregate parallel edges into weights."""
    order = list(terminals) + sorted(v for v in vertices if v not in set(terminals))
    ids = {v: i + 1 for i, v in enumerate(order)}
    weight: dict[tuple[int, int], int] = {}
    for u, v in edge_pairs:
        a, b = sorted((ids[u], ids[v]))
        weight[(a, b)] = weight.get((a, b), 0) + 1
    edges = [(a, b, w) for (a, b), w in sorted(weight.items())]
    return WeightedGraph(len(order), edges, tuple(range(1, len(terminals) + 1)), tuple(comments))
