"""Undirected signed graphs with signed self-loops, plus the text file format.

Vertices are 0-based in memory and 1-based in files and reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError, PreconditionError

SIGNS = (-1, 1)


@dataclass(frozen=True)
class SignedGraph:
    """Immutable signed graph.

    ``edges`` is a sorted tuple of ``(u, v, sign)`` with ``u < v``; ``loops`` is a
    sorted tuple of ``(u, sign)``. Use :meth:`build` to construct from loose input.
    """

    node_count: int
    edges: tuple[tuple[int, int, int], ...] = ()
    loops: tuple[tuple[int, int], ...] = ()
    _adj: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.node_count
        if n < 0:
            raise PreconditionError("node_count must be non-negative")
        seen = set()
        for u, v, s in self.edges:
            if not (0 <= u < v < n):
                raise PreconditionError(f"bad edge ({u}, {v})")
            if s not in SIGNS:
                raise PreconditionError(f"bad sign {s}")
            if (u, v) in seen:
                raise PreconditionError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        loop_seen = set()
        for u, s in self.loops:
            if not 0 <= u < n or s not in SIGNS or u in loop_seen:
                raise PreconditionError(f"bad loop ({u}, {s})")
            loop_seen.add(u)
        adj = [[] for _ in range(n)]
        for u, v, s in self.edges:
            adj[u].append((v, s))
            adj[v].append((u, s))
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def build(cls, n: int, edges: Iterable = (), loops=()) -> "SignedGraph":
        """Normalize edge orientation and ordering. ``loops`` may be a dict or pairs."""
        es = []
        for u, v, s in edges:
            if u == v:
                raise PreconditionError(f"self-edge ({u}, {u}) must be a loop")
            u, v = min(u, v), max(u, v)
            es.append((int(u), int(v), int(s)))
        if isinstance(loops, dict):
            loops = loops.items()
        ls = [(int(u), int(s)) for u, s in loops]
        return cls(n, tuple(sorted(es)), tuple(sorted(ls)))

    @property
    def n(self) -> int:
        return self.node_count

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def d_plus(self) -> int:
        return sum(1 for _, s in self.loops if s > 0)

    @property
    def d_minus(self) -> int:
        return sum(1 for _, s in self.loops if s < 0)

    @property
    def loop_map(self) -> dict[int, int]:
        return dict(self.loops)

    def neighbors(self, i: int) -> tuple[tuple[int, int], ...]:
        """``(j, sign)`` pairs for every edge at ``i``, loops excluded."""
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self._adj[i])

    def loop_sign(self, i: int) -> int:
        return self.loop_map.get(i, 0)

    def matrix(self) -> np.ndarray:
        return interaction_matrix(self)

    def __str__(self):
        return serialize(self).strip()


def interaction_matrix(g: SignedGraph) -> np.ndarray:
    """Symmetric n x n matrix with entries in {-1, 0, 1}; loops on the diagonal."""
    w = np.zeros((g.n, g.n), dtype=np.int64)
    for u, v, s in g.edges:
        w[u, v] = w[v, u] = s
    for u, s in g.loops:
        w[u, u] = s
    return w


def from_matrix(w) -> SignedGraph:
    w = np.asarray(w)
    if w.ndim != 2 or w.shape[0] != w.shape[1] or not np.array_equal(w, w.T):
        raise PreconditionError("interaction matrix must be square and symmetric")
    n = w.shape[0]
    edges = [(i, j, int(w[i, j])) for i in range(n) for j in range(i + 1, n) if w[i, j]]
    loops = [(i, int(w[i, i])) for i in range(n) if w[i, i]]
    return SignedGraph.build(n, edges, loops)


def negate(g: SignedGraph) -> SignedGraph:
    return SignedGraph(
        g.n,
        tuple((u, v, -s) for u, v, s in g.edges),
        tuple((u, -s) for u, s in g.loops),
    )


def remove_edges(g: SignedGraph, drop) -> SignedGraph:
    drop = {(min(u, v), max(u, v)) for u, v, *_ in drop}
    return SignedGraph(g.n, tuple(e for e in g.edges if (e[0], e[1]) not in drop), g.loops)


def switch(g: SignedGraph, s: Sequence[int]) -> SignedGraph:
    """Apply the vertex switching ``s``; loop signs are invariant under switching."""
    return SignedGraph(g.n, tuple((u, v, z * s[u] * s[v]) for u, v, z in g.edges), g.loops)


def induced_subgraph(g: SignedGraph, vertices) -> tuple[SignedGraph, list[int]]:
    """Restrict to ``vertices``; returns the subgraph and the new-to-old vertex map."""
    keep = sorted(set(int(v) for v in vertices))
    if not keep:
        raise PreconditionError("induced subgraph needs a non-empty vertex set")
    if keep[0] < 0 or keep[-1] >= g.n:
        raise PreconditionError("vertex out of range")
    index = {v: k for k, v in enumerate(keep)}
    edges = tuple(
        (index[u], index[v], s) for u, v, s in g.edges if u in index and v in index
    )
    loops = tuple((index[u], s) for u, s in g.loops if u in index)
    return SignedGraph(len(keep), edges, loops), keep


def components(g: SignedGraph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        stack, comp = [root], []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v, _ in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


# --- file format -----------------------------------------------------------


def _parse_sign(tok: str, lineno: int) -> int:
    if tok in ("+1", "1", "+"):
        return 1
    if tok in ("-1", "-"):
        return -1
    raise ParseError(f"malformed sign {tok!r}", lineno)


def _parse_vertex(tok: str, n: int, lineno: int) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(f"malformed vertex {tok!r}", lineno) from None
    if not 1 <= v <= n:
        raise ParseError(f"vertex {v} out of range 1..{n}", lineno)
    return v - 1


def parse_graph_file(text: str) -> tuple[SignedGraph, tuple[int, ...]]:
    """Parse the line format; returns the graph and its threshold vector."""
    n = None
    edges: dict[tuple[int, int], int] = {}
    loops: dict[int, int] = {}
    thresholds: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kw = tok[0]
        if n is None:
            if kw != "nodes" or len(tok) != 2:
                raise ParseError("expected 'nodes <n>' header", lineno)
            try:
                n = int(tok[1])
            except ValueError:
                raise ParseError(f"malformed node count {tok[1]!r}", lineno) from None
            if n < 1:
                raise ParseError("node count must be positive", lineno)
            continue
        if kw == "nodes":
            raise ParseError("duplicate 'nodes' header", lineno)
        if kw == "edge":
            if len(tok) != 4:
                raise ParseError("expected 'edge <u> <v> <+1|-1>'", lineno)
            u = _parse_vertex(tok[1], n, lineno)
            v = _parse_vertex(tok[2], n, lineno)
            if u == v:
                raise ParseError("self-edge must use 'loop'", lineno)
            key = (min(u, v), max(u, v))
            if key in edges:
                raise ParseError(f"duplicate edge {key[0] + 1} {key[1] + 1}", lineno)
            edges[key] = _parse_sign(tok[3], lineno)
        elif kw == "loop":
            if len(tok) != 3:
                raise ParseError("expected 'loop <u> <+1|-1>'", lineno)
            u = _parse_vertex(tok[1], n, lineno)
            if u in loops:
                raise ParseError(f"duplicate loop on {u + 1}", lineno)
            loops[u] = _parse_sign(tok[2], lineno)
        elif kw == "threshold":
            if len(tok) != 3:
                raise ParseError("expected 'threshold <u> <integer>'", lineno)
            u = _parse_vertex(tok[1], n, lineno)
            if u in thresholds:
                raise ParseError(f"duplicate threshold on {u + 1}", lineno)
            try:
                thresholds[u] = int(tok[2])
            except ValueError:
                raise ParseError(f"malformed threshold {tok[2]!r}", lineno) from None
        else:
            raise ParseError(f"unknown directive {kw!r}", lineno)
    if n is None:
        raise ParseError("empty graph file: missing 'nodes <n>' header")
    g = SignedGraph.build(n, ((u, v, s) for (u, v), s in edges.items()), loops)
    b = tuple(thresholds.get(i, 0) for i in range(n))
    return g, b


def parse_graph(text: str) -> SignedGraph:
    return parse_graph_file(text)[0]


def _fmt_sign(s: int) -> str:
    return "+1" if s > 0 else "-1"


def serialize(g: SignedGraph, thresholds: Sequence[int] | None = None) -> str:
    """Canonical form: header, sorted edges, sorted loops, nonzero thresholds."""
    lines = [f"nodes {g.n}"]
    lines += [f"edge {u + 1} {v + 1} {_fmt_sign(s)}" for u, v, s in g.edges]
    lines += [f"loop {u + 1} {_fmt_sign(s)}" for u, s in g.loops]
    if thresholds is not None:
        lines += [f"threshold {i + 1} {int(b)}" for i, b in enumerate(thresholds) if b]
    return "\n".join(lines) + "\n"


# --- small named graphs used throughout tests and scripts --------------------


def cycle_graph(n: int, sign: int = 1, loop: int = 0) -> SignedGraph:
    edges = [(i, (i + 1) % n, sign) for i in range(n)]
    loops = {i: loop for i in range(n)} if loop else {}
    return SignedGraph.build(n, edges, loops)


def path_graph(n: int, sign: int = 1, loop: int = 0) -> SignedGraph:
    edges = [(i, i + 1, sign) for i in range(n - 1)]
    loops = {i: loop for i in range(n)} if loop else {}
    return SignedGraph.build(n, edges, loops)
