"""Structural indices of signed graphs: balance, frustration, stability index.

The antibalance frustration ``rho(G)`` is the minimum number of edges whose
removal leaves every even cycle positive and every odd cycle negative. It equals
the balance frustration of the negated graph. Self-loops never take part in
either frustration count; they enter the stability index only through the loop
counts.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import GuardError, PreconditionError
from .graph import SignedGraph, components, induced_subgraph, negate

EXACT_RHO_MAX_N = 30
SUBGRAPH_SCAN_MAX_N = 16

# components up to this size are enumerated with numpy; larger ones use DFS
_VECTOR_MAX_K = 21
_CHUNK_BITS = 16


# --- balance ---------------------------------------------------------------


def is_balanced(g: SignedGraph):
    """Return ``(True, switching)`` or ``(False, negative_cycle)``.

    The switching ``s`` satisfies ``z_uv * s_u * s_v == 1`` on every edge. The
    negative cycle is a vertex list whose closing edge is implied.
    """
    s = [0] * g.n
    parent = [-1] * g.n
    depth = [0] * g.n
    for root in range(g.n):
        if s[root]:
            continue
        s[root] = 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, z in g.neighbors(u):
                if not s[v]:
                    s[v] = z * s[u]
                    parent[v] = u
                    depth[v] = depth[u] + 1
                    queue.append(v)
                elif z * s[u] * s[v] < 0:
                    return False, _tree_cycle(u, v, parent, depth)
    return True, tuple(s)


def _tree_cycle(u, v, parent, depth):
    left, right = [u], [v]
    while depth[u] > depth[v]:
        u = parent[u]
        left.append(u)
    while depth[v] > depth[u]:
        v = parent[v]
        right.append(v)
    while u != v:
        u, v = parent[u], parent[v]
        left.append(u)
        right.append(v)
    right.pop()
    return left + right[::-1]


def is_antibalanced(g: SignedGraph) -> bool:
    return is_balanced(negate(g))[0]


# --- frustration -------------------------------------------------------------


@dataclass(frozen=True)
class Frustration:
    value: int
    edges: tuple[tuple[int, int, int], ...]  # unsatisfied edges, original signs
    switching: tuple[int, ...]
    certified: bool = True
    mode: str = "balance"


def frustration_index(
    g: SignedGraph,
    mode: str = "balance",
    max_n: int = EXACT_RHO_MAX_N,
    heuristic: bool = False,
    seed: int = 0,
) -> Frustration:
    """Exact frustration by switching enumeration, per connected component.

    ``mode="balance"`` gives phi(G); ``mode="antibalance"`` gives rho(G) = phi(-G).
    Among optimal switchings the lexicographically smallest one is returned,
    ordering -1 before +1. Above ``max_n`` vertices a non-certified local search
    runs if ``heuristic`` is set; otherwise a :class:`GuardError` is raised.
    """
    if mode not in ("balance", "antibalance"):
        raise PreconditionError(f"unknown frustration mode {mode!r}")
    flip = -1 if mode == "antibalance" else 1
    certified = True
    if g.n > max_n:
        if not heuristic:
            raise GuardError(f"exact frustration limited to n <= {max_n} (got {g.n})")
        s = _local_search(g, flip, seed)
        certified = False
    else:
        s = [-1] * g.n
        for comp in components(g):
            if len(comp) == 1:
                continue
            for v, sv in zip(comp, _component_optimum(g, comp, flip)):
                s[v] = sv
    bad = tuple((u, v, z) for u, v, z in g.edges if flip * z * s[u] * s[v] < 0)
    return Frustration(len(bad), bad, tuple(s), certified, mode)


def _component_edges(g, comp, flip):
    pos = {v: k for k, v in enumerate(comp)}
    return [(pos[u], pos[v], flip * z) for u, v, z in g.edges if u in pos]


def _component_optimum(g, comp, flip):
    k = len(comp)
    edges = _component_edges(g, comp, flip)
    if k <= _VECTOR_MAX_K:
        return _enumerate_switchings(k, edges)
    return _branch_and_bound(k, edges)


def _enumerate_switchings(k, edges):
    # vertex 0 pinned to -1; vertex j >= 1 reads bit (k - 1 - j) so integer
    # order coincides with lexicographic order of the switching vector
    a = np.array([e[0] for e in edges])
    b = np.array([e[1] for e in edges])
    neg = np.array([e[2] < 0 for e in edges], dtype=np.uint8)
    shifts = np.array([k - 1 - j for j in range(1, k)], dtype=np.int64)
    total = 1 << (k - 1)
    best, best_code = None, 0
    step = 1 << _CHUNK_BITS
    for start in range(0, total, step):
        codes = np.arange(start, min(total, start + step), dtype=np.int64)
        bits = np.zeros((codes.size, k), dtype=np.uint8)
        bits[:, 1:] = (codes[:, None] >> shifts[None, :]) & 1
        unsat = ((bits[:, a] ^ bits[:, b]) ^ neg[None, :]).sum(axis=1)
        i = int(np.argmin(unsat))
        if best is None or unsat[i] < best:
            best, best_code = int(unsat[i]), int(codes[i])
    return [-1] + [1 if (best_code >> (k - 1 - j)) & 1 else -1 for j in range(1, k)]


def _branch_and_bound(k, edges):
    back = [[] for _ in range(k)]  # edges to lower-indexed vertices
    for u, v, z in edges:
        back[v].append((u, z))
    greedy = [-1] * k
    for v in range(1, k):
        cost = {t: sum(1 for u, z in back[v] if z * greedy[u] * t < 0) for t in (-1, 1)}
        greedy[v] = -1 if cost[-1] <= cost[1] else 1
    best = [sum(1 for v in range(k) for u, z in back[v] if z * greedy[u] * greedy[v] < 0) + 1]
    best_s = [list(greedy)]
    s = [0] * k
    s[0] = -1

    def dfs(v, count):
        if count >= best[0]:
            return
        if v == k:
            best[0] = count
            best_s[0] = list(s)
            return
        for t in (-1, 1):
            s[v] = t
            dfs(v + 1, count + sum(1 for u, z in back[v] if z * s[u] * t < 0))
        s[v] = 0

    dfs(1, 0)
    return best_s[0]


def _local_search(g, flip, seed, restarts=32):
    rng = random.Random(seed)
    best, best_s = None, None
    for _ in range(restarts):
        s = [rng.choice((-1, 1)) for _ in range(g.n)]
        improved = True
        while improved:
            improved = False
            for v in range(g.n):
                gain = sum(flip * z * s[v] * s[u] for u, z in g.neighbors(v))
                if gain < 0:
                    s[v] = -s[v]
                    improved = True
        cost = sum(1 for u, v, z in g.edges if flip * z * s[u] * s[v] < 0)
        if best is None or cost < best:
            best, best_s = cost, s
    return best_s


def rho(g: SignedGraph, **kw) -> int:
    return frustration_index(g, "antibalance", **kw).value


def stability_index(g: SignedGraph, **kw) -> int:
    """``-n - d+ + d- + 2m - 4 rho`` with exact rho."""
    r = frustration_index(g, "antibalance", **kw)
    if not r.certified:
        raise GuardError("stability index needs an exact rho")
    return stability_from_counts(g.n, g.m, g.d_plus, g.d_minus, r.value)


def stability_from_counts(n, m, d_plus, d_minus, rho_value):
    return -n - d_plus + d_minus + 2 * m - 4 * rho_value


def max_subgraph_stability(g: SignedGraph, max_n: int = SUBGRAPH_SCAN_MAX_N):
    """Largest stability index over all non-empty induced subgraphs.

    Ties prefer larger vertex sets, then the lexicographically smallest one.
    Returns ``(S, vertices)`` with 0-based vertices.
    """
    if g.n > max_n:
        raise GuardError(f"subgraph scan limited to n <= {max_n} (got {g.n})")
    if g.n == 0:
        raise PreconditionError("empty graph has no non-empty subgraph")
    best = None
    for size in range(g.n, 0, -1):
        for subset in itertools.combinations(range(g.n), size):
            sub, _ = induced_subgraph(g, subset)
            value = stability_index(sub)
            if best is None or value > best[0]:
                best = (value, subset)
    return best[0], frozenset(best[1])


# --- quadratic form ------------------------------------------------------------


def _check_config(g, x):
    x = np.asarray(x)
    if x.shape != (g.n,):
        raise PreconditionError(f"configuration length {x.shape} != n={g.n}")
    return x


def phi_form(g: SignedGraph, x: Sequence[int]) -> int:
    """Sum over edges of ``-z_uv * x_u * x_v``; loops excluded."""
    x = _check_config(g, x)
    return int(sum(-z * x[u] * x[v] for u, v, z in g.edges))


class AlignmentPartition(NamedTuple):
    """Edge counts by state pattern and sign of the negated weight.

    ``pp``: both endpoints +1, negated weight +1. ``pm``: both +1, negated -1.
    ``mp``: both -1, negated +1. ``mm``: both -1, negated -1. ``delta_plus`` /
    ``delta_minus``: endpoints differ, negated weight +1 / -1.
    """

    pp: int
    pm: int
    mp: int
    mm: int
    delta_plus: int
    delta_minus: int

    @property
    def phi(self) -> int:
        return (self.pp + self.mp + self.delta_minus) - (self.pm + self.mm + self.delta_plus)

    @property
    def frustrated(self) -> int:
        return self.pm + self.mm + self.delta_plus


def alignment_partition(g: SignedGraph, x: Sequence[int]) -> AlignmentPartition:
    x = _check_config(g, x)
    c = dict.fromkeys(AlignmentPartition._fields, 0)
    for u, v, z in g.edges:
        wbar = -z
        if x[u] != x[v]:
            key = "delta_plus" if wbar > 0 else "delta_minus"
        else:
            key = ("p" if x[u] > 0 else "m") + ("p" if wbar > 0 else "m")
        c[key] += 1
    return AlignmentPartition(**c)


# --- report ----------------------------------------------------------------------


@dataclass(frozen=True)
class StructureReport:
    n: int
    m: int
    d_plus: int
    d_minus: int
    phi: int
    rho: int
    stability: int
    balanced: bool
    antibalanced: bool
    witness_switching: tuple[int, ...]
    witness_edge_set: tuple[tuple[int, int, int], ...]
    certified: bool = True


def structure_report(g: SignedGraph, max_n: int = EXACT_RHO_MAX_N, heuristic=False):
    bal = frustration_index(g, "balance", max_n=max_n, heuristic=heuristic)
    anti = frustration_index(g, "antibalance", max_n=max_n, heuristic=heuristic)
    return StructureReport(
        n=g.n,
        m=g.m,
        d_plus=g.d_plus,
        d_minus=g.d_minus,
        phi=bal.value,
        rho=anti.value,
        stability=stability_from_counts(g.n, g.m, g.d_plus, g.d_minus, anti.value),
        balanced=is_balanced(g)[0],
        antibalanced=is_antibalanced(g),
        witness_switching=anti.switching,
        witness_edge_set=anti.edges,
        certified=bal.certified and anti.certified,
    )
