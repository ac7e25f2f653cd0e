"""Brute-force reference implementations, deliberately naive and independent
of the library code paths."""

import itertools
import math


def antibalanced_edges(n, edges):
    """True iff every cycle has sign (-1)^length, via 2-colouring with parity."""
    # on -G balance means endpoints of (-z) = +1 edges share a colour
    colour = [None] * n
    adj = [[] for _ in range(n)]
    for u, v, z in edges:
        adj[u].append((v, -z))
        adj[v].append((u, -z))
    for root in range(n):
        if colour[root] is not None:
            continue
        colour[root] = 1
        stack = [root]
        while stack:
            u = stack.pop()
            for v, s in adj[u]:
                want = colour[u] * s
                if colour[v] is None:
                    colour[v] = want
                    stack.append(v)
                elif colour[v] != want:
                    return False
    return True


def brute_rho(n, edges):
    """Fewest deleted edges leaving an antibalanced graph."""
    edges = list(edges)
    for k in range(len(edges) + 1):
        for drop in itertools.combinations(range(len(edges)), k):
            rest = [e for i, e in enumerate(edges) if i not in drop]
            if antibalanced_edges(n, rest):
                return k
    raise AssertionError("unreachable")


def brute_stability(n, edges, loops):
    d_plus = sum(1 for s in loops.values() if s > 0)
    d_minus = sum(1 for s in loops.values() if s < 0)
    return -n - d_plus + d_minus + 2 * len(edges) - 4 * brute_rho(n, edges)


def weight_lists(n, edges, loops):
    w = [[0] * n for _ in range(n)]
    for u, v, z in edges:
        w[u][v] = w[v][u] = z
    for u, s in loops.items():
        w[u][u] = s
    return w


def step(w, b, x, blocks):
    x = list(x)
    for blk in blocks:
        new = list(x)
        for i in blk:
            h = sum(w[i][j] * x[j] for j in range(len(x))) - b[i]
            new[i] = 1 if h > 0 else (-1 if h < 0 else x[i])
        x = new
    return tuple(x)


def brute_attractors(w, b, blocks):
    """``{frozenset(cycle): basin size}`` by iterating every state to its cycle."""
    n = len(b)
    out = {}
    for x in itertools.product((-1, 1), repeat=n):
        seen = []
        while x not in seen:
            seen.append(x)
            x = step(w, b, x, blocks)
        cyc = frozenset(seen[seen.index(x):])
        out[cyc] = out.get(cyc, 0) + 1
    return out


def trial_division_primes(m):
    return [k for k in range(2, m + 1) if all(k % d for d in range(2, math.isqrt(k) + 1))]
