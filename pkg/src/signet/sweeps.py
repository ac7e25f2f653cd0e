"""Exhaustive and randomized sweeps over small signed threshold networks.

The kernels here re-implement the threshold update in numba, independently of
:mod:`signet.dynamics`, so the sweeps double as a cross-check of the engine.
Instance families are built from the unlabeled connected graphs of the
networkx atlas; signs, loops and thresholds are enumerated on top.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from numba import njit

from .analysis import construct_period2_threshold
from .graph import SignedGraph, from_matrix

# --- instance families ---------------------------------------------------------------


def connected_topologies(n_min: int = 1, n_max: int = 4, max_edges: int | None = None):
    """Connected unlabeled graphs with ``n_min <= n <= n_max`` (atlas, n <= 7)."""
    out = []
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if n < n_min or n > n_max or n == 0 or not nx.is_connected(g):
            continue
        if max_edges is not None and g.number_of_edges() > max_edges:
            continue
        out.append((n, tuple(sorted(tuple(sorted(e)) for e in g.edges()))))
    return out


def signed_family(topologies, loops: bool = True):
    """Yield ``(topology_index, W)`` over every sign pattern and loop pattern."""
    loop_values = (0, 1, -1) if loops else (0,)
    for t, (n, edges) in enumerate(topologies):
        for signs in itertools.product((1, -1), repeat=len(edges)):
            base = np.zeros((n, n), dtype=np.int64)
            for (u, v), s in zip(edges, signs):
                base[u, v] = base[v, u] = s
            for lp in itertools.product(loop_values, repeat=n):
                w = base.copy()
                w[np.arange(n), np.arange(n)] = lp
                yield t, w


def family_arrays(topologies, loops: bool = True):
    """Group the family by node count: ``{n: (topology_ids, W stack)}``."""
    groups: dict[int, tuple[list, list]] = {}
    for t, w in signed_family(topologies, loops):
        ids, ws = groups.setdefault(w.shape[0], ([], []))
        ids.append(t)
        ws.append(w)
    return {n: (np.array(ids), np.stack(ws)) for n, (ids, ws) in sorted(groups.items())}


# --- numba kernels ---------------------------------------------------------------------


@njit(cache=True)
def _successors(W, b, masks):
    n = W.shape[0]
    N = 1 << n
    L = masks.shape[0]
    succ = np.empty(N, np.int64)
    x = np.empty(n, np.int64)
    y = np.empty(n, np.int64)
    for c in range(N):
        for i in range(n):
            x[i] = 1 if (c >> (n - 1 - i)) & 1 else -1
        for k in range(L):
            for i in range(n):
                y[i] = x[i]
                if masks[k, i]:
                    h = -b[i]
                    for j in range(n):
                        h += W[i, j] * x[j]
                    if h > 0:
                        y[i] = 1
                    elif h < 0:
                        y[i] = -1
            for i in range(n):
                x[i] = y[i]
        code = 0
        for i in range(n):
            code = code * 2 + (1 if x[i] > 0 else 0)
        succ[c] = code
    return succ


@njit(cache=True)
def _max_period(succ):
    N = succ.shape[0]
    color = np.zeros(N, np.int64)  # 0 new, 1 on current walk, 2 finished
    pos = np.zeros(N, np.int64)
    best = 0
    for s in range(N):
        if color[s]:
            continue
        t = 0
        c = s
        while color[c] == 0:
            color[c] = 1
            pos[c] = t
            t += 1
            c = succ[c]
        if color[c] == 1:
            p = t - pos[c]
            if p > best:
                best = p
        c = s
        while color[c] == 1:
            color[c] = 2
            c = succ[c]
    return best


@njit(cache=True)
def _scan_thresholds(W, masks, active, lo, hi):
    """Count threshold vectors (over ``active`` vertices) with an attractor of
    period > 1; also return the first such vector's index and period."""
    n = W.shape[0]
    R = hi - lo + 1
    na = active.shape[0]
    total = 1
    for _ in range(na):
        total *= R
    b = np.zeros(n, np.int64)
    bad = 0
    first = -1
    first_p = 0
    for t in range(total):
        r = t
        for a in range(na):
            b[active[a]] = lo + r % R
            r //= R
        p = _max_period(_successors(W, b, masks))
        if p > 1:
            bad += 1
            if first < 0:
                first = t
                first_p = p
    return bad, first, first_p


@njit(cache=True)
def subset_stability(W):
    """Stability index of every induced subgraph, indexed by vertex bitmask
    (vertex ``i`` is bit ``i``; entry 0 unused).

    Uses ``2m - 4 rho = 2 max_x sum_edges(-w_ij x_i x_j)`` with the maximum
    taken by enumeration.
    """
    n = W.shape[0]
    N = 1 << n
    out = np.zeros(N, np.int64)
    for mask in range(1, N):
        size = 0
        loops = 0
        for i in range(n):
            if (mask >> i) & 1:
                size += 1
                loops += W[i, i]
        best = -(1 << 30)
        for xc in range(1 << n):
            phi = 0
            for i in range(n):
                if not (mask >> i) & 1:
                    continue
                xi = 1 if (xc >> i) & 1 else -1
                for j in range(i + 1, n):
                    if (mask >> j) & 1 and W[i, j] != 0:
                        xj = 1 if (xc >> j) & 1 else -1
                        phi -= W[i, j] * xi * xj
            if phi > best:
                best = phi
        # -n - d+ + d- == -size - loops (loops summed with sign)
        out[mask] = -size - loops + 2 * best
    return out


@njit(cache=True)
def worst_within(sub):
    """``within[mask]`` = max stability over non-empty submasks of ``mask``."""
    N = sub.shape[0]
    within = np.empty(N, np.int64)
    within[0] = -(1 << 30)
    for mask in range(1, N):
        best = sub[mask]
        m = mask
        while m:
            low = m & (-m)
            v = within[mask ^ low]
            if v > best:
                best = v
            m ^= low
        within[mask] = best
    return within


@njit(cache=True)
def _total_cycle_exists(W, b):
    """Some x with x -> -x -> x under the parallel map (margin form)."""
    n = W.shape[0]
    for c in range(1 << n):
        ok = True
        for i in range(n):
            xi = 1 if (c >> (n - 1 - i)) & 1 else -1
            h = -b[i]
            for j in range(n):
                xj = 1 if (c >> (n - 1 - j)) & 1 else -1
                h += W[i, j] * xj
            # flip at x and at -x
            if -xi * h < 1 or xi * (-h - 2 * b[i]) < 1:
                ok = False
                break
        if ok:
            return c
    return -1


@njit(cache=True)
def _margin_scan(W, lo, hi):
    """Over all b in [lo, hi]^n and all x: margin condition at x and -x versus
    the simulated parallel step. Returns the number of disagreements."""
    n = W.shape[0]
    R = hi - lo + 1
    total = 1
    for _ in range(n):
        total *= R
    b = np.zeros(n, np.int64)
    masks = np.ones((1, n), np.bool_)
    N = 1 << n
    bad = 0
    for t in range(total):
        r = t
        for a in range(n):
            b[a] = lo + r % R
            r //= R
        succ = _successors(W, b, masks)
        for c in range(N):
            neg = (N - 1) ^ c
            sim = succ[c] == neg and succ[neg] == c
            cond = True
            for i in range(n):
                xi = 1 if (c >> (n - 1 - i)) & 1 else -1
                h = 0
                for j in range(n):
                    xj = 1 if (c >> (n - 1 - j)) & 1 else -1
                    h += W[i, j] * xj
                m1 = -xi * (h - b[i])
                m2 = xi * (-h - b[i])
                if m1 < 1 or m2 < 1:
                    cond = False
                    break
            if cond != sim:
                bad += 1
    return bad


@njit(cache=True)
def _energy_scan(W, lo, hi, sub, out):
    """Energy inequalities on every parallel step, all b in [lo, hi]^n.

    ``out`` accumulates [steps, flipped vertices, delta violations,
    total-flip steps, total-flip violations, flip-set violations].
    """
    n = W.shape[0]
    R = hi - lo + 1
    total = 1
    for _ in range(n):
        total *= R
    b = np.zeros(n, np.int64)
    x = np.empty(n, np.int64)
    y = np.empty(n, np.int64)
    full = (1 << n) - 1
    for t in range(total):
        r = t
        for a in range(n):
            b[a] = lo + r % R
            r //= R
        for c in range(1 << n):
            for i in range(n):
                x[i] = 1 if (c >> (n - 1 - i)) & 1 else -1
            flipmask = 0
            sum_delta2 = 0
            for i in range(n):
                h = -b[i]
                for j in range(n):
                    h += W[i, j] * x[j]
                if h > 0:
                    y[i] = 1
                elif h < 0:
                    y[i] = -1
                else:
                    y[i] = x[i]
                d2 = -2 * (y[i] - x[i]) * h
                sum_delta2 += d2
                if y[i] != x[i]:
                    flipmask |= 1 << i
                    out[1] += 1
                    if d2 > -4:
                        out[2] += 1
            quad = 0
            for i in range(n):
                di = y[i] - x[i]
                if di == 0:
                    continue
                for j in range(n):
                    quad += di * W[i, j] * (y[j] - x[j])
            dl2 = sum_delta2 - quad
            out[0] += 1
            if flipmask:
                if dl2 > 4 * sub[flipmask]:
                    out[5] += 1
                if flipmask == full:
                    out[3] += 1
                    if dl2 > 4 * sub[full]:
                        out[4] += 1


# --- sweep drivers ------------------------------------------------------------------------


@dataclass
class SweepResult:
    name: str
    instances: int = 0
    checked: int = 0
    violations: list = field(default_factory=list)
    elapsed: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def line(self) -> str:
        extra = "".join(f" {k}={v}" for k, v in self.notes.items())
        return (f"{self.name} {'PASS' if self.ok else 'FAIL'} instances={self.instances} "
                f"checked={self.checked} violations={len(self.violations)}{extra} "
                f"time={self.elapsed:.1f}s")


def _b_from_index(t, active, n, lo, hi):
    R = hi - lo + 1
    b = [0] * n
    for a in active:
        b[a] = lo + t % R
        t //= R
    return tuple(b)


def parallel_stability_sweep(n_max: int = 4, b_range=(-2, 2), n_min: int = 1) -> SweepResult:
    """Negative stability on every induced subgraph must give fixed points only,
    for every threshold vector in ``b_range``, under the parallel mode."""
    res = SweepResult("parallel_stability")
    t0 = time.perf_counter()
    lo, hi = b_range
    for n, (_, ws) in family_arrays(connected_topologies(n_min, n_max)).items():
        masks = np.ones((1, n), dtype=np.bool_)
        active = np.arange(n, dtype=np.int64)
        for w in ws:
            res.instances += 1
            worst = int(subset_stability(w)[1:].max())
            if worst >= 0:
                continue
            res.checked += 1
            bad, first, p = _scan_thresholds(w, masks, active, lo, hi)
            if bad:
                res.violations.append((from_matrix(w), _b_from_index(first, range(n), n, lo, hi), p))
    res.notes["b_range"] = f"[{lo},{hi}]"
    res.elapsed = time.perf_counter() - t0
    return res


def random_mode(rng: np.random.Generator, n: int, max_len: int = 6):
    """Block list of length 1..max_len; block size uniform in 1..n."""
    steps = []
    for _ in range(int(rng.integers(1, max_len + 1))):
        k = int(rng.integers(1, n + 1))
        steps.append(tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False))))
    return tuple(steps)


def periodic_stability_sweep(
    n_max: int = 4,
    modes: int = 1000,
    max_len: int = 6,
    b_range=(-2, 2),
    seed: int = 0,
    n_min: int = 2,
) -> SweepResult:
    """Random periodic modes; each mode runs against every network in the family
    whose blocks all satisfy the negative-stability condition."""
    res = SweepResult("periodic_stability")
    t0 = time.perf_counter()
    lo, hi = b_range
    rng = np.random.default_rng(seed)
    fam = family_arrays(connected_topologies(n_min, n_max))
    within = {n: np.stack([worst_within(subset_stability(w)) for w in ws])
              for n, (_, ws) in fam.items()}
    sizes = sorted(fam)
    for _ in range(modes):
        n = sizes[int(rng.integers(len(sizes)))]
        steps = random_mode(rng, n, max_len)
        bitmasks = [sum(1 << v for v in s) for s in steps]
        qualifies = np.all(within[n][:, bitmasks] < 0, axis=1)
        masks = np.zeros((len(steps), n), dtype=np.bool_)
        for k, s in enumerate(steps):
            masks[k, list(s)] = True
        active = np.array(sorted(set().union(*steps)), dtype=np.int64)
        ws = fam[n][1]
        res.instances += len(ws)
        for idx in np.flatnonzero(qualifies):
            res.checked += 1
            bad, first, p = _scan_thresholds(ws[idx], masks, active, lo, hi)
            if bad:
                b = _b_from_index(first, active.tolist(), n, lo, hi)
                res.violations.append((from_matrix(ws[idx]), steps, b, p))
    res.notes["modes"] = modes
    res.elapsed = time.perf_counter() - t0
    return res


def total_cycle_sweep(n_max: int = 4, b_range=(-2, 2)) -> SweepResult:
    res = SweepResult("total_cycle_margin")
    t0 = time.perf_counter()
    lo, hi = b_range
    for n, (_, ws) in family_arrays(connected_topologies(1, n_max)).items():
        for w in ws:
            res.instances += 1
            res.checked += (hi - lo + 1) ** n * (1 << n)
            bad = _margin_scan(w, lo, hi)
            if bad:
                res.violations.append((from_matrix(w), bad))
    res.elapsed = time.perf_counter() - t0
    return res


def zero_threshold_sweep(n_max: int = 4, b_range=(-3, 3)) -> SweepResult:
    """Zero-threshold margin witness exists iff some ``b`` in range gives a total cycle."""
    res = SweepResult("total_cycle_zero_threshold")
    t0 = time.perf_counter()
    lo, hi = b_range
    for n, (_, ws) in family_arrays(connected_topologies(1, n_max)).items():
        zero = np.zeros(n, dtype=np.int64)
        for w in ws:
            res.instances += 1
            has0 = _total_cycle_exists(w, zero) >= 0
            some = has0
            if not has0:
                for b in itertools.product(range(lo, hi + 1), repeat=n):
                    if _total_cycle_exists(w, np.array(b, dtype=np.int64)) >= 0:
                        some = True
                        break
            res.checked += 1
            if has0 != some:
                res.violations.append(from_matrix(w))
    res.elapsed = time.perf_counter() - t0
    return res


def period2_topologies(n_max: int = 5, n5_max_edges: int = 5):
    """All connected topologies up to four vertices plus the sparse five-vertex ones."""
    tops = connected_topologies(1, min(n_max, 4))
    if n_max >= 5:
        tops += connected_topologies(5, 5, max_edges=n5_max_edges)
    return tops


def period2_sweep(topologies=None, converse: bool = True) -> tuple[SweepResult, SweepResult]:
    """Forward: a total-cycle witness forces ``S(G) >= 0``. Converse:
    ``S(G) >= 0`` admits a simulation-verified period-2 construction."""
    fwd = SweepResult("period2_forward")
    conv = SweepResult("period2_converse")
    t0 = time.perf_counter()
    topologies = topologies if topologies is not None else period2_topologies()
    tconv = 0.0
    for n, (_, ws) in family_arrays(topologies).items():
        zero = np.zeros(n, dtype=np.int64)
        full = (1 << n) - 1
        for w in ws:
            fwd.instances += 1
            conv.instances += 1
            s = int(subset_stability(w)[full])
            if _total_cycle_exists(w, zero) >= 0:
                fwd.checked += 1
                if s < 0:
                    fwd.violations.append(from_matrix(w))
            if converse and s >= 0:
                t1 = time.perf_counter()
                conv.checked += 1
                if construct_period2_threshold(from_matrix(w)) is None:
                    conv.violations.append(from_matrix(w))
                tconv += time.perf_counter() - t1
    conv.elapsed = tconv
    fwd.elapsed = time.perf_counter() - t0 - tconv
    return fwd, conv


def energy_sweep(topologies=None, b_range=(-2, 2)) -> SweepResult:
    res = SweepResult("energy_bounds")
    t0 = time.perf_counter()
    lo, hi = b_range
    topologies = topologies if topologies is not None else connected_topologies(1, 4)
    counts = np.zeros(6, dtype=np.int64)
    for n, (_, ws) in family_arrays(topologies).items():
        for w in ws:
            res.instances += 1
            sub = subset_stability(w)
            before = counts.copy()
            _energy_scan(w, lo, hi, sub, counts)
            d = counts - before
            if d[2] or d[4] or d[5]:
                res.violations.append((from_matrix(w), d[2], d[4], d[5]))
    res.checked = int(counts[0])
    res.notes.update(flipped=int(counts[1]), total_flip_steps=int(counts[3]),
                     b_range=f"[{lo},{hi}]")
    res.elapsed = time.perf_counter() - t0
    return res


# --- randomized properties ----------------------------------------------------------


def random_networks(rng: np.random.Generator, count: int, n: int, p_edge=0.5,
                    loop_probs=(0.4, 0.3, 0.3), b_range=(-3, 3)):
    """Stacks ``(W, b)`` of random symmetric networks."""
    W = np.zeros((count, n, n), dtype=np.int64)
    iu = np.triu_indices(n, 1)
    present = rng.random((count, iu[0].size)) < p_edge
    signs = rng.choice((-1, 1), size=(count, iu[0].size))
    W[:, iu[0], iu[1]] = present * signs
    W += W.transpose(0, 2, 1)
    diag = rng.choice((0, 1, -1), size=(count, n), p=loop_probs)
    W[:, np.arange(n), np.arange(n)] = diag
    b = rng.integers(b_range[0], b_range[1] + 1, size=(count, n))
    return W, b


def parallel_period_sweep(orbits: int = 100_000, n_max: int = 12, seed: int = 0,
                          max_steps: int = 2000) -> SweepResult:
    """Random parallel orbits: each must satisfy ``x^t == x^(t+2)`` for some t."""
    res = SweepResult("parallel_period_le_2")
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    per_n = [orbits // n_max + (1 if k < orbits % n_max else 0) for k in range(n_max)]
    worst_t = 0
    for n, count in zip(range(1, n_max + 1), per_n):
        W, b = random_networks(rng, count, n)
        x = rng.choice((-1, 1), size=(count, n)).astype(np.int64)
        hist = [x]
        done = np.zeros(count, dtype=bool)
        reach = np.full(count, -1)
        for t in range(max_steps):
            h = np.einsum("kij,kj->ki", W, hist[-1]) - b
            nxt = np.where(h > 0, 1, np.where(h < 0, -1, hist[-1]))
            hist.append(nxt)
            if len(hist) >= 3:
                hit = np.all(hist[-1] == hist[-3], axis=1) & ~done
                reach[hit] = t - 1
                done |= hit
            if done.all():
                break
            hist = hist[-3:]
        res.instances += count
        res.checked += int(done.sum())
        for k in np.flatnonzero(~done)[:10]:
            res.violations.append((n, W[k], b[k]))
        worst_t = max(worst_t, int(reach.max()))
    res.notes["max_transient"] = worst_t
    res.elapsed = time.perf_counter() - t0
    return res


def psd_on_cube(W: np.ndarray) -> bool:
    """``x^T W x >= 0`` for every x in {-1, 1}^n, by enumeration."""
    n = W.shape[0]
    codes = np.arange(1 << n, dtype=np.int64)
    X = ((codes[:, None] >> np.arange(n)) & 1) * 2 - 1
    return bool(np.all(np.einsum("ki,ij,kj->k", X, W, X) >= 0))


def random_psd_network(rng: np.random.Generator, n: int, b_range=(-3, 3)):
    """A matrix-PSD interaction matrix: disjoint switched all-ones blocks
    ``s s^T`` plus loop-free or positive-loop isolated vertices."""
    W = np.zeros((n, n), dtype=np.int64)
    perm = rng.permutation(n)
    k = 0
    while k < n:
        size = int(rng.integers(1, n - k + 1))
        block = perm[k : k + size]
        k += size
        if size == 1 and rng.random() < 0.5:
            continue  # isolated vertex without a loop
        s = rng.choice((-1, 1), size=size)
        W[np.ix_(block, block)] = np.outer(s, s)
    b = rng.integers(b_range[0], b_range[1] + 1, size=n)
    return W, b


def psd_sweep(samples: int = 300, n_max: int = 10, seed: int = 1,
              definition: str = "cube") -> SweepResult:
    """Non-negative-definite networks against the fixed-point property.

    ``definition="cube"`` keeps random networks with ``x^T W x >= 0`` on every
    ``x`` in {-1, 1}^n; ``"matrix"`` draws positive-semidefinite matrices (all
    eigenvalues >= 0, hence also non-negative on the cube).
    """
    if definition not in ("cube", "matrix"):
        raise ValueError(f"unknown definition {definition!r}")
    res = SweepResult(f"psd_fixed_points[{definition}]")
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    tried = 0
    while res.checked < samples:
        tried += 1
        n = int(rng.integers(1, n_max + 1))
        if definition == "cube":
            # mostly positive loops and sparse edges make such instances common
            W, b = random_networks(rng, 1, n, p_edge=float(rng.uniform(0.05, 0.4)),
                                   loop_probs=(0.1, 0.85, 0.05))
            W, b = W[0], b[0]
        else:
            W, b = random_psd_network(rng, n)
            if np.linalg.eigvalsh(W).min() < -1e-9:
                raise AssertionError("generator produced a non-PSD matrix")
        if not psd_on_cube(W):
            continue
        res.instances += 1
        res.checked += 1
        p = _max_period(_successors(W, b, np.ones((1, n), dtype=np.bool_)))
        if p != 1:
            res.violations.append((W, b, p))
    res.notes["tried"] = tried
    res.elapsed = time.perf_counter() - t0
    return res


def rho_oracle_corpus(n_max: int = 5, per_topology_cap: int = 64, seed: int = 0):
    """Signed graphs for the frustration oracle check: every sign pattern when a
    topology has at most ``log2(cap)`` edges, a seeded sample otherwise."""
    rng = np.random.default_rng(seed)
    out = []
    for n, edges in connected_topologies(2, n_max):
        m = len(edges)
        if 2 ** m <= per_topology_cap:
            patterns = itertools.product((1, -1), repeat=m)
        else:
            patterns = (tuple(rng.choice((1, -1), size=m)) for _ in range(per_topology_cap))
        for signs in patterns:
            out.append(SignedGraph.build(n, [(u, v, int(s)) for (u, v), s in zip(edges, signs)]))
    return out


def run_all(n_max: int = 4, modes: int = 1000, quick: bool = False):
    """Every suite at the given scale, in a fixed order."""
    results = [
        parallel_stability_sweep(n_max),
        periodic_stability_sweep(n_max, modes=modes),
        total_cycle_sweep(n_max),
        zero_threshold_sweep(min(n_max, 3) if quick else n_max),
    ]
    results += list(period2_sweep(period2_topologies(n_max)))
    results.append(energy_sweep(connected_topologies(1, n_max)))
    return results

