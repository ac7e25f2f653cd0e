"""Executable checkers for the stability results.

Two-cycle conditions are written in margin form: vertex ``i`` flips from ``x``
exactly when ``-x_i * (sum_j w_ij x_j - b_i) >= 1``. A configuration sits on a
total two-cycle when that holds for every vertex at both ``x`` and ``-x``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .dynamics import (
    ENUM_MAX_N,
    OrbitRecord,
    ThresholdNetwork,
    UpdateMode,
    _decode,
    energy_delta,
    enumerate_attractors,
    orbit,
)
from .errors import GuardError, PreconditionError
from .graph import SignedGraph, induced_subgraph
from .structure import (
    SUBGRAPH_SCAN_MAX_N,
    frustration_index,
    max_subgraph_stability,
    stability_index,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlipSets:
    B_plus: frozenset
    B_minus: frozenset
    P_plus: frozenset
    P_minus: frozenset

    @property
    def alignment(self) -> int:
        """``(|B+| - |B-|) - (|P+| - |P-|)``, which equals ``x_i * sum_j w_ij x_j``."""
        return (len(self.B_plus) - len(self.B_minus)) - (len(self.P_plus) - len(self.P_minus))


def flip_sets(T: ThresholdNetwork, x, i: int) -> FlipSets:
    sets = {(True, 1): set(), (True, -1): set(), (False, 1): set(), (False, -1): set()}
    for j, w in T.graph.neighbors(i):
        sets[(x[j] == x[i], w)].add(j)
    return FlipSets(
        frozenset(sets[(True, 1)]),
        frozenset(sets[(True, -1)]),
        frozenset(sets[(False, 1)]),
        frozenset(sets[(False, -1)]),
    )


def margins(T: ThresholdNetwork, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    return -x * (T.W @ x - T.b)


def total_two_cycle_condition(T: ThresholdNetwork, x, verify: bool = False) -> bool:
    """True iff ``x <-> -x`` is a two-cycle of the parallel map.

    Equivalent to ``-(w_ii + alignment_i) >= 1 + |b_i|`` at every vertex.
    """
    x = np.asarray(x, dtype=np.int64)
    ok = bool(np.all(margins(T, x) >= 1) and np.all(margins(T, -x) >= 1))
    if ok and verify:
        rec = orbit(T, x, UpdateMode.parallel(T.n), max_steps=4)
        if rec.classification != "total_two_cycle" or rec.transient != 0:
            raise AssertionError(f"margin condition held but orbit is {rec.summary()}")
    return ok


def _all_configs(n: int) -> np.ndarray:
    return _decode(np.arange(1 << n, dtype=np.int64), n).astype(np.int64)


def exists_total_cycle_config(g: SignedGraph, max_n: int = ENUM_MAX_N):
    """A configuration on a total two-cycle of ``(g, b=0)``, or ``None``.

    With zero thresholds the margin condition is the weakest possible, so this
    also decides whether *any* threshold vector yields a total two-cycle. The
    lexicographically smallest witness is returned.
    """
    if g.n > max_n:
        raise GuardError(f"configuration search limited to n <= {max_n} (got {g.n})")
    T = ThresholdNetwork(g)
    X = _all_configs(g.n)
    ok = np.all(-X * (X @ T.W) >= 1, axis=1)
    hits = np.flatnonzero(ok)
    if not hits.size:
        return None
    x = X[hits[0]].astype(np.int8)
    total_two_cycle_condition(T, x, verify=True)
    return x


@dataclass(frozen=True)
class Period2Construction:
    thresholds: tuple[int, ...]
    config: np.ndarray
    flip_set: frozenset
    strategy: str
    orbit: OrbitRecord = field(repr=False, compare=False)


def _induced_margins(g: SignedGraph, x, keep: set) -> dict[int, int]:
    out = {}
    for i in keep:
        s = -g.loop_sign(i)
        for j, w in g.neighbors(i):
            if j in keep:
                s -= w * x[i] * x[j]
        out[i] = s
    return out


def _prune(g: SignedGraph, x) -> set:
    keep = set(range(g.n))
    while keep:
        mg = _induced_margins(g, x, keep)
        drop = {i for i, v in mg.items() if v < 1}
        if not drop:
            break
        keep -= drop
    return keep


def _pinned(g: SignedGraph, x, flip: set):
    """Thresholds neutralising outside neighbours pinned at -1, and pinning the rest."""
    b, y = [], np.full(g.n, -1, dtype=np.int8)
    for i in range(g.n):
        if i in flip:
            b.append(-sum(w for j, w in g.neighbors(i) if j not in flip))
            y[i] = x[i]
        else:
            b.append(max(2 * g.degree(i), 2))
    return tuple(b), y


def _try(g, x, flip, strategy):
    b, y = _pinned(g, x, flip)
    T = ThresholdNetwork(g, b)
    rec = orbit(T, y, UpdateMode.parallel(g.n), max_steps=4)
    if rec.transient == 0 and rec.period == 2:
        return Period2Construction(b, y, frozenset(flip), strategy, rec)
    return None


def construct_period2_threshold(g: SignedGraph, max_n: int = ENUM_MAX_N):
    """Threshold vector and seed giving a period-2 attractor, for ``S(g) >= 0``.

    Strategy order: prune an energy-maximising configuration down to a vertex
    set where every induced margin is at least 1; a single negative-loop vertex;
    then exhaustive search over vertex sets and their configurations. Every
    candidate is checked by simulation. ``None`` means all strategies failed,
    which would contradict the stability result and is logged as a finding.
    """
    if g.n > max_n:
        raise GuardError(f"construction limited to n <= {max_n} (got {g.n})")
    s = stability_index(g)
    if s < 0:
        raise PreconditionError(f"stability index is {s} < 0; no construction applies")
    # the optimal antibalance switching maximises the quadratic form; negate it
    # so vertex 1 starts at +1 (the form is even)
    xstar = -np.array(frustration_index(g, "antibalance").switching, dtype=np.int8)
    keep = _prune(g, xstar)
    if keep:
        got = _try(g, xstar, keep, "pruned")
        if got:
            return got
    for i, sign in g.loops:
        if sign < 0:
            got = _try(g, np.ones(g.n, dtype=np.int8), {i}, "negative_loop")
            if got:
                return got
    for size in range(g.n, 0, -1):
        for subset in itertools.combinations(range(g.n), size):
            sub, _ = induced_subgraph(g, subset)
            z = exists_total_cycle_config(sub)
            if z is None:
                continue
            x = np.full(g.n, -1, dtype=np.int8)
            x[list(subset)] = z
            got = _try(g, x, set(subset), "exhaustive")
            if got:
                return got
    log.warning("no period-2 construction found for S=%d graph: %s", s, g)
    return None


# --- stability verdicts ------------------------------------------------------------


@dataclass
class StabilityVerdict:
    sufficient_condition_holds: bool
    worst_subgraph: tuple[frozenset, int]
    validated_by_enumeration: bool | None = None  # True when only fixed points were found
    observed_periods: tuple[int, ...] = ()
    counterexample: tuple | None = None
    block_worst: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not (self.sufficient_condition_holds and self.validated_by_enumeration is False)


def _validate(T, mode, verdict, enum_max_n):
    land = enumerate_attractors(T, mode, max_n=enum_max_n)
    periods = tuple(sorted(land.periods))
    verdict.observed_periods = periods
    verdict.validated_by_enumeration = periods == (1,)
    if verdict.sufficient_condition_holds and not verdict.validated_by_enumeration:
        bad = next(a for a in land.attractors if a.period > 1)
        rec = orbit(T, bad.cycle[0], mode)
        verdict.counterexample = (T.thresholds, mode, rec)
    return verdict


def check_parallel_stability(
    g: SignedGraph,
    b=None,
    validate: bool = False,
    scan_max_n: int = SUBGRAPH_SCAN_MAX_N,
    enum_max_n: int = ENUM_MAX_N,
) -> StabilityVerdict:
    value, vertices = max_subgraph_stability(g, max_n=scan_max_n)
    verdict = StabilityVerdict(value < 0, (vertices, value))
    if validate:
        T = ThresholdNetwork(g, tuple(b) if b is not None else ())
        _validate(T, UpdateMode.parallel(g.n), verdict, enum_max_n)
    return verdict


def check_periodic_stability(
    T: ThresholdNetwork,
    mode: UpdateMode,
    validate: bool = False,
    scan_max_n: int = SUBGRAPH_SCAN_MAX_N,
    enum_max_n: int = ENUM_MAX_N,
) -> StabilityVerdict:
    """Condition: every induced subgraph inside every block has ``S < 0``."""
    mode.check(T.n)
    block_worst = []
    for block in dict.fromkeys(mode.steps):
        if len(block) > scan_max_n:
            raise GuardError(f"block of size {len(block)} exceeds subgraph scan guard")
        sub, back = induced_subgraph(T.graph, block)
        value, vertices = max_subgraph_stability(sub, max_n=scan_max_n)
        block_worst.append((frozenset(back[v] for v in vertices), value))
    worst = max(block_worst, key=lambda t: t[1])
    verdict = StabilityVerdict(all(v < 0 for _, v in block_worst), worst, block_worst=block_worst)
    if validate:
        _validate(T, mode, verdict, enum_max_n)
    return verdict


# --- energy law verification ----------------------------------------------------------


@dataclass
class EnergyStep:
    t: int
    dl2: int
    flip_set: frozenset
    min_delta2: int | None
    bound_total: int | None  # 4 S(G) on total-flip steps
    bound_flip_set: int | None  # 4 S(G[V'])


@dataclass
class EnergyReport:
    steps: list[EnergyStep]
    violations: list[tuple[str, int, str]]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_energy_laws(T: ThresholdNetwork, trajectory, attractor_start: int | None = None):
    """Check the per-step energy inequalities along a parallel trajectory.

    (a) every flipped vertex has ``2*delta_i <= -4``; (b) a step flipping every
    vertex has ``2*dL <= 4*S(G)``; (c) ``2*dL <= 4*S(G[V'])`` for the flip set
    ``V'``. Violations are returned, tagged ``attractor`` or ``transient`` when
    ``attractor_start`` is known.
    """
    g = T.graph

    @lru_cache(maxsize=None)
    def s_of(vertices):
        return stability_index(induced_subgraph(g, vertices)[0])

    steps, violations = [], []
    for t in range(len(trajectory) - 1):
        x, y = trajectory[t], trajectory[t + 1]
        dl2, d2, flips = energy_delta(T, x, y)
        where = "" if attractor_start is None else (
            "attractor" if t >= attractor_start else "transient")
        mind = None
        bt = bf = None
        if flips:
            mind = int(min(d2[i] for i in flips))
            if mind > -4:
                violations.append(("delta", t, where))
            bf = 4 * s_of(tuple(sorted(flips)))
            if dl2 > bf:
                violations.append(("flip_set_bound", t, where))
            if len(flips) == g.n:
                bt = 4 * s_of(tuple(range(g.n)))
                if dl2 > bt:
                    violations.append(("total_flip_bound", t, where))
        steps.append(EnergyStep(t, dl2, flips, mind, bt, bf))
    return EnergyReport(steps, violations)
