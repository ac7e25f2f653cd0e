"""Witness networks with long attractors.

Unstable-majority cycles (positive cycle, negative loop on every vertex, zero
thresholds) with a four-block schedule reach period ``n - 3`` for even
``n >= 8``. Running one such cycle per prime ``k`` (size ``k + 3``) side by side
gives period equal to the product of the primes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import ThresholdNetwork, UpdateMode, format_config, orbit
from .errors import BudgetError, CertificationError, PreconditionError
from .graph import SignedGraph, cycle_graph

C8_SCHEDULE = ((2, 4), (0, 1, 6, 7), (3, 5), (0, 1, 6, 7))
C8_SEED = "-+----+-"


def unstable_majority_cycle(n: int) -> ThresholdNetwork:
    if n < 3:
        raise PreconditionError(f"cycle needs n >= 3 (got {n})")
    return ThresholdNetwork(cycle_graph(n, sign=1, loop=-1))


def _closed_form(n: int):
    frame = (0, 1, n - 2, n - 1)
    odd = tuple(range(2, n - 2, 2))
    even = tuple(range(3, n - 2, 2))
    seed = np.full(n, -1, dtype=np.int8)
    seed[1] = seed[n - 2] = 1
    return UpdateMode((odd, frame, even, frame)), seed


def _measure(T, mode, seed, budget):
    try:
        rec = orbit(T, seed, mode, max_steps=budget)
    except BudgetError:
        return None
    return rec.period if rec.transient == 0 else None


def _widen(mode: UpdateMode, seed, n_old: int, at: int):
    """Insert two vertices at position ``at`` of an ``n_old`` cycle schedule."""

    def shift(v):
        return v if v < at else v + 2

    base_steps = [tuple(shift(v) for v in s) for s in mode.steps]
    for placement in itertools.product(range(1 << len(base_steps)), repeat=2):
        steps = []
        for k, blk in enumerate(base_steps):
            extra = tuple(at + j for j in range(2) if placement[j] >> k & 1)
            steps.append(tuple(sorted(blk + extra)))
        if any(not s for s in steps):
            continue
        for bits in itertools.product((-1, 1), repeat=2):
            new_seed = np.insert(np.asarray(seed), at, bits).astype(np.int8)
            yield UpdateMode(tuple(steps)), new_seed


def long_cycle_schedule(n: int, search: bool = True):
    """Schedule and seed giving period ``n - 3`` on the unstable-majority ``C_n``.

    ``n = 8`` returns the four-block schedule ``({3,5},{1,2,7,8},{4,6},{1,2,7,8})``
    with seed ``-+----+-``. Larger ``n`` alternates the odd interior vertices,
    the frame ``{1,2,n-1,n}``, the even interior vertices and the frame again.
    If that family ever fails certification, a search widens the ``n - 2``
    solution by two vertices; :class:`CertificationError` if nothing certifies.
    """
    if n < 8 or n % 2:
        raise PreconditionError(f"long cycle schedule needs even n >= 8 (got {n})")
    T = unstable_majority_cycle(n)
    want = n - 3
    budget = 4 * n
    mode, seed = _closed_form(n)
    if n == 8:
        mode = UpdateMode(C8_SCHEDULE)
    got = _measure(T, mode, seed, budget)
    if got == want:
        return mode, seed
    search_log = [f"closed form: measured {got}"]
    if search and n > 8:
        prev_mode, prev_seed = long_cycle_schedule(n - 2, search=True)
        for at in range(2, n - 3):
            for cand_mode, cand_seed in _widen(prev_mode, prev_seed, n - 2, at):
                if _measure(T, cand_mode, cand_seed, budget) == want:
                    return cand_mode, cand_seed
            search_log.append(f"insertion at {at}: no candidate")
    raise CertificationError(f"no schedule of period {want} found for n={n}", want, got,
                             search_log)


@dataclass
class CycleNetworkSpec:
    n: int
    network: ThresholdNetwork
    schedule: UpdateMode
    seed: np.ndarray
    measured_period: int | None = None

    @property
    def predicted_period(self) -> int:
        return self.n - 3

    expected_period = predicted_period


def build_cycle(n: int, certify: bool = True) -> CycleNetworkSpec:
    mode, seed = long_cycle_schedule(n)
    spec = CycleNetworkSpec(n, unstable_majority_cycle(n), mode, seed)
    if certify:
        certify_period(spec)
    return spec


# --- primes ----------------------------------------------------------------------


@dataclass(frozen=True)
class PrimeSummary:
    primes: tuple[int, ...]
    count: int
    product: int
    theta: float  # sum of log(k), for display


def primes_up_to(m: int) -> PrimeSummary:
    if m < 2:
        raise PreconditionError("m must be at least 2")
    sieve = np.ones(m + 1, dtype=bool)
    sieve[:2] = False
    for k in range(2, math.isqrt(m) + 1):
        if sieve[k]:
            sieve[k * k :: k] = False
    ps = tuple(int(k) for k in np.flatnonzero(sieve))
    return PrimeSummary(ps, len(ps), math.prod(ps), math.fsum(math.log(k) for k in ps))


# --- super-polynomial network --------------------------------------------------------


@dataclass
class SuperPolySpec:
    m: int
    prime_list: tuple[int, ...]
    block_sizes: tuple[int, ...]
    network: ThresholdNetwork
    schedule: UpdateMode
    seed: np.ndarray
    layout: str
    offsets: tuple[int, ...] = ()
    block_schedules: list = field(default_factory=list, repr=False)
    measured_period: int | None = None

    @property
    def n(self) -> int:
        return self.network.n

    @property
    def predicted_period(self) -> int:
        return math.prod(self.prime_list)

    @property
    def finding(self) -> str | None:
        if self.measured_period is None or self.measured_period == self.predicted_period:
            return None
        return (f"{self.layout} layout: measured period {self.measured_period} "
                f"!= predicted {self.predicted_period}")


def build_superpolynomial(m: int, layout: str = "disjoint", certify: bool = True) -> SuperPolySpec:
    """One unstable-majority cycle of size ``k + 3`` per prime ``5 <= k <= m``.

    ``disjoint`` keeps the cycles as separate components. ``concatenated`` cuts
    each cycle between its last and first vertex and chains the resulting paths
    into one big cycle. Block schedules are merged block-index-wise.
    Certification failure raises for ``disjoint`` and is only recorded in
    :attr:`SuperPolySpec.finding` for ``concatenated``.
    """
    if layout not in ("disjoint", "concatenated"):
        raise PreconditionError(f"unknown layout {layout!r}")
    if m < 5:
        raise PreconditionError(f"need m >= 5 for a usable prime (got {m})")
    primes = tuple(k for k in primes_up_to(m).primes if k >= 5)
    sizes = tuple(k + 3 for k in primes)
    offsets = tuple(int(v) for v in np.cumsum((0,) + sizes[:-1]))
    total = sum(sizes)
    edges, seeds, schedules = [], [], []
    merged: list[set] = []
    for size, off in zip(sizes, offsets):
        mode, seed = long_cycle_schedule(size)
        schedules.append(mode)
        seeds.append(seed)
        for k, blk in enumerate(mode.steps):
            if k == len(merged):
                merged.append(set())
            merged[k].update(off + v for v in blk)
        if layout == "disjoint":
            edges += [(off + i, off + (i + 1) % size, 1) for i in range(size)]
    if layout == "concatenated":
        edges = [(i, (i + 1) % total, 1) for i in range(total)]
    g = SignedGraph.build(total, edges, {i: -1 for i in range(total)})
    spec = SuperPolySpec(
        m=m,
        prime_list=primes,
        block_sizes=sizes,
        network=ThresholdNetwork(g),
        schedule=UpdateMode(tuple(tuple(sorted(s)) for s in merged)),
        seed=np.concatenate(seeds).astype(np.int8),
        layout=layout,
        offsets=offsets,
        block_schedules=schedules,
    )
    if certify:
        certify_period(spec, strict=(layout == "disjoint"))
    return spec


def certify_period(spec, max_steps: int | None = None, strict: bool = True) -> int:
    """Simulate from the seed and return the measured period.

    The seed must lie on the attractor. With ``strict`` a mismatch against
    ``spec.predicted_period`` raises :class:`CertificationError`.
    """
    want = spec.predicted_period
    budget = max_steps if max_steps is not None else 2 * want + 16
    rec = orbit(spec.network, spec.seed, spec.schedule, max_steps=budget)
    spec.measured_period = rec.period
    if strict and (rec.transient != 0 or rec.period != want):
        raise CertificationError(
            f"seed {format_config(spec.seed)[:64]} gives period {rec.period} "
            f"(transient {rec.transient}), predicted {want}",
            want,
            rec.period,
        )
    return rec.period
