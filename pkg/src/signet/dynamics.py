"""Threshold-network dynamics under periodic update modes.

A configuration is an ``int8`` numpy vector over {-1, +1}. An update mode is a
list of vertex blocks applied one after another; inside a block every vertex
reads the configuration as it stood when the block started.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetError, GuardError, ParseError, PreconditionError
from .graph import SignedGraph, interaction_matrix

ENUM_MAX_N = 22
DEFAULT_STEP_BUDGET = 1_000_000


# --- configurations -----------------------------------------------------------


def parse_config(text: str, n: int | None = None) -> np.ndarray:
    """``"+-+-"`` -> ``[1, -1, 1, -1]``; also accepts ``all:+`` / ``all:-``."""
    text = text.strip()
    if text.startswith("all:"):
        if n is None:
            raise ParseError("'all:' configuration needs the node count")
        tail = text[4:]
        if tail not in ("+", "-"):
            raise ParseError(f"bad configuration {text!r}")
        return np.full(n, 1 if tail == "+" else -1, dtype=np.int8)
    text = text.replace("−", "-")
    if not text or set(text) - {"+", "-"}:
        raise ParseError(f"configuration must be a string over '+'/'-': {text!r}")
    x = np.array([1 if c == "+" else -1 for c in text], dtype=np.int8)
    if n is not None and x.size != n:
        raise ParseError(f"configuration has length {x.size}, network has {n} nodes")
    return x


def format_config(x) -> str:
    return "".join("+" if v > 0 else "-" for v in x)


def as_config(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.int8)
    if x.ndim != 1 or np.any((x != 1) & (x != -1)):
        raise PreconditionError("configuration entries must be -1 or +1")
    return x


def config_code(x) -> int:
    """Vertex 1 is the most significant bit and +1 maps to 1, so integer order
    matches lexicographic order with -1 before +1."""
    code = 0
    for v in x:
        code = (code << 1) | (1 if v > 0 else 0)
    return code


def config_from_code(code: int, n: int) -> np.ndarray:
    return np.array([1 if (code >> (n - 1 - i)) & 1 else -1 for i in range(n)], dtype=np.int8)


# --- network and modes -------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdNetwork:
    graph: SignedGraph
    thresholds: tuple[int, ...] = ()
    _w: np.ndarray = field(default=None, init=False, repr=False, compare=False)
    _b: np.ndarray = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        b = tuple(int(v) for v in self.thresholds) or (0,) * self.graph.n
        if len(b) != self.graph.n:
            raise PreconditionError(f"threshold vector has length {len(b)}, expected {self.graph.n}")
        object.__setattr__(self, "thresholds", b)
        w = interaction_matrix(self.graph)
        w.setflags(write=False)
        bb = np.array(b, dtype=np.int64)
        bb.setflags(write=False)
        object.__setattr__(self, "_w", w)
        object.__setattr__(self, "_b", bb)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def W(self) -> np.ndarray:
        return self._w

    @property
    def b(self) -> np.ndarray:
        return self._b


def with_tie_loops(g: SignedGraph, tie: str) -> SignedGraph:
    """Encode a tie-breaking rule structurally.

    ``stable`` puts a positive loop on every vertex, ``unstable`` a negative one,
    ``keep`` leaves the graph as is.
    """
    if tie == "keep":
        return g
    sign = {"stable": 1, "unstable": -1}.get(tie)
    if sign is None:
        raise PreconditionError(f"unknown tie rule {tie!r}")
    return SignedGraph(g.n, g.edges, tuple((i, sign) for i in range(g.n)))


@dataclass(frozen=True)
class UpdateMode:
    steps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        steps = tuple(tuple(sorted(set(int(v) for v in s))) for s in self.steps)
        if not steps or any(not s for s in steps):
            raise PreconditionError("update mode needs at least one non-empty block")
        if any(v < 0 for s in steps for v in s):
            raise PreconditionError("negative vertex in update mode")
        object.__setattr__(self, "steps", steps)

    @classmethod
    def parallel(cls, n: int) -> "UpdateMode":
        return cls((tuple(range(n)),))

    @classmethod
    def sequential(cls, order: Sequence[int]) -> "UpdateMode":
        return cls(tuple((v,) for v in order))

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def size(self) -> int:
        return max(len(s) for s in self.steps)

    def check(self, n: int) -> "UpdateMode":
        if max(max(s) for s in self.steps) >= n:
            raise PreconditionError(f"update mode mentions a vertex outside 1..{n}")
        return self

    def is_parallel(self, n: int) -> bool:
        return self.steps == (tuple(range(n)),)

    def to_string(self, n: int | None = None) -> str:
        if n is not None and self.is_parallel(n):
            return "parallel"
        if all(len(s) == 1 for s in self.steps):
            return "seq:" + ",".join(str(s[0] + 1) for s in self.steps)
        return ";".join("{" + ",".join(str(v + 1) for v in s) + "}" for s in self.steps)


def parse_mode(text: str, n: int) -> UpdateMode:
    """Parse ``parallel``, ``seq:1,2,4,3`` or ``{3,5};{1,2,7,8};...`` (1-based)."""
    text = text.strip()

    def vertices(chunk):
        out = []
        for tok in chunk.split(","):
            tok = tok.strip()
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(f"bad vertex {tok!r} in mode {text!r}") from None
            if not 1 <= v <= n:
                raise ParseError(f"vertex {v} out of range 1..{n} in mode")
            out.append(v - 1)
        return out

    if text == "parallel":
        return UpdateMode.parallel(n)
    if text.startswith("seq:"):
        return UpdateMode.sequential(vertices(text[4:]))
    blocks = [b.strip() for b in text.split(";") if b.strip()]
    if not blocks:
        raise ParseError("empty update mode")
    steps = []
    for blk in blocks:
        if not (blk.startswith("{") and blk.endswith("}")) or len(blk) == 2:
            raise ParseError(f"malformed block {blk!r}")
        steps.append(vertices(blk[1:-1]))
    return UpdateMode(tuple(tuple(s) for s in steps))


# --- local rule ------------------------------------------------------------------


def local_field(T: ThresholdNetwork, x, i: int) -> int:
    """``sum_j w_ij x_j - b_i``, loop term included."""
    return int(T.W[i] @ np.asarray(x, dtype=np.int64) - T.b[i])


def local_update(T: ThresholdNetwork, x, i: int) -> int:
    h = local_field(T, x, i)
    if h > 0:
        return 1
    if h < 0:
        return -1
    return int(x[i])


def flip_margin(T: ThresholdNetwork, x, i: int) -> int:
    """``-x_i * field``; vertex ``i`` flips exactly when this is at least 1."""
    return -int(x[i]) * local_field(T, x, i)


def apply_set(T: ThresholdNetwork, x, block) -> np.ndarray:
    x = np.asarray(x, dtype=np.int8)
    idx = np.asarray(block, dtype=np.intp)
    y = x.copy()
    if idx.size:
        h = T.W[idx] @ x.astype(np.int64) - T.b[idx]
        y[idx] = np.where(h > 0, 1, np.where(h < 0, -1, x[idx]))
    return y


class _Stepper:
    """Pre-sliced rows of W and b for each block of a mode."""

    def __init__(self, T: ThresholdNetwork, mode: UpdateMode):
        mode.check(T.n)
        self.blocks = [
            (np.asarray(s, dtype=np.intp), T.W[list(s)], T.b[list(s)]) for s in mode.steps
        ]

    def substeps(self, x: np.ndarray) -> Iterator[np.ndarray]:
        for idx, w, b in self.blocks:
            h = w @ x.astype(np.int64) - b
            y = x.copy()
            y[idx] = np.where(h > 0, 1, np.where(h < 0, -1, x[idx]))
            x = y
            yield x

    def __call__(self, x: np.ndarray) -> np.ndarray:
        for x in self.substeps(x):
            pass
        return x


def iter_substeps(T: ThresholdNetwork, x, mode: UpdateMode) -> Iterator[np.ndarray]:
    return _Stepper(T, mode).substeps(as_config(x))


def apply_mode(T: ThresholdNetwork, x, mode: UpdateMode, trace: bool = False):
    """One application of the global map. Returns ``(x_next, substeps)``.

    ``substeps`` lists the configuration after each block when ``trace`` is set
    and is empty otherwise.
    """
    subs = list(iter_substeps(T, x, mode))
    return subs[-1], (subs if trace else [])


# --- orbits ------------------------------------------------------------------------


def classify_cycle(cycle) -> str:
    p = len(cycle)
    if p == 1:
        return "fixed_point"
    if p == 2:
        return "total_two_cycle" if np.array_equal(cycle[1], -cycle[0]) else "two_cycle"
    return "long_cycle"


@dataclass
class OrbitRecord:
    transient: int
    period: int
    cycle: list[np.ndarray]
    classification: str
    trajectory: list[np.ndarray] = field(default_factory=list, repr=False)
    substep_trace: list[np.ndarray] | None = field(default=None, repr=False)

    def cycle_strings(self) -> list[str]:
        return [format_config(c) for c in self.cycle]

    def summary(self) -> str:
        return (
            f"period={self.period} transient={self.transient} "
            f"classification={self.classification} cycle={'|'.join(self.cycle_strings())}"
        )


def orbit(
    T: ThresholdNetwork,
    x0,
    mode: UpdateMode,
    max_steps: int = DEFAULT_STEP_BUDGET,
    trace: bool = False,
) -> OrbitRecord:
    """Iterate until the first repeated configuration.

    ``trajectory`` holds ``x^0 .. x^(transient+period-1)``. With ``trace`` the
    record also keeps every intermediate configuration, ``x^0`` first.
    """
    if max_steps < 1:
        raise PreconditionError("max_steps must be at least 1")
    step = _Stepper(T, mode)
    x = as_config(x0).copy()
    if x.size != T.n:
        raise PreconditionError(f"configuration length {x.size} != n={T.n}")
    seen = {x.tobytes(): 0}
    traj = [x]
    subs = [x] if trace else None
    for t in range(1, max_steps + 1):
        if trace:
            for y in step.substeps(x):
                subs.append(y)
            x = subs[-1]
        else:
            x = step(x)
        key = x.tobytes()
        if key in seen:
            start = seen[key]
            cycle = traj[start:]
            return OrbitRecord(start, t - start, cycle, classify_cycle(cycle), traj, subs)
        seen[key] = t
        traj.append(x)
    raise BudgetError(f"no repeat within {max_steps} steps", traj)


# --- exhaustive landscape --------------------------------------------------------------


@dataclass
class Attractor:
    representative: int  # config_code of the lexicographically smallest member
    period: int
    cycle: list[np.ndarray]
    classification: str
    basin: int

    def cycle_strings(self) -> list[str]:
        return [format_config(c) for c in self.cycle]


@dataclass
class Landscape:
    n: int
    attractors: list[Attractor]
    successor: np.ndarray = field(repr=False)

    @property
    def histogram(self) -> dict[int, int]:
        h: dict[int, int] = {}
        for a in self.attractors:
            h[a.period] = h.get(a.period, 0) + 1
        return dict(sorted(h.items()))

    @property
    def basin_by_period(self) -> dict[int, int]:
        h: dict[int, int] = {}
        for a in self.attractors:
            h[a.period] = h.get(a.period, 0) + a.basin
        return dict(sorted(h.items()))

    @property
    def periods(self) -> set[int]:
        return {a.period for a in self.attractors}


def _decode(codes: np.ndarray, n: int) -> np.ndarray:
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return (((codes[:, None] >> shifts[None, :]) & 1) * 2 - 1).astype(np.int8)


def _encode(x: np.ndarray) -> np.ndarray:
    n = x.shape[1]
    weights = (1 << np.arange(n - 1, -1, -1, dtype=np.int64))
    return ((x > 0).astype(np.int64) * weights[None, :]).sum(axis=1)


def successor_table(T: ThresholdNetwork, mode: UpdateMode, workers: int = 1,
                    chunk_bits: int = 16) -> np.ndarray:
    """``succ[code(x)] = code(F(x))`` for all ``2**n`` configurations."""
    n = T.n
    mode.check(n)
    blocks = [(list(s), T.W[list(s)].T.astype(np.int32), T.b[list(s)].astype(np.int32))
              for s in mode.steps]
    total = 1 << n
    succ = np.empty(total, dtype=np.int64)
    step = 1 << chunk_bits

    def work(start):
        codes = np.arange(start, min(total, start + step), dtype=np.int64)
        x = _decode(codes, n)
        for idx, wt, b in blocks:
            h = x.astype(np.int32) @ wt - b
            cur = x[:, idx]
            x[:, idx] = np.where(h > 0, 1, np.where(h < 0, -1, cur))
        succ[start:start + codes.size] = _encode(x)

    starts = range(0, total, step)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            list(pool.map(work, starts))
    else:
        for s in starts:
            work(s)
    return succ


def enumerate_attractors(
    T: ThresholdNetwork, mode: UpdateMode, max_n: int = ENUM_MAX_N, workers: int = 1
) -> Landscape:
    """Every attractor of ``F_mode`` with its basin size, by full state-space scan."""
    n = T.n
    if n > max_n:
        raise GuardError(f"attractor enumeration limited to n <= {max_n} (got {n})")
    succ = successor_table(T, mode, workers=workers)
    total = succ.size
    # jump = succ^(2^n) sends every state onto its attractor
    jump = succ.copy()
    low = np.arange(total, dtype=np.int64)
    hop = succ.copy()
    for _ in range(max(n, 1)):
        low = np.minimum(low, low[hop])
        hop = hop[hop]
        jump = jump[jump]
    # after n doublings ``low`` is the minimum over 2^n consecutive states, i.e.
    # the whole cycle for cycle states
    on_cycle = np.zeros(total, dtype=bool)
    on_cycle[jump] = True
    reps_all = low[jump]
    basin = np.bincount(reps_all, minlength=total)
    rep_codes = np.flatnonzero(basin)
    period = np.bincount(low[on_cycle], minlength=total)
    attractors = []
    for r in rep_codes.tolist():
        p = int(period[r])
        cyc, c = [], r
        for _ in range(p):
            cyc.append(config_from_code(c, n))
            c = int(succ[c])
        attractors.append(Attractor(r, p, cyc, classify_cycle(cyc), int(basin[r])))
    attractors.sort(key=lambda a: (a.period, a.representative))
    return Landscape(n, attractors, succ)


# --- energy --------------------------------------------------------------------------


def energy2(T: ThresholdNetwork, x) -> int:
    """Twice the energy: ``-x^T W x + 2 b^T x``."""
    x = np.asarray(x, dtype=np.int64)
    return int(-x @ T.W @ x + 2 * T.b @ x)


def energy_delta(T: ThresholdNetwork, x, x_next):
    """``(2*dL, 2*delta_i per vertex, flip set)`` for the step ``x -> x_next``.

    Satisfies ``2*dL == sum(2*delta) - d^T W d`` with ``d = x_next - x``.
    """
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(x_next, dtype=np.int64)
    if x.shape != (T.n,) or y.shape != (T.n,):
        raise PreconditionError("configuration length mismatch")
    d = y - x
    fields = T.W @ x - T.b
    delta2 = -2 * d * fields
    dl2 = energy2(T, y) - energy2(T, x)
    flips = frozenset(np.flatnonzero(d).tolist())
    return dl2, delta2, flips
