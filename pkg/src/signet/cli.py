"""Command-line entry point: ``signet analyze|simulate|attractors|check|construct``.

Output is plain text made of ``key=value`` tokens (or tab-separated rows with
``--output tsv``). Exit codes: 0 success, 1 a check failed, 2 parse or
usage error, 3 guard exceeded, 4 step budget exhausted, 5 certification failed.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import constructions, sweeps
from .analysis import (
    check_parallel_stability,
    check_periodic_stability,
    exists_total_cycle_config,
)
from .dynamics import (
    DEFAULT_STEP_BUDGET,
    ENUM_MAX_N,
    ThresholdNetwork,
    UpdateMode,
    config_from_code,
    energy2,
    enumerate_attractors,
    format_config,
    iter_substeps,
    orbit,
    parse_config,
    parse_mode,
    with_tie_loops,
)
from .errors import BudgetError, GuardError, ParseError, SignetError
from .graph import parse_graph_file, serialize
from .structure import (
    EXACT_RHO_MAX_N,
    SUBGRAPH_SCAN_MAX_N,
    max_subgraph_stability,
    stability_index,
    structure_report,
)

SWEEP_MAX_N = 4


@dataclass
class Guards:
    exact_rho_max_n: int = EXACT_RHO_MAX_N
    subgraph_scan_max_n: int = SUBGRAPH_SCAN_MAX_N
    enum_max_n: int = ENUM_MAX_N
    step_budget: int = DEFAULT_STEP_BUDGET

    def __post_init__(self):
        for name, value in vars(self).items():
            if value < 1:
                raise ParseError(f"guard {name} must be positive (got {value})")


@dataclass
class RunConfig:
    verb: str
    graph_path: str | None = None
    mode_spec: str = "parallel"
    init: str | None = None
    guards: Guards = field(default_factory=Guards)
    substeps: bool = False
    validate: bool = False
    heuristic_ok: bool = False
    layout: str = "disjoint"
    output_format: str = "text"
    threads: int = 1


class Printer:
    """Collects output rows; text joins ``key=value`` tokens, tsv joins values."""

    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def row(self, *tokens, **kv):
        if self.fmt == "tsv":
            parts = [str(t) for t in tokens] + [str(v) for v in kv.values()]
            line = "\t".join(parts)
        else:
            parts = [str(t) for t in tokens] + [f"{k}={v}" for k, v in kv.items()]
            line = " ".join(parts)
        print(line, file=self.stream)

    def header(self, *names):
        if self.fmt == "tsv":
            print("\t".join(names), file=self.stream)


def _read(path_or_text: str) -> str:
    p = Path(path_or_text)
    if p.is_file():
        return p.read_text()
    return path_or_text


def _load_graph(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read graph file {path!r}: {exc.strerror}") from None
    return parse_graph_file(text)


def _vset(vertices) -> str:
    return "{" + ",".join(str(v + 1) for v in sorted(vertices)) + "}"


def _bool(v: bool) -> str:
    return "true" if v else "false"


def _threads(arg) -> int:
    if arg is not None:
        return max(1, arg)
    env = os.environ.get("SIGNET_THREADS", "")
    return max(1, int(env)) if env.isdigit() else 1


# --- verbs --------------------------------------------------------------------------------


def cmd_analyze(cfg: RunConfig, args, out: Printer) -> int:
    g, _ = _load_graph(cfg.graph_path)
    rep = structure_report(g, max_n=cfg.guards.exact_rho_max_n, heuristic=cfg.heuristic_ok)
    edges = ",".join(f"{u + 1}-{v + 1}:{'+' if s > 0 else '-'}" for u, v, s in rep.witness_edge_set)
    out.header("key", "value")
    out.row(n=rep.n, m=rep.m, **{"d+": rep.d_plus, "d-": rep.d_minus})
    out.row(balanced=_bool(rep.balanced), antibalanced=_bool(rep.antibalanced))
    out.row(phi=rep.phi, rho=rep.rho, S=rep.stability)
    out.row(witness_switching=format_config(rep.witness_switching),
            witness_edges=edges or "none")
    if not rep.certified:
        out.row(certified="false", note="heuristic_rho_upper_bound")
    if args.subgraphs:
        value, vertices = max_subgraph_stability(g, max_n=cfg.guards.subgraph_scan_max_n)
        out.row(max_subgraph_S=value, vertices=_vset(vertices))
    return 0


def _network(cfg: RunConfig, tie: str = "keep"):
    g, b = _load_graph(cfg.graph_path)
    if tie != "keep":
        g = with_tie_loops(g, tie)
    T = ThresholdNetwork(g, b)
    mode = parse_mode(_read(cfg.mode_spec), T.n)
    return T, mode


def cmd_simulate(cfg: RunConfig, args, out: Printer) -> int:
    T, mode = _network(cfg, args.tie)
    init = _read(cfg.init).strip()
    if init == "enumerate":
        if T.n > cfg.guards.enum_max_n:
            raise GuardError(f"enumerating initial configurations limited to n <= "
                             f"{cfg.guards.enum_max_n} (got {T.n})")
        out.header("init", "period", "transient", "classification", "cycle")
        for code in range(1 << T.n):
            x0 = config_from_code(code, T.n)
            rec = orbit(T, x0, mode, max_steps=cfg.guards.step_budget)
            out.row(init=format_config(x0), period=rec.period, transient=rec.transient,
                    classification=rec.classification, cycle="|".join(rec.cycle_strings()))
        return 0
    x0 = parse_config(init, T.n)
    tsv = out.fmt == "tsv"

    def step_line(t, x):
        if tsv:
            out.row("t", t, format_config(x), energy2(T, x))
        else:
            out.row(f"t={t}", format_config(x), f"2L={energy2(T, x)}")

    out.header("kind", "index", "config", "2L")
    try:
        rec = orbit(T, x0, mode, max_steps=cfg.guards.step_budget)
    except BudgetError as exc:
        for t, x in enumerate(exc.trajectory):
            step_line(t, x)
        raise
    shown = rec.trajectory + [rec.cycle[0]]
    for t, x in enumerate(shown):
        if cfg.substeps and t > 0:
            for k, y in enumerate(iter_substeps(T, shown[t - 1], mode), start=1):
                if tsv:
                    out.row("s", f"{t}.{k}", format_config(y), "")
                else:
                    out.row(f"s={t}.{k}", format_config(y))
        step_line(t, x)
    if out.fmt != "tsv":
        out.row(rec.summary())
    return 0


def _canonical(cycle_strings):
    """Rotate so the lexicographically smallest string (``+`` before ``-``) leads."""
    k = cycle_strings.index(min(cycle_strings))
    return cycle_strings[k:] + cycle_strings[:k]


def cmd_attractors(cfg: RunConfig, args, out: Printer) -> int:
    T, mode = _network(cfg)
    land = enumerate_attractors(T, mode, max_n=cfg.guards.enum_max_n, workers=cfg.threads)
    rows = sorted(((a.period, _canonical(a.cycle_strings()), a) for a in land.attractors),
                  key=lambda r: (r[0], r[1][0]))
    out.header("period", "count", "basin", "cycle", "classification")
    for p, count in land.histogram.items():
        if out.fmt == "tsv":
            continue
        out.row(period=p, count=count, basin=land.basin_by_period[p])
    for p, cyc, a in rows:
        if out.fmt == "tsv":
            out.row(p, 1, a.basin, "|".join(cyc), a.classification)
        else:
            out.row(period=p, cycle="|".join(cyc), basin=a.basin, classification=a.classification)
    total = sum(a.basin for a in land.attractors)
    if total != 1 << T.n:
        raise SignetError(f"basin sizes sum to {total}, expected {1 << T.n}")
    if out.fmt != "tsv":
        out.row(total_attractors=len(land.attractors), total_states=total)
    return 0


def _check_graph(cfg: RunConfig, out: Printer) -> int:
    T, mode = _network(cfg)
    failed = False
    periodic = not mode.is_parallel(T.n)
    name = "periodic_stability" if periodic else "parallel_stability"
    try:
        if periodic:
            verdict = check_periodic_stability(T, mode, cfg.validate,
                                               cfg.guards.subgraph_scan_max_n, cfg.guards.enum_max_n)
            for k, (vs, value) in enumerate(verdict.block_worst, start=1):
                out.row(f"{name}_block", k=k, max_S=value, vertices=_vset(vs))
        else:
            verdict = check_parallel_stability(T.graph, T.thresholds, cfg.validate,
                                               cfg.guards.subgraph_scan_max_n, cfg.guards.enum_max_n)
        vs, value = verdict.worst_subgraph
        out.row(name, holds=_bool(verdict.sufficient_condition_holds), worst_S=value,
                worst_vertices=_vset(vs))
        if verdict.validated_by_enumeration is not None:
            out.row("enumeration", periods=",".join(map(str, verdict.observed_periods)),
                    only_fixed_points=_bool(verdict.validated_by_enumeration))
        failed |= not verdict.consistent
        out.row(name, "PASS" if verdict.consistent else "FAIL")
        if verdict.counterexample:
            out.row("counterexample", verdict.counterexample[2].summary())
    except GuardError as exc:
        out.row(name, "N/A", reason=str(exc).replace(" ", "_"))
    try:
        witness = exists_total_cycle_config(T.graph, max_n=cfg.guards.enum_max_n)
        s = stability_index(T.graph, max_n=cfg.guards.exact_rho_max_n)
        ok = witness is None or s >= 0
        failed |= not ok
        out.row("period2_forward", "PASS" if ok else "FAIL", S=s,
                total_cycle_witness=format_config(witness) if witness is not None else "none")
    except GuardError as exc:
        out.row("period2_forward", "N/A", reason=str(exc).replace(" ", "_"))
    return 1 if failed else 0


def _write_counterexamples(results, out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    for r in results:
        for k, item in enumerate(r.violations):
            g = item[0] if not isinstance(item, np.ndarray) else None
            path = out_dir / f"{r.name}_{k}.graph"
            if g is not None and hasattr(g, "edges"):
                b = item[-2] if r.name in ("parallel_stability", "periodic_stability") else None
                path.write_text(serialize(g, b))


def _check_sweep(cfg: RunConfig, args, out: Printer) -> int:
    m = re.fullmatch(r"\s*n\s*<=?\s*(\d+)\s*", args.sweep)
    if not m:
        raise ParseError(f"sweep spec must look like 'n<=4' (got {args.sweep!r})")
    n_max = int(m.group(1))
    if n_max > args.sweep_max_n:
        out.row("sweep", "N/A", reason=f"n<={n_max}_exceeds_guard_{args.sweep_max_n}")
        return 0
    results = [
        sweeps.parallel_stability_sweep(n_max),
        sweeps.periodic_stability_sweep(n_max, modes=args.modes, seed=args.seed),
        sweeps.total_cycle_sweep(n_max),
        sweeps.zero_threshold_sweep(n_max),
        *sweeps.period2_sweep(sweeps.connected_topologies(1, n_max)),
        sweeps.energy_sweep(sweeps.connected_topologies(1, n_max)),
    ]
    for r in results:
        # timings are left out of the text so repeated runs compare byte-for-byte
        out.row(r.name, "PASS" if r.ok else "FAIL", instances=r.instances, checked=r.checked,
                violations=len(r.violations))
    if args.out_dir:
        _write_counterexamples(results, Path(args.out_dir))
    return 0 if all(r.ok for r in results) else 1


def cmd_check(cfg: RunConfig, args, out: Printer) -> int:
    if args.sweep:
        return _check_sweep(cfg, args, out)
    if not cfg.graph_path:
        raise ParseError("check needs a graph file or --sweep")
    return _check_graph(cfg, out)


def _emit(out_dir, stem, spec):
    if not out_dir:
        return
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    (d / f"{stem}.graph").write_text(serialize(spec.network.graph, spec.network.thresholds))
    (d / f"{stem}.mode").write_text(spec.schedule.to_string(spec.n) + "\n")
    (d / f"{stem}.seed").write_text(format_config(spec.seed) + "\n")


def cmd_construct(cfg: RunConfig, args, out: Printer) -> int:
    if args.kind == "cycle":
        spec = constructions.build_cycle(args.n, certify=True)
        stem = f"cycle_n{args.n}"
        out.row(kind="cycle", n=spec.n, blocks=spec.schedule.length)
    else:
        spec = constructions.build_superpolynomial(args.m, layout=cfg.layout, certify=True)
        stem = f"superpoly_m{args.m}_{cfg.layout}"
        out.row(kind="superpoly", layout=spec.layout, n=spec.n,
                primes=",".join(map(str, spec.prime_list)),
                block_sizes=",".join(map(str, spec.block_sizes)))
    out.row(mode=spec.schedule.to_string(spec.n))
    out.row(seed=format_config(spec.seed))
    out.row(predicted=spec.predicted_period, measured=spec.measured_period)
    if getattr(spec, "finding", None):
        out.row(finding=spec.finding.replace(" ", "_"))
    _emit(args.out_dir, stem, spec)
    return 0


# --- argument parsing -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "tsv"), default="text")
    common.add_argument("--threads", type=int, default=None,
                        help="worker cap (default: $SIGNET_THREADS or 1)")
    common.add_argument("--exact-rho-max-n", type=int, default=EXACT_RHO_MAX_N)
    common.add_argument("--subgraph-scan-max-n", type=int, default=SUBGRAPH_SCAN_MAX_N)
    common.add_argument("--enum-max-n", type=int, default=ENUM_MAX_N)
    common.add_argument("--max-steps", type=int, default=DEFAULT_STEP_BUDGET,
                        help="step budget for orbit simulation")

    p = argparse.ArgumentParser(prog="signet", description="Signed threshold network toolkit.")
    sub = p.add_subparsers(dest="verb", required=True)

    a = sub.add_parser("analyze", parents=[common], help="structural indices of a signed graph")
    a.add_argument("graph")
    a.add_argument("--subgraphs", action="store_true", help="also scan induced subgraphs")
    a.add_argument("--heuristic", action="store_true",
                   help="allow an uncertified rho above the exact guard")

    s = sub.add_parser("simulate", parents=[common], help="run one orbit")
    s.add_argument("graph")
    s.add_argument("--mode", default="parallel", help="mode string or file")
    s.add_argument("--init", required=True,
                   help="configuration, all:+, all:-, enumerate, or a file holding one")
    s.add_argument("--substeps", action="store_true")
    s.add_argument("--tie", choices=("keep", "stable", "unstable"), default="keep")

    t = sub.add_parser("attractors", parents=[common], help="enumerate every attractor")
    t.add_argument("graph")
    t.add_argument("--mode", default="parallel")

    c = sub.add_parser("check", parents=[common], help="stability checks")
    c.add_argument("graph", nargs="?")
    c.add_argument("--mode", default="parallel")
    c.add_argument("--validate", action="store_true", help="confirm by full enumeration")
    c.add_argument("--sweep", help="run the exhaustive suites, e.g. 'n<=4'")
    c.add_argument("--sweep-max-n", type=int, default=SWEEP_MAX_N)
    c.add_argument("--modes", type=int, default=1000, help="random modes in the periodic suite")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out-dir", help="write counterexample graphs here")

    k = sub.add_parser("construct", parents=[common], help="build a certified long-cycle network")
    kinds = k.add_subparsers(dest="kind", required=True)
    kc = kinds.add_parser("cycle", parents=[common])
    kc.add_argument("--n", type=int, required=True)
    kc.add_argument("--out-dir")
    ks = kinds.add_parser("superpoly", parents=[common])
    ks.add_argument("--m", type=int, required=True)
    ks.add_argument("--layout", choices=("disjoint", "concatenated"), default="disjoint")
    ks.add_argument("--out-dir")
    return p


def _config(args) -> RunConfig:
    return RunConfig(
        verb=args.verb,
        graph_path=getattr(args, "graph", None),
        mode_spec=getattr(args, "mode", "parallel"),
        init=getattr(args, "init", None),
        guards=Guards(args.exact_rho_max_n, args.subgraph_scan_max_n, args.enum_max_n,
                      args.max_steps),
        substeps=getattr(args, "substeps", False),
        validate=getattr(args, "validate", False),
        heuristic_ok=getattr(args, "heuristic", False),
        layout=getattr(args, "layout", "disjoint"),
        output_format=args.output,
        threads=_threads(args.threads),
    )


VERBS = {
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "attractors": cmd_attractors,
    "check": cmd_check,
    "construct": cmd_construct,
}


def _glue_values(argv):
    """``--init -+-+`` -> ``--init=-+-+`` so argparse does not read a flag."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in ("--init", "--mode"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_values(sys.argv[1:] if argv is None else list(argv)))
    try:
        cfg = _config(args)
        return VERBS[args.verb](cfg, args, Printer(cfg.output_format))
    except SignetError as exc:
        print(f"signet: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
