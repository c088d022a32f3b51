"""Command-line front end.

Subcommands: kernel, compare-reps, corr, bead-limit, oracle, simulate,
gap.  Every run writes a self-describing CSV or JSON artifact (metadata
echoes the resolved configuration; data columns print with 17 significant
digits) and is byte-reproducible for a fixed argument list and seed.

Exit codes: 0 success, 2 validation failure, 3 convergence failure,
4 conditioning failure, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .correlation import CorrelationQuery, correlation_density, gap_probability
from .em_oracle import Grid, PathDescriptor, discretized_minor_kernel
from .errors import (ConditioningError, ConfigurationError, ConvergenceError,
                     TruncationError)
from .kernels import (BeadParam, ContourRep, KernelEvalConfig, SeriesRep,
                      SpaceTimePoint, kernel_adbm, kernel_bead, kernel_dbm,
                      kernel_warren, scaled_minor_kernel)
from .monte_carlo import (SimConfig, dbm_minor_samples, histogram_from_samples,
                          simulate_warren)

OUTPUT_DIR_ENV = "DYSONMINOR_OUTDIR"

EXIT_VALIDATION = 2
EXIT_CONVERGENCE = 3
EXIT_CONDITIONING = 4
EXIT_IO = 5

_FAMILY_KERNELS = {
    "dbm": lambda p, q, cfg: kernel_dbm(p, q, cfg),
    "warren": lambda p, q, cfg: kernel_warren(p, q, cfg),
    "adbm": lambda p, q, cfg: kernel_adbm(p, q, cfg),
}

# the fixed 30-case representation-equality grid: space-like admissible
# (n >= n', t <= t') pairs covering equal levels, equal times and mixed
# cases for both branch structures; positions avoid the Hermite parity
# zeros so every value is safely away from 0 and relative error is
# meaningful
COMPARE_GRID = [
    (n, t, x, npr, tp, xp)
    for (n, npr) in [(1, 1), (2, 1), (3, 2), (4, 2), (6, 3)]
    for (t, tp) in [(0.1, 0.1), (0.1, 0.5), (0.5, 2.0)]
    for (x, xp) in [(0.7, -1.0), (-1.0, 0.7)]
]
assert len(COMPARE_GRID) == 30


@dataclass
class RunSpec:
    """Resolved description of one CLI run."""

    command: str
    params: dict
    output: str | None
    fmt: str
    seed: int | None = None


@dataclass
class Artifact:
    columns: list[str]
    rows: list[list]
    metadata: dict


def _fmt_cell(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _write_artifact(art: Artifact, spec: RunSpec) -> None:
    if spec.output is None or spec.output == "-":
        handle = sys.stdout
        close = False
    else:
        out = spec.output
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base and not os.path.isabs(out):
            out = os.path.join(base, out)
        handle = open(out, "w", encoding="utf-8")
        close = True
    try:
        if spec.fmt == "csv":
            for key in sorted(art.metadata):
                handle.write(f"# {key}={_fmt_cell(art.metadata[key])}\n")
            handle.write(",".join(art.columns) + "\n")
            for row in art.rows:
                handle.write(",".join(_fmt_cell(v) for v in row) + "\n")
        else:
            payload = {
                "metadata": art.metadata,
                "columns": art.columns,
                "rows": [[_fmt_cell(v) if isinstance(v, float) else v
                          for v in row] for row in art.rows],
            }
            json.dump(payload, handle, indent=2, sort_keys=True)
            handle.write("\n")
    finally:
        if close:
            handle.close()


def _parse_point(text: str) -> SpaceTimePoint:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"point {text!r} must be level,time,position")
    return SpaceTimePoint(int(parts[0]), float(parts[1]), float(parts[2]))


def _kernel_config(args) -> KernelEvalConfig:
    if getattr(args, "rep", "series") == "contour":
        return KernelEvalConfig(ContourRep())
    return KernelEvalConfig(SeriesRep(l_max=getattr(args, "l_max", 500),
                                      term_tol=getattr(args, "term_tol", 1e-12)))


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def _run_kernel(args, spec: RunSpec) -> Artifact:
    p = _parse_point(args.point)
    q = _parse_point(args.point2)
    if args.family == "bead":
        value = kernel_bead(args.a, p, q)
    else:
        value = _FAMILY_KERNELS[args.family](p, q, _kernel_config(args))
    meta = {"command": "kernel", "family": args.family,
            "representation": args.rep, "version": __version__}
    if args.family == "bead":
        meta["a"] = args.a
    cols = ["level", "time", "position", "level2", "time2", "position2",
            "value"]
    return Artifact(cols, [[p.level, p.time, p.position,
                            q.level, q.time, q.position, value]], meta)


def _run_compare_reps(args, spec: RunSpec) -> Artifact:
    if args.family not in ("dbm", "warren"):
        raise ValueError("compare-reps supports families dbm and warren")
    rows = []
    worst = 0.0
    for (n, t, x, npr, tp, xp) in COMPARE_GRID:
        if args.family == "warren":
            t, tp = t + args.time_shift, tp + args.time_shift
        if args.family == "warren" and (t <= 0 or tp <= 0):
            raise ValueError(f"parameter time={min(t, tp)} invalid: warren "
                             "times must be positive")
        p, q = SpaceTimePoint(n, t, x), SpaceTimePoint(npr, tp, xp)
        fn = _FAMILY_KERNELS[args.family]
        series = fn(p, q, KernelEvalConfig(SeriesRep()))
        contour = fn(p, q, KernelEvalConfig(ContourRep()))
        rel = abs(series - contour) / max(abs(series), abs(contour), 1e-300)
        worst = max(worst, rel)
        rows.append([n, t, x, npr, tp, xp, series, contour, rel])
    meta = {"command": "compare-reps", "family": args.family,
            "cases": len(rows), "max_rel_err": worst, "version": __version__}
    cols = ["level", "time", "position", "level2", "time2", "position2",
            "series", "contour", "rel_err"]
    return Artifact(cols, rows, meta)


def _run_corr(args, spec: RunSpec) -> Artifact:
    points = tuple(_parse_point(t) for t in args.point)
    if args.family == "bead":
        kernel = lambda p, q: kernel_bead(args.a, p, q)
    else:
        cfg = _kernel_config(args)
        kernel = lambda p, q: _FAMILY_KERNELS[args.family](p, q, cfg)
    query = CorrelationQuery(kernel, points)
    rho = correlation_density(query)
    meta = {"command": "corr", "family": args.family, "order": len(points),
            "version": __version__}
    rows = [[i, p.level, p.time, p.position]
            for i, p in enumerate(points)]
    for row in rows:
        row.append(rho)
    return Artifact(["index", "level", "time", "position", "rho"], rows, meta)


def _run_bead_limit(args, spec: RunSpec) -> Artifact:
    bead = BeadParam(args.a)
    n, npr = (int(v) for v in args.levels.split(","))
    t, tp = 0.0, args.dt
    x, xp = args.dx, 0.0
    p, q = SpaceTimePoint(n, t, x), SpaceTimePoint(npr, tp, xp)
    limit = kernel_bead(bead, p, q)
    ns = [int(v) for v in args.N.split(",")]
    if ns != sorted(ns):
        raise ValueError("N values must be increasing")
    rows = []
    for big_n in ns:
        scaled = scaled_minor_kernel(big_n, bead, p, q)
        rows.append([big_n, scaled, limit, abs(scaled - limit)])
    meta = {
        "command": "bead-limit", "a": args.a,
        "levels": args.levels, "dt": args.dt, "dx": args.dx,
        "u_plus": f"{bead.u_plus.real:.17g}+{bead.u_plus.imag:.17g}i",
        "u_minus": f"{bead.u_minus.real:.17g}{bead.u_minus.imag:+.17g}i",
        "version": __version__,
    }
    return Artifact(["N", "scaled", "limit", "abs_err"], rows, meta)


def _run_oracle(args, spec: RunSpec) -> Artifact:
    nodes = []
    for chunk in args.path.split(";"):
        lvl, t = chunk.split(",")
        nodes.append((int(lvl), float(t)))
    grid = Grid.uniform(args.grid_lo, args.grid_hi, args.grid_n)
    path = PathDescriptor.from_nodes(nodes)
    dk = discretized_minor_kernel(path, grid, u=args.u, family=args.family)
    rows = []
    for qi, sl in enumerate(path.query_slices):
        rho = dk.rho1(sl)
        lvl, t = path.levels[sl], path.times[sl]
        for x, r in zip(grid.points, rho):
            rows.append([qi, lvl, t, float(x), float(r)])
    meta = dk.diagnostics()
    meta.update({"command": "oracle", "version": __version__})
    meta["levels"] = ";".join(str(v) for v in meta["levels"])
    meta["times"] = ";".join(repr(v) for v in meta["times"])
    meta["query_slices"] = ";".join(str(v) for v in meta["query_slices"])
    return Artifact(["query", "level", "time", "position", "rho1"], rows, meta)


def _run_simulate(args, spec: RunSpec) -> Artifact:
    times = tuple(float(v) for v in args.times.split(","))
    seed = spec.seed if spec.seed is not None else 0
    cfg = SimConfig(dimension=args.N, times=times, paths=args.paths,
                    seed=seed, euler_step=args.euler_step)
    if args.process == "dbm":
        samples = dbm_minor_samples(cfg, threads=args.threads)
        n_levels = args.N
    else:
        samples = simulate_warren(args.N, cfg, threads=args.threads)
        n_levels = args.N
    meta = {"command": "simulate", "process": args.process, "N": args.N,
            "paths": args.paths, "seed": seed, "times": args.times,
            "version": __version__}
    if args.process == "warren":
        meta["euler_step"] = cfg.euler_step
    if args.histogram:
        lvl_s, t_s, lo_s, hi_s, bins_s = args.histogram.split(",")
        lvl, t = int(lvl_s), float(t_s)
        edges = np.linspace(float(lo_s), float(hi_s), int(bins_s) + 1)
        hist = histogram_from_samples(samples[t][lvl - 1], edges, cfg.paths)
        meta["histogram"] = args.histogram
        rows = [[float(c), float(d), float(se), int(cnt)]
                for c, d, se, cnt in zip(hist.centers, hist.density,
                                         hist.std_error, hist.counts)]
        return Artifact(["center", "density", "std_error", "count"], rows, meta)
    if args.paths * sum(range(1, n_levels + 1)) * len(times) > 2_000_000:
        raise ValueError("raw records too large; use --histogram")
    rows = []
    for t in times:
        for lvl in range(1, n_levels + 1):
            arr = samples[t][lvl - 1]
            for pid in range(arr.shape[0]):
                for pos in arr[pid]:
                    rows.append([pid, lvl, t, float(pos)])
    return Artifact(["path_id", "level", "time", "position"], rows, meta)


def _run_gap(args, spec: RunSpec) -> Artifact:
    lo_s, hi_s = args.interval.split(",")
    lo = -math.inf if lo_s in ("-inf", "inf-") else float(lo_s)
    hi = math.inf if hi_s == "inf" else float(hi_s)
    prob = gap_probability(args.n, args.t, (lo, hi), nodes=args.nodes,
                           family=args.family)
    meta = {"command": "gap", "family": args.family, "nodes": args.nodes,
            "version": __version__}
    return Artifact(["level", "time", "lo", "hi", "probability"],
                    [[args.n, args.t, lo, hi, prob]], meta)


_RUNNERS = {
    "kernel": _run_kernel,
    "compare-reps": _run_compare_reps,
    "corr": _run_corr,
    "bead-limit": _run_bead_limit,
    "oracle": _run_oracle,
    "simulate": _run_simulate,
    "gap": _run_gap,
}


def run(spec: RunSpec, args) -> int:
    """Execute a validated RunSpec; returns the process exit status."""
    try:
        artifact = _RUNNERS[spec.command](args, spec)
        _write_artifact(artifact, spec)
        return 0
    except (ValueError, ConfigurationError) as exc:
        _emit_error("validation", exc)
        return EXIT_VALIDATION
    except (ConvergenceError, TruncationError) as exc:
        _emit_error("convergence", exc)
        return EXIT_CONVERGENCE
    except ConditioningError as exc:
        _emit_error("conditioning", exc)
        return EXIT_CONDITIONING
    except OSError as exc:
        _emit_error("io", exc)
        return EXIT_IO


def _emit_error(kind: str, exc: Exception) -> None:
    record = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="dysonminor",
        description="Extended minor-process kernels: evaluation, "
                    "cross-checks, oracles and simulation.")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None,
                       help="output path ('-' or omitted: stdout); relative "
                            f"paths resolve under ${OUTPUT_DIR_ENV} when set")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=1,
                       help="cap on Monte Carlo worker threads")

    k = sub.add_parser("kernel", help="evaluate one kernel entry")
    k.add_argument("--family", choices=("dbm", "warren", "bead", "adbm"),
                   required=True)
    k.add_argument("--point", required=True, help="level,time,position")
    k.add_argument("--point2", required=True)
    k.add_argument("--a", type=float, default=0.0, help="bead parameter")
    k.add_argument("--rep", choices=("series", "contour"), default="series")
    k.add_argument("--l-max", dest="l_max", type=int, default=500)
    k.add_argument("--term-tol", dest="term_tol", type=float, default=1e-12)
    common(k)

    c = sub.add_parser("compare-reps",
                       help="series vs contour over the fixed 30-case grid")
    c.add_argument("--family", choices=("dbm", "warren"), required=True)
    c.add_argument("--grid", choices=("default",), default="default")
    c.add_argument("--time-shift", dest="time_shift", type=float, default=0.0,
                   help="added to every grid time (warren needs > 0 times)")
    common(c)

    r = sub.add_parser("corr", help="correlation density at query points")
    r.add_argument("--family", choices=("dbm", "warren", "bead", "adbm"),
                   required=True)
    r.add_argument("--point", action="append", required=True,
                   help="repeatable: level,time,position")
    r.add_argument("--a", type=float, default=0.0)
    r.add_argument("--rep", choices=("series", "contour"), default="series")
    common(r)

    b = sub.add_parser("bead-limit", help="bulk-scaling convergence sweep")
    b.add_argument("--a", type=float, required=True)
    b.add_argument("--levels", required=True, help="n,n' (relative levels)")
    b.add_argument("--dt", type=float, required=True, help="t' - t")
    b.add_argument("--dx", type=float, required=True, help="x - x'")
    b.add_argument("--N", required=True, help="comma list, increasing")
    common(b)

    o = sub.add_parser("oracle", help="discrete Eynard-Mehta oracle run")
    o.add_argument("--family", choices=("ou", "warren"), required=True)
    o.add_argument("--path", required=True,
                   help="semicolon list of level,time nodes")
    o.add_argument("--grid-lo", dest="grid_lo", type=float, default=-5.0)
    o.add_argument("--grid-hi", dest="grid_hi", type=float, default=5.0)
    o.add_argument("--grid-n", dest="grid_n", type=int, default=200)
    o.add_argument("--u", type=float, default=-8.0)
    common(o)

    s = sub.add_parser("simulate", help="Monte Carlo simulation")
    s.add_argument("--process", choices=("dbm", "warren"), required=True)
    s.add_argument("--N", type=int, required=True,
                   help="matrix size (dbm) / top level (warren)")
    s.add_argument("--times", required=True, help="comma list")
    s.add_argument("--paths", type=int, required=True)
    s.add_argument("--euler-step", dest="euler_step", type=float, default=None)
    s.add_argument("--histogram", default=None,
                   help="level,time,lo,hi,bins: emit a binned density "
                        "instead of raw records")
    common(s)

    g = sub.add_parser("gap", help="Fredholm gap probability on one slice")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--t", type=float, default=1.0)
    g.add_argument("--family", choices=("dbm", "warren"), default="dbm")
    g.add_argument("--interval", required=True,
                   help="lo,hi (use -inf / inf for half lines)")
    g.add_argument("--nodes", type=int, default=64)
    common(g)
    return top


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = RunSpec(command=args.command,
                   params={k: v for k, v in vars(args).items()
                           if k not in ("out", "format", "command")},
                   output=args.out, fmt=args.format, seed=args.seed)
    return run(spec, args)


if __name__ == "__main__":
    sys.exit(main())
