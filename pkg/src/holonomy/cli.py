"""Command line front end: build, verify, report, demo.

Exit codes: 0 success, 2 bad configuration or arguments, 3 a
structural invariant failed, 4 a size/budget limit was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import _kernels
from .action import dihedral_demo
from .construction import BuildLog, ConstructionConfig, build, faithfulness_witnesses
from .errors import BudgetError, ConfigError, InvariantError
from .graph import d_bridges, read_json, write_json
from .measures import gap_report
from .nets import verify_net
from .typespace import (
    StableRegion,
    compute_types,
    pushforward_defect,
    write_holonomy_csv,
    write_type_csv,
)


def _apply_thread_env() -> None:
    val = os.environ.get("HOLONOMY_THREADS")
    if not val:
        return
    try:
        threads = int(val)
    except ValueError:
        raise ConfigError(f"HOLONOMY_THREADS must be an integer, got {val!r}")
    if threads < 1:
        raise ConfigError(f"HOLONOMY_THREADS must be >= 1, got {threads}")
    import numba

    numba.set_num_threads(threads)


def cmd_build(args) -> int:
    config = ConstructionConfig(
        m=args.m,
        levels=args.levels,
        rng_seed=args.seed,
        schedule_mode=args.schedule,
        diam_multiplier=args.diam_mult,
        girth_target=args.girth,
        chord_span=args.chord,
        size_budget=args.size_budget,
    )
    g, log = build(config)
    write_json(g, args.out)
    log.to_json(args.log)
    print(f"vertices {g.n}  edges {g.edge_count()}")
    print("stage sizes:", " ".join(str(s) for s in log.sizes))
    print("boundary edges:", " ".join(str(b) for b in log.boundary_edges))
    print(f"graph -> {args.out}")
    print(f"log -> {args.log}")
    return 0


def cmd_verify(args) -> int:
    g = read_json(args.graph)
    log = BuildLog.from_json(args.log)
    failures = []

    def check(name, fn):
        try:
            detail = fn()
        except (InvariantError, ConfigError) as e:
            failures.append(name)
            print(f"FAIL {name}: {e}")
            return
        print(f"PASS {name}" + (f" ({detail})" if detail else ""))

    def _proper():
        g.validate_proper()
        return f"{g.n} vertices"

    def _connected():
        if not g.is_connected():
            raise InvariantError("graph is not connected")
        return None

    def _log_shape():
        if log.sizes[-1] != g.n:
            raise InvariantError(
                f"log says {log.sizes[-1]} vertices, graph has {g.n}"
            )
        if log.sizes != sorted(log.sizes) or log.sizes[0] != 1:
            raise InvariantError(f"stage sizes malformed: {log.sizes}")
        for rec in log.stages:
            lo, hi = log.omega_range(rec.stage)
            if (rec.omega_start, rec.omega_stop) != (lo, hi):
                raise InvariantError(f"stage {rec.stage} range mismatch")
        return f"{len(log.stages)} stages"

    def _bridges():
        if not d_bridges(g):
            raise InvariantError("a D-edge lies on a cycle")
        return None

    def _boundaries():
        bu, bv, _ = g.edge_arrays()
        levels = log.config.levels
        for n, t in enumerate(log.sizes):
            cnt = int(((bu < t) != (bv < t)).sum())
            if cnt != log.boundary_edges[n]:
                raise InvariantError(f"|boundary G_{n}| = {cnt}, log says "
                                     f"{log.boundary_edges[n]}")
            want = 1 if n < levels else 0
            if cnt != want:
                raise InvariantError(f"|boundary G_{n}| = {cnt}, expected {want}")
        lo = 0
        for n, t in enumerate(log.sizes):
            in_u = (bu >= lo) & (bu < t)
            in_v = (bv >= lo) & (bv < t)
            cnt = int((in_u != in_v).sum())
            lo = t
            if cnt != log.omega_edges[n] or cnt > 2:
                raise InvariantError(f"|boundary Omega_{n}| = {cnt}")
        ratios = log.folner_ratios()
        if any(not b < a for a, b in zip(ratios, ratios[1:])):
            raise InvariantError(f"boundary ratios not strictly decreasing: {ratios}")
        return "sizes " + " ".join(str(b) for b in log.boundary_edges)

    def _nets():
        done = 0
        for rec in log.stages:
            if rec.stage < 2:
                continue
            for i, net in enumerate(rec.nets, start=1):
                s_i = rec.schedule[i - 1]
                arr = np.asarray(net, dtype=np.int64)
                verify_net(g, arr, 2 * s_i)
                dist, _ = _kernels.multi_source_bfs(g.nbr, arr)
                cov = int(dist[rec.h_start:rec.h_stop].max())
                if cov > 10 * s_i:
                    raise InvariantError(
                        f"stage {rec.stage} net {i} covering {cov} > {10 * s_i}"
                    )
                done += 1
        return f"{done} nets"

    def _witnesses():
        moved = faithfulness_witnesses(g, log)
        if not all(w["moved"] for w in moved):
            raise InvariantError("a word witness failed to move")
        return f"{len(moved)} words"

    def _defects():
        table = compute_types(g, args.r_max + 1, audit_samples=32)
        for n in range(log.config.levels + 1):
            omega = log.omega_range(n)
            for gen in range(4):
                for r in range(args.r_max + 1):
                    d = pushforward_defect(g, table, gen, omega, r)
                    if not (d["determined"] and d["exact"]):
                        raise InvariantError(
                            f"type determination failed on Omega_{n}, "
                            f"generator {gen}, radius {r}"
                        )
                    if d["defect"] > d["bound"]:
                        raise InvariantError(
                            f"defect {d['defect']} > bound {d['bound']} on "
                            f"Omega_{n}, generator {gen}, radius {r}"
                        )
        return f"r <= {args.r_max}"

    check("proper coloring", _proper)
    check("connected", _connected)
    check("log consistency", _log_shape)
    check("D-edges are bridges", _bridges)
    check("boundary sizes", _boundaries)
    check("net partitions", _nets)
    check("word witnesses", _witnesses)
    check("pushforward defects", _defects)

    if failures:
        raise InvariantError(f"{len(failures)} checks failed: {', '.join(failures)}")
    print("all checks passed")
    return 0


def cmd_report(args) -> int:
    g = read_json(args.graph)
    log = BuildLog.from_json(args.log)
    table = compute_types(g, args.r)
    report = gap_report(g, table, log, r=args.r, k=args.k)

    os.makedirs(args.out_dir, exist_ok=True)
    cost_path = os.path.join(args.out_dir, "cost_report.json")
    types_path = os.path.join(args.out_dir, "types.csv")
    hol_path = os.path.join(args.out_dir, "holonomy.csv")
    report.to_json(cost_path)
    write_type_csv(table, types_path)
    region = StableRegion.from_build(g, log)
    write_holonomy_csv(g, table, args.r, hol_path, stable_mask=region.mask(args.r))

    print(f"edge_measure_mu1 {report.edge_measure_mu1:.6f}")
    print(f"free_fraction_mu2 {report.free_fraction_mu2:.6f}")
    print(f"cost_estimate_mu2 {report.cost_estimate_mu2:.6f}")
    print(f"tv_distance {report.tv_distance:.6f}")
    print(f"gap {report.gap:.6f}")
    print(f"wrote {cost_path}, {types_path}, {hol_path}")
    return 0


def demo(args) -> int:
    _, report = dihedral_demo(args.n)
    print(json.dumps(report, indent=2))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="holonomy",
        description="staged edge-colored graph family: build, verify, report",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="run the staged construction")
    b.add_argument("--m", type=int, default=12, help="growth parameter")
    b.add_argument("--levels", type=int, default=3, help="number of stages")
    b.add_argument("--schedule", choices=("desk", "paper"), default="desk")
    b.add_argument("--diam-mult", type=int, default=10, dest="diam_mult")
    b.add_argument("--girth", type=int, default=12, help="odd-stage block girth")
    b.add_argument("--chord", type=int, default=13, help="odd-stage chord span")
    b.add_argument("--seed", type=int, required=True, help="rng seed")
    b.add_argument("--size-budget", type=int, default=40_000_000, dest="size_budget")
    b.add_argument("--out", default="graph.json")
    b.add_argument("--log", default="build.json")

    v = sub.add_parser("verify", help="re-run invariants from files")
    v.add_argument("--graph", default="graph.json")
    v.add_argument("--log", default="build.json")
    v.add_argument("--r-max", type=int, default=4, dest="r_max")

    rp = sub.add_parser("report", help="measures and cost comparison")
    rp.add_argument("--graph", default="graph.json")
    rp.add_argument("--log", default="build.json")
    rp.add_argument("--r", type=int, default=2)
    rp.add_argument("--k", type=int, default=5)
    rp.add_argument("--out-dir", default=".", dest="out_dir")

    d = sub.add_parser("demo", help="folded-path family walkthrough")
    d.add_argument("--n", type=int, default=24)

    args = parser.parse_args(argv)
    try:
        _apply_thread_env()
        if args.command == "build":
            return cmd_build(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "report":
            return cmd_report(args)
        return demo(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except InvariantError as e:
        print(f"invariant violated: {e}", file=sys.stderr)
        return 3
    except BudgetError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
