"""``route``: queries, oracle cross-checks, instance generation and benchmarks.

Exit codes: 0 success, 1 internal invariant violation, 2 bad input or
arguments, 3 oracle resource guard tripped, 4 oracle comparison mismatch.
"""
from __future__ import annotations

import argparse
import csv
import json
import random
import statistics
import sys
import time
from pathlib import Path

from .admissibility import check_walk_admissible
from .dynamic import check_dynamic_witness, dynamic_s_dijkstra
from .netgen import LevelProfile, gen_grid, gen_random, inject_changes
from .network import (
    INF,
    DynamicOverlay,
    FormatError,
    ValidationError,
    dump_network,
    dump_overlay,
    dynamic_weights,
    load_network,
    load_overlay,
)
from .oracle import (
    OracleBudgetExceeded,
    oracle_def2_admissible_edges,
    oracle_dynamic,
    oracle_prefix_optimal,
    prefix_admissible_edges,
)
from .static import extract_walk, s_dijkstra


class InvariantViolation(RuntimeError):
    pass


def _cost(value):
    return "inf" if value == INF else value


def _load(args):
    with open(args.network) as fh:
        network, scope = load_network(fh)
    overlay = None
    if getattr(args, "changes", None):
        with open(args.changes) as fh:
            overlay = load_overlay(fh, network)
    return network, scope, overlay


def _check_source(network, v, name="source"):
    if not 0 <= v < network.vertex_count:
        raise ValidationError(f"{name} {v} out of range 0..{network.vertex_count - 1}")


def run_query(network, scope, overlay, source: int) -> tuple[list, dict]:
    """Per-vertex ``(cost, walk edges, optimality)`` plus search stats."""
    if overlay is None:
        res = s_dijkstra(network, network.weights(), scope, source)
        rows = []
        for v in range(network.vertex_count):
            walk = extract_walk(res, v)
            if walk is not None:
                ok = check_walk_admissible(walk, network, scope, network.weights())
                if not ok or walk.weight(network.weights()) != res.dist[v]:
                    raise InvariantViolation(f"static walk to {v} does not replay")
            rows.append((res.dist[v], None if walk is None else list(walk.edges),
                         None if walk is None else "w*"))
        stats = {"settled": {"live": res.settled_count, "dead": 0, "detour": 0},
                 "branches_spawned": 0, "labels_used": 1}
        return rows, stats
    res = dynamic_s_dijkstra(network, overlay, scope, source)
    wstar = dynamic_weights(network, overlay)
    rows = []
    for v in range(network.vertex_count):
        wit = res.witness[v]
        if wit is not None:
            if not check_dynamic_witness(wit, network, overlay, scope, v, live_only=res.live_only):
                raise InvariantViolation(f"dynamic witness to {v} fails the checker")
            if wit.walk.weight(wstar) != res.dist[v]:
                raise InvariantViolation(f"dynamic witness cost to {v} differs from its label")
        rows.append((res.dist[v], None if wit is None else list(wit.edges), res.optimality[v]))
    stats = {"settled": dict(res.stats["settled"]),
             "branches_spawned": res.stats["branches_spawned"],
             "labels_used": res.stats["labels_used"]}
    return rows, stats


def cmd_query(args) -> int:
    network, scope, overlay = _load(args)
    _check_source(network, args.source)
    if args.target is not None:
        _check_source(network, args.target, "target")
    rows, stats = run_query(network, scope, overlay, args.source)
    picked = [args.target] if args.target is not None else range(network.vertex_count)
    if args.json:
        out = {"source": args.source}
        if args.target is not None:
            out["target"] = args.target
        out["results"] = [
            {"vertex": v, "cost": _cost(rows[v][0]), "walk": rows[v][1], "optimality": rows[v][2]}
            for v in picked
        ]
        out["stats"] = stats
        print(json.dumps(out))
        return 0
    print(f"{'vertex':>6}  {'cost':>10}  {'opt':>3}  walk")
    for v in picked:
        cost, walk, opt = rows[v]
        shown = "-" if walk is None else " ".join(map(str, walk)) or "(empty)"
        print(f"{v:>6}  {str(_cost(cost)):>10}  {opt or '-':>3}  {shown}")
    s = stats["settled"]
    print(f"# settled live={s['live']} dead={s['dead']} detour={s['detour']} "
          f"branches={stats['branches_spawned']} labels={stats['labels_used']}")
    return 0


def cmd_oracle(args) -> int:
    network, scope, overlay = _load(args)
    _check_source(network, args.source)
    weights = dynamic_weights(network, overlay)
    out = {"mode": args.mode, "source": args.source}
    mismatch = False
    if args.mode == "def2":
        def2 = oracle_def2_admissible_edges(network, weights, scope, args.source)
        out["edges"] = sorted(def2)
        if args.compare:
            # edges the search relaxes must be admissible under one semantics or the other
            relaxed = s_dijkstra(network, weights, scope, args.source).relaxed_edges
            allowed = def2 | prefix_admissible_edges(network, weights, scope, args.source)
            extra = sorted(relaxed - allowed)
            out["relaxed"] = sorted(relaxed)
            out["prefix_only"] = sorted(allowed - def2)
            out["unexplained"] = extra
            mismatch = bool(extra)
    else:
        if args.mode == "prefix":
            expected = oracle_prefix_optimal(network, weights, scope, args.source)
        else:
            expected = oracle_dynamic(network, overlay or DynamicOverlay({}), scope, args.source)
        out["costs"] = [_cost(c) for c in expected]
        if args.compare:
            if args.mode == "prefix":
                got = s_dijkstra(network, weights, scope, args.source).dist
            else:
                got = dynamic_s_dijkstra(network, overlay, scope, args.source).dist
            bad = [v for v in range(network.vertex_count) if got[v] != expected[v]]
            out["main"] = [_cost(c) for c in got]
            out["mismatches"] = bad
            mismatch = bool(bad)
    if args.compare:
        out["match"] = not mismatch
    print(json.dumps(out))
    return 4 if mismatch else 0


def _profile(args) -> LevelProfile:
    return LevelProfile(nu=(0, args.nu, INF), arterial_every=args.arterial_every)


def cmd_gen(args) -> int:
    if args.kind == "grid":
        network, scope = gen_grid(args.rows, args.cols, args.seed, _profile(args))
    else:
        network, scope = gen_random(args.n, args.m, args.seed, _profile(args))
    prefix = Path(args.out)
    written = [prefix.with_name(prefix.name + ".gsn")]
    written[0].write_text(dump_network(network, scope))
    if args.changes_count:
        overlay = inject_changes(network, args.changes_count, args.severity, args.seed)
        written.append(prefix.with_name(prefix.name + ".changes"))
        written[1].write_text(dump_overlay(overlay))
    for p in written:
        print(p)
    return 0


def bench_rows(network, scope, queries: int, changes: int, severity: str, seed: int) -> list:
    rows = []
    for q in range(queries):
        rng = random.Random(f"{seed}:{q}")
        source = rng.randrange(network.vertex_count)
        overlay = inject_changes(network, changes, severity, rng.randrange(2**31))
        static = s_dijkstra(network, dynamic_weights(network, overlay), scope, source)
        start = time.perf_counter()
        dyn = dynamic_s_dijkstra(network, overlay, scope, source)
        micros = int((time.perf_counter() - start) * 1e6)
        rows.append({
            "query": q,
            "source": source,
            "static_settled": static.settled_count,
            "dynamic_settled": dyn.settled_total,
            "ratio": dyn.settled_total / static.settled_count,
            "micros": micros,
        })
    return rows


def cmd_bench(args) -> int:
    network, scope, _ = _load(args)
    if args.queries < 1:
        raise ValidationError("--queries must be positive")
    if not 0 <= args.changes_count <= network.edge_count:
        raise ValidationError("--changes-count out of range")
    rows = bench_rows(network, scope, args.queries, args.changes_count, args.severity, args.seed)
    fields = ["query", "source", "static_settled", "dynamic_settled", "ratio", "micros"]
    writer = csv.DictWriter(sys.stdout, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({**row, "ratio": f"{row['ratio']:.6f}"})
    ratios = [r["ratio"] for r in rows]
    print(f"# median_ratio={statistics.median(ratios):.6f} max_ratio={max(ratios):.6f}")
    if args.figure:
        from .report import bench_figure

        path = bench_figure(rows, args.figure,
                            f"{Path(args.network).name}: c={args.changes_count}, {args.severity}")
        print(f"# figure={path}")
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="route", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("query", help="shortest scope-admissible routes from one source")
    q.add_argument("--network", required=True)
    q.add_argument("--changes")
    q.add_argument("--source", type=int, required=True)
    q.add_argument("--target", type=int)
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_query)

    o = sub.add_parser("oracle", help="brute-force reference results")
    o.add_argument("--network", required=True)
    o.add_argument("--changes")
    o.add_argument("--source", type=int, required=True)
    o.add_argument("--mode", choices=("prefix", "def2", "dynamic"), required=True)
    o.add_argument("--compare", action="store_true", help="also run the search and diff")
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gen", help="write a synthetic instance")
    g.add_argument("kind", choices=("grid", "random"))
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True, help="output prefix (PREFIX.gsn, PREFIX.changes)")
    g.add_argument("--rows", type=int, default=10)
    g.add_argument("--cols", type=int, default=10)
    g.add_argument("--n", type=int, default=12)
    g.add_argument("--m", type=int, default=30)
    g.add_argument("--nu", type=int, default=10, help="allowance of level 1")
    g.add_argument("--arterial-every", type=int, default=5)
    g.add_argument("--changes-count", type=int, default=0)
    g.add_argument("--severity", choices=("mild", "closure", "mixed"), default="mixed")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="dynamic vs static effort on random queries (CSV)")
    b.add_argument("--network", required=True)
    b.add_argument("--queries", type=int, default=30)
    b.add_argument("--changes-count", type=int, default=1)
    b.add_argument("--severity", choices=("mild", "closure", "mixed"), default="closure")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--figure", help="also render the run to this image file")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, ValidationError, OSError) as exc:
        print(f"route: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"route: {exc}", file=sys.stderr)
        return 2
    except OracleBudgetExceeded as exc:
        print(f"route: {exc}", file=sys.stderr)
        return 3
    except InvariantViolation as exc:
        print(f"route: invariant violated: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
