"""Command-line front end: ``generate``, ``solve`` and ``bench``."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .closure import DistanceMatrix, content_digest
from .instances import (
    GridSpec,
    QuerySpec,
    SpiderSpec,
    gen_grid,
    gen_queries,
    gen_spider,
    load_instance,
    load_query,
    save_instance,
    save_queries,
    stream,
)
from .model import InfeasibleQueryError, Instance, Itinerary, Poi, Query, SchemaError
from .oracle import OracleTooLarge, oracle_solve
from .search import SearchConfig, greedy_baseline, solve


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("OPMPC_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"OPMPC_SEED must be an integer, got {raw!r}") from None


def parse_caps(text: str, categories: int | None = None) -> tuple[int, ...]:
    """``"2,1,3"`` or a single ``"2"`` broadcast to every category."""
    try:
        caps = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--max-k expects comma-separated integers, got {text!r}") from None
    if categories is not None and len(caps) == 1:
        caps = caps * categories
    if categories is not None and len(caps) != categories:
        raise UsageError(f"--max-k has {len(caps)} values, the instance has {categories} categories")
    return caps


def parse_queue_limit(text: str | None, n: int, categories: int) -> int | None:
    """An integer, ``n`` (the POI count) or ``n/K`` (POI count over ``K``)."""
    if text is None or text == "none":
        return None
    if text == "n":
        return max(1, n)
    if text.startswith("n/"):
        try:
            div = int(text[2:])
        except ValueError:
            raise UsageError(f"bad queue limit {text!r}") from None
        if div < 1:
            raise UsageError("queue limit divisor must be positive")
        return max(1, n // div)
    try:
        value = int(text)
    except ValueError:
        raise UsageError(f"bad queue limit {text!r}; use an integer, 'n' or 'n/K'") from None
    if value < 1:
        raise UsageError("queue limit must be positive")
    return value


def parse_list(text: str, kind, flag: str) -> list:
    items = [x for x in text.split(",") if x.strip()]
    if not items:
        raise UsageError(f"{flag} needs at least one value")
    try:
        return [kind(x) for x in items]
    except ValueError:
        raise UsageError(f"{flag}: cannot parse {text!r}") from None


def attach_distance_cache(instance: Instance, directory: str | Path) -> Path:
    """Load the POI distance matrix from ``directory`` or compute and store it there."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    digest = content_digest(instance.to_dict())
    path = directory / f"{digest[:16]}.npz"
    if path.exists():
        instance.__dict__["distances"] = DistanceMatrix.load(path, digest)
    else:
        instance.distances.save(path, digest)
    return path


# ---------------------------------------------------------------- generate


def cmd_generate(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    common = dict(poi_count=args.pois, category_count=args.categories, visit_min=args.visit_min,
                  visit_max=args.visit_max, score_min=args.score_min, score_max=args.score_max,
                  seed=seed)
    if args.grid:
        instance = gen_grid(GridSpec(side=args.side, edge_seconds=args.edge_seconds, **common))
    else:
        instance = gen_spider(SpiderSpec(sides=args.sides, levels=args.levels,
                                         radial_seconds=args.radial_seconds,
                                         innermost_side_seconds=args.innermost_side_seconds, **common))
    save_instance(instance, args.out)
    print(f"wrote {args.out}: {len(instance.graph.nodes)} nodes, {len(instance.graph.edges)} edges, "
          f"{instance.n} POIs, {instance.categories} categories")
    if args.queries:
        caps = parse_caps(args.max_k, instance.categories)
        qs = gen_queries(instance, QuerySpec(args.tmax_seconds, caps, args.count, seed))
        save_queries(qs, args.queries)
        print(f"wrote {args.queries}: {len(qs)} queries")
    return 0


# ---------------------------------------------------------------- solve


def _config_from(args, instance: Instance) -> SearchConfig:
    limit = parse_queue_limit(args.queue_limit, instance.n, instance.categories)
    seconds = None if args.time_limit_ms is None else args.time_limit_ms / 1000
    cut = args.cut_factor
    if args.mode == "exact":
        if (cut not in (None, 1.0)) or limit is not None or seconds is not None:
            raise UsageError("exact mode takes no --cut-factor, --queue-limit or --time-limit-ms; use --mode approx")
        cut = 1.0
    elif cut is None:
        cut = SearchConfig.cut_factor
    return SearchConfig(greedy_threshold=args.greedy_threshold, cut_factor=cut,
                        max_queue_len=limit, time_limit=seconds)


def _query_from(args, instance: Instance) -> Query:
    if args.query:
        q = load_query(args.query)
        if isinstance(q, list):
            if not 0 <= args.query_index < len(q):
                raise UsageError(f"--query-index {args.query_index} out of range for {len(q)} queries")
            q = q[args.query_index]
        return q
    missing = [f for f in ("s", "d", "tmax_seconds", "max_k") if getattr(args, f) is None]
    if missing:
        raise UsageError("give --query FILE or all of --s, --d, --tmax-seconds, --max-k")
    return Query(args.s, args.d, args.tmax_seconds, parse_caps(args.max_k, instance.categories))


def describe_itinerary(instance: Instance, query: Query, it: Itinerary) -> list[str]:
    prob = instance.bind(query)
    lines = []
    here, label = prob.s, f"start node {query.s}"
    for p in it.sequence:
        poi: Poi = instance.pois[p]
        lines.append(f"  {label} -> POI {p} (node {poi.node}, category {poi.category}, score {poi.score:g}): "
                     f"travel {prob.dist[here][p]}s, visit {poi.visit_time}s")
        here, label = p, f"POI {p}"
    lines.append(f"  {label} -> destination node {query.d}: travel {prob.dist[here][prob.d]}s")
    return lines


def cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    if args.distance_cache:
        attach_distance_cache(instance, args.distance_cache)
    query = _query_from(args, instance)
    result = {"mode": args.mode}
    started = time.perf_counter()
    try:
        if args.mode == "greedy":
            best, alpha, stats = greedy_baseline(instance, query), None, None
        elif args.mode == "oracle":
            best, alpha, stats = oracle_solve(instance, query), 1.0, None
        else:
            out = solve(instance, query, _config_from(args, instance))
            best, alpha, stats = out.best, out.alpha, out.stats
            result["optimal"] = out.optimal_flag
    except InfeasibleQueryError as exc:
        print(f"infeasible query: {exc}", file=sys.stderr)
        return 1
    runtime_ms = (time.perf_counter() - started) * 1000

    print(f"itinerary ({len(best.sequence)} POIs): {list(best.sequence)}")
    print("\n".join(describe_itinerary(instance, query, best)))
    print(f"score {best.score:.6g}  cost {best.cost}s / {query.t_max}s")
    if alpha is not None:
        print(f"alpha {alpha:.4f}")
    if stats is not None:
        print(f"expanded {stats.expanded}  pruned {stats.pruned}  overflow {stats.overflow}")
    print(f"runtime {runtime_ms:.1f} ms")

    if args.json:
        result.update(sequence=list(best.sequence), cost=best.cost, score=best.score, alpha=alpha,
                      runtime_ms=runtime_ms, query={"s": query.s, "d": query.d,
                                                    "t_max_seconds": query.t_max,
                                                    "max_k": list(query.max_k)})
        if stats is not None:
            result["stats"] = asdict(stats)
        Path(args.json).write_text(json.dumps(result, indent=1) + "\n")
    return 0


# ---------------------------------------------------------------- bench


@dataclass
class BenchRow:
    instance_id: str
    query_id: str
    mode: str
    g: float
    cut_factor: float
    l_max: int | None
    time_limit_ms: float | None
    score: float
    greedy_score: float
    oracle_score: float | None
    alpha: float
    runtime_ms: float
    expanded: int
    pruned: int


BENCH_COLUMNS = [f.name for f in fields(BenchRow)]

SWEEPS = {
    "cut_factors": ("cut_factor", float),
    "queue_limits": ("queue_limit", str),
    "time_limits_ms": ("time_limit_ms", float),
    "greedy_thresholds": ("greedy_threshold", float),
    "max_k_values": ("max_k", str),
    "category_counts": ("categories", int),
}


def relabel_categories(instance: Instance, count: int, seed: int) -> Instance:
    """Same network and POIs with categories redrawn uniformly over ``count``."""
    rng = stream(seed, f"categories-{count}")
    cats = rng.integers(0, count, size=instance.n)
    pois = tuple(Poi(p.id, p.node, int(c), p.score, p.visit_time) for p, c in zip(instance.pois, cats))
    out = Instance(instance.graph, pois, count)
    if "distances" in instance.__dict__:
        out.__dict__["distances"] = instance.__dict__["distances"]
    return out


@dataclass(frozen=True)
class Cell:
    """One (sweep point, query) pair to run."""

    variant: int
    query_index: int
    query: Query
    cut_factor: float
    greedy_threshold: float
    l_max: int | None
    time_limit_ms: float | None


_WORKER: dict = {}


def _init_worker(variants, instance_ids, with_oracle):
    _WORKER.update(variants=variants, ids=instance_ids, oracle=with_oracle)


def _run_cell(cell: Cell) -> BenchRow:
    instance = _WORKER["variants"][cell.variant]
    q = cell.query
    cfg = SearchConfig(greedy_threshold=cell.greedy_threshold, cut_factor=cell.cut_factor,
                       max_queue_len=cell.l_max,
                       time_limit=None if cell.time_limit_ms is None else cell.time_limit_ms / 1000)
    instance.bind(q)  # build the query's distance rows outside the timed region
    started = time.perf_counter()
    out = solve(instance, q, cfg)
    runtime_ms = (time.perf_counter() - started) * 1000
    greedy = greedy_baseline(instance, q).score
    oracle = oracle_solve(instance, q).score if _WORKER["oracle"] else None
    exact = cell.cut_factor == 1.0 and cell.l_max is None and cell.time_limit_ms is None
    return BenchRow(
        instance_id=_WORKER["ids"][cell.variant],
        query_id=f"{cell.query_index}/{'-'.join(map(str, q.max_k))}",
        mode="exact" if exact else "approx",
        g=cell.greedy_threshold, cut_factor=cell.cut_factor, l_max=cell.l_max,
        time_limit_ms=cell.time_limit_ms, score=out.best.score, greedy_score=greedy,
        oracle_score=oracle, alpha=out.alpha, runtime_ms=runtime_ms,
        expanded=out.stats.expanded, pruned=out.stats.pruned,
    )


def plan_bench(args, instance: Instance, instance_id: str):
    """Instance variants and cells, in output order (sweep point major, query minor)."""
    chosen = [name for name in SWEEPS if getattr(args, name) is not None]
    if len(chosen) != 1:
        raise UsageError("give exactly one sweep: " + ", ".join("--" + n.replace("_", "-") for n in SWEEPS))
    name = chosen[0]
    attr, kind = SWEEPS[name]
    values = parse_list(getattr(args, name), kind, "--" + name.replace("_", "-"))
    seed = args.seed if args.seed is not None else default_seed()

    variants, ids = [instance], [instance_id]
    if attr == "categories":
        if "," in args.max_k:
            raise UsageError("a category-count sweep needs a single --max-k value applied to every category")
        if any(k < 1 for k in values):
            raise UsageError("category counts must be positive")
        variants = [relabel_categories(instance, k, seed) for k in values]
        ids = [f"{instance_id}#k{k}" for k in values]
    base_caps = None if attr in ("max_k", "categories") else parse_caps(args.max_k, instance.categories)

    # one query set, reused for every sweep point; caps are attached per point
    probe = QuerySpec(args.tmax_seconds, (0,) * instance.categories, args.count, seed)
    endpoints = [(q.s, q.d) for q in gen_queries(instance, probe)]

    cells = []
    for i, value in enumerate(values):
        point = dict(cut_factor=args.cut_factor, greedy_threshold=args.greedy_threshold,
                     queue_limit=args.queue_limit, time_limit_ms=args.time_limit_ms)
        variant, caps = 0, base_caps
        if attr == "max_k":
            caps = parse_caps(value, instance.categories)
        elif attr == "categories":
            variant, caps = i, parse_caps(args.max_k, value)
        else:
            point[attr] = value
        inst = variants[variant]
        l_max = parse_queue_limit(point["queue_limit"], inst.n, inst.categories)
        try:
            SearchConfig(greedy_threshold=point["greedy_threshold"], cut_factor=point["cut_factor"],
                         max_queue_len=l_max)
        except ValueError as exc:
            raise UsageError(f"sweep point {value!r}: {exc}") from None
        if point["time_limit_ms"] is not None and point["time_limit_ms"] < 0:
            raise UsageError("time limits must be non-negative")
        for qi, (s, d) in enumerate(endpoints):
            cells.append(Cell(variant, qi, Query(s, d, args.tmax_seconds, caps), point["cut_factor"],
                              point["greedy_threshold"], l_max, point["time_limit_ms"]))
    return variants, ids, cells


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def cmd_bench(args) -> int:
    instance = load_instance(args.instance)
    if args.distance_cache:
        attach_distance_cache(instance, args.distance_cache)
    instance.distances  # noqa: B018  (computed once, shared by all cells)
    instance_id = args.instance_id or Path(args.instance).stem
    variants, ids, cells = plan_bench(args, instance, instance_id)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs, initializer=_init_worker,
                                 initargs=(variants, ids, args.oracle)) as pool:
            rows = list(pool.map(_run_cell, cells, chunksize=max(1, len(cells) // (4 * args.jobs))))
    else:
        _init_worker(variants, ids, args.oracle)
        rows = [_run_cell(c) for c in cells]

    out = open(args.out, "w", newline="") if args.out != "-" else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(BENCH_COLUMNS)
        for row in rows:
            writer.writerow([_csv_value(getattr(row, c)) for c in BENCH_COLUMNS])
    finally:
        if out is not sys.stdout:
            out.close()
    if args.out != "-":
        print(f"wrote {len(rows)} rows to {args.out}")
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opmpc", description="Itinerary search with per-category caps.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic instance")
    kind = gen.add_mutually_exclusive_group(required=True)
    kind.add_argument("--grid", action="store_true")
    kind.add_argument("--spider", action="store_true")
    gen.add_argument("--side", type=int, default=100)
    gen.add_argument("--edge-seconds", type=int, default=60)
    gen.add_argument("--sides", type=int, default=100)
    gen.add_argument("--levels", type=int, default=100)
    gen.add_argument("--radial-seconds", type=int, default=100)
    gen.add_argument("--innermost-side-seconds", type=int, default=8)
    gen.add_argument("--pois", type=int, default=3000)
    gen.add_argument("--categories", type=int, default=4)
    gen.add_argument("--visit-min", type=int, default=180)
    gen.add_argument("--visit-max", type=int, default=3600)
    gen.add_argument("--score-min", type=float, default=1.0)
    gen.add_argument("--score-max", type=float, default=100.0)
    gen.add_argument("--seed", type=int, default=None, help="defaults to $OPMPC_SEED, then 0")
    gen.add_argument("--out", required=True)
    gen.add_argument("--queries", help="also write sampled queries to this file")
    gen.add_argument("--tmax-seconds", type=int, default=7200)
    gen.add_argument("--max-k", default="2")
    gen.add_argument("--count", type=int, default=25)
    gen.set_defaults(func=cmd_generate)

    sol = sub.add_parser("solve", help="solve one query")
    sol.add_argument("--instance", required=True)
    sol.add_argument("--query", help="query JSON (a single query or a list)")
    sol.add_argument("--query-index", type=int, default=0)
    sol.add_argument("--s", type=int)
    sol.add_argument("--d", type=int)
    sol.add_argument("--tmax-seconds", type=int)
    sol.add_argument("--max-k", help="comma-separated caps, or one value for every category")
    sol.add_argument("--mode", choices=["exact", "approx", "greedy", "oracle"], default="exact")
    sol.add_argument("--cut-factor", type=float)
    sol.add_argument("--queue-limit", help="integer, 'n' or 'n/K'")
    sol.add_argument("--time-limit-ms", type=float)
    sol.add_argument("--greedy-threshold", type=float, default=1.0)
    sol.add_argument("--json", help="also write the result as JSON")
    sol.add_argument("--distance-cache", help="directory for cached distance matrices")
    sol.set_defaults(func=cmd_solve)

    bench = sub.add_parser("bench", help="parameter sweep to CSV")
    bench.add_argument("--instance", required=True)
    bench.add_argument("--instance-id")
    bench.add_argument("--out", required=True, help="CSV path, or - for stdout")
    bench.add_argument("--seed", type=int, default=None, help="defaults to $OPMPC_SEED, then 0")
    bench.add_argument("--count", type=int, default=25)
    bench.add_argument("--tmax-seconds", type=int, default=7200)
    bench.add_argument("--max-k", default="2")
    bench.add_argument("--cut-factor", type=float, default=1.0)
    bench.add_argument("--queue-limit")
    bench.add_argument("--time-limit-ms", type=float)
    bench.add_argument("--greedy-threshold", type=float, default=1.0)
    for name in SWEEPS:
        bench.add_argument("--" + name.replace("_", "-"), help="comma-separated sweep values")
    bench.add_argument("--oracle", action="store_true", help="also record the brute-force optimum")
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--distance-cache")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ValueError, SchemaError, OracleTooLarge, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
