"""Score and runtime against the cut factor on a desk-sized grid.

    python3 scripts/desk_trend.py --cut-factors 1,1.2,1.5,2 --repeats 3
"""

from __future__ import annotations

import argparse
import statistics
import time
from dataclasses import dataclass

from opmpc import SearchConfig, greedy_baseline, solve
from opmpc.instances import GridSpec, QuerySpec, gen_grid, gen_queries


@dataclass(frozen=True)
class TrendConfig:
    side: int = 15
    pois: int = 60
    categories: int = 4
    cap: int = 2
    t_max: int = 2400
    queries: int = 25
    seed: int = 10
    repeats: int = 3


def measure(cfg: TrendConfig, cut_factors: list[float]) -> list[dict]:
    inst = gen_grid(GridSpec(side=cfg.side, poi_count=cfg.pois, category_count=cfg.categories, seed=cfg.seed))
    queries = gen_queries(inst, QuerySpec(cfg.t_max, (cfg.cap,) * cfg.categories, cfg.queries, cfg.seed))
    rows = []
    for c in cut_factors:
        search = SearchConfig(cut_factor=c)
        times, scores, expanded, pruned = [], [], [], []
        for q in queries:
            inst.bind(q)
            fastest = float("inf")
            for _ in range(cfg.repeats):
                started = time.perf_counter()
                out = solve(inst, q, search)
                fastest = min(fastest, time.perf_counter() - started)
            times.append(fastest)
            scores.append(out.best.score)
            expanded.append(out.stats.expanded)
            pruned.append(out.stats.pruned)
        rows.append(dict(cut=c, runtime_ms=1000 * statistics.fmean(times), score=statistics.fmean(scores),
                         expanded=statistics.fmean(expanded), pruned=statistics.fmean(pruned)))
    greedy = statistics.fmean(greedy_baseline(inst, q).score for q in queries)
    for r in rows:
        r["greedy"] = greedy
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cut-factors", default="1,1.2,1.5,2,2.5")
    ap.add_argument("--t-max", type=int, default=TrendConfig.t_max)
    ap.add_argument("--queries", type=int, default=TrendConfig.queries)
    ap.add_argument("--repeats", type=int, default=TrendConfig.repeats)
    ap.add_argument("--seed", type=int, default=TrendConfig.seed)
    args = ap.parse_args()
    cfg = TrendConfig(t_max=args.t_max, queries=args.queries, repeats=args.repeats, seed=args.seed)
    rows = measure(cfg, [float(x) for x in args.cut_factors.split(",")])
    base = rows[0]["score"] or 1.0
    print(f"{'cut':>5} {'runtime ms':>11} {'score':>9} {'vs first':>9} {'greedy':>8} {'expanded':>9} {'pruned':>8}")
    for r in rows:
        print(f"{r['cut']:5.2f} {r['runtime_ms']:11.2f} {r['score']:9.2f} {r['score'] / base:9.4f} "
              f"{r['greedy']:8.2f} {r['expanded']:9.1f} {r['pruned']:8.1f}")


if __name__ == "__main__":
    main()
