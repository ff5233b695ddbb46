"""Run one ``opmpc bench`` sweep and print per-point means.

    python3 scripts/sweep_summary.py --sweep cut-factors --values 1,1.25,1.5,2 --side 15 --pois 60
"""

from __future__ import annotations

import argparse
import csv
import statistics
import tempfile
from collections import defaultdict
from pathlib import Path

from opmpc.cli import main as opmpc

SWEEP_COLUMN = {
    "cut-factors": "cut_factor",
    "queue-limits": "l_max",
    "time-limits-ms": "time_limit_ms",
    "greedy-thresholds": "g",
    "max-k-values": "query_id",
    "category-counts": "instance_id",
}


def summarise(path: Path, column: str) -> None:
    groups = defaultdict(list)
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            key = row[column].split("/")[-1] if column == "query_id" else row[column]
            groups[key].append(row)
    print(f"{column:>14} {'score':>9} {'greedy':>9} {'alpha':>7} {'runtime ms':>11} {'expanded':>9}")
    for key, rows in groups.items():
        mean = lambda c: statistics.fmean(float(r[c]) for r in rows)  # noqa: E731
        print(f"{key:>14} {mean('score'):9.2f} {mean('greedy_score'):9.2f} {mean('alpha'):7.3f} "
              f"{mean('runtime_ms'):11.2f} {mean('expanded'):9.1f}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sweep", choices=sorted(SWEEP_COLUMN), default="cut-factors")
    ap.add_argument("--values", default="1,1.25,1.5,2")
    ap.add_argument("--side", type=int, default=15)
    ap.add_argument("--pois", type=int, default=60)
    ap.add_argument("--tmax-seconds", type=int, default=2400)
    ap.add_argument("--max-k", default="2")
    ap.add_argument("--count", type=int, default=25)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--keep", help="also keep the CSV at this path")
    args = ap.parse_args()
    with tempfile.TemporaryDirectory() as tmp:
        inst = Path(tmp) / "grid.json"
        out = Path(args.keep) if args.keep else Path(tmp) / "bench.csv"
        opmpc(["generate", "--grid", "--side", str(args.side), "--pois", str(args.pois),
               "--seed", str(args.seed), "--out", str(inst)])
        opmpc(["bench", "--instance", str(inst), "--out", str(out), "--seed", str(args.seed),
               "--count", str(args.count), "--tmax-seconds", str(args.tmax_seconds),
               "--max-k", args.max_k, "--jobs", str(args.jobs), f"--{args.sweep}", args.values])
        summarise(out, SWEEP_COLUMN[args.sweep])


if __name__ == "__main__":
    main()
