"""Where pruned nodes come from, and how exhaustive runs compare with the worst-case count.

Runs the small seeded corpus (the one the test-suite uses) and prints, per cut
factor, the mean number of generated sets, discarded sets split by cause,
and the pruned share of everything generated. The second table compares the
node count of exhaustive runs with ``worst_case_nodes``.

    python3 scripts/pruning_profile.py --size 200
"""

from __future__ import annotations

import argparse
import statistics
import sys
from collections import Counter
from pathlib import Path

from opmpc import SearchConfig, SearchState, worst_case_nodes

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))
from tests.corpus import case  # noqa: E402


def instrumented_run(inst, q, c):
    """Search outcome plus the number of sets removed from the low end of the deque."""
    state = SearchState(inst, q, SearchConfig(cut_factor=c))
    dq = state.deque
    pops = 0
    original = dq.pop_minimum

    def pop_minimum():
        nonlocal pops
        pops += 1
        return original()

    dq.pop_minimum = pop_minimum
    return state.run(), pops


def cut_table(size: int, cut_factors: list[float]) -> None:
    print(f"{'cut':>5} {'generated':>10} {'expanded':>9} {'pruned':>7} {'low end':>8} {'at stop':>8} {'share':>6}")
    for c in cut_factors:
        rows = []
        for seed in range(size):
            out, low = instrumented_run(*case(seed), c)
            st = out.stats
            # whatever is not a low-end pop was swept up when the search stopped
            rows.append((st.pushed, st.expanded, st.pruned, low, st.pruned - low, st.pruned / (st.pushed + 1)))
        means = [statistics.fmean(col) for col in zip(*rows)]
        print(f"{c:5.2f} {means[0]:10.2f} {means[1]:9.2f} {means[2]:7.2f} {means[3]:8.2f} {means[4]:8.2f} {means[5]:6.2f}")


def bound_table(size: int) -> None:
    verdicts = Counter()
    examples = []
    for seed in range(size):
        inst, q = case(seed)
        state = SearchState(inst, q, SearchConfig(cut_factor=1.0, exhaustive=True))
        state.run()
        bound = worst_case_nodes(inst, q)
        if state.stats.pushed <= bound:
            verdicts["within"] += 1
        elif bound == 0:
            verdicts["over, bound 0"] += 1
        else:
            verdicts["over, bound > 0"] += 1
            examples.append((seed, state.stats.pushed, bound))
    print("exhaustive node count vs worst_case_nodes:", dict(verdicts))
    for seed, got, bound in examples[:5]:
        print(f"  seed {seed}: {got} generated, bound {bound}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=200)
    ap.add_argument("--cut-factors", default="1,1.2,1.5,2,2.5")
    args = ap.parse_args()
    cut_table(args.size, [float(x) for x in args.cut_factors.split(",")])
    print()
    bound_table(args.size)


if __name__ == "__main__":
    main()
