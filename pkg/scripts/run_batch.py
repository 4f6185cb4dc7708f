"""Seeded batch over random 2-vertex-connected graphs in both modes; CSV on stdout."""

import argparse
import sys

from graphtsp.generators import batch
from graphtsp.pipeline import PATH, TOUR, RunOptions
from graphtsp.report import batch_csv, run_pipeline


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--oracle-cap", type=int, default=14, help="run the exact solver up to this n")
    args = p.parse_args()
    reports = []
    for seed, g, s, t in batch(args.count, args.seed):
        oracle = g.n <= args.oracle_cap
        for mode in (TOUR, PATH):
            opts = RunOptions(mode=mode, s=s, t=t, oracle=oracle)
            reports.append(run_pipeline(g, opts, name=f"random_2vc-{seed}-{mode}", seed=seed))
    sys.stdout.write(batch_csv(reports))
    bad = [r for r in reports if not r.ok]
    print(f"{len(reports)} runs, {len(bad)} with a failed check", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
