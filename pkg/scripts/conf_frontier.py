"""Grid lower bound on the best configuration value against u* + (n - u*)/6."""

import argparse
import sys
from fractions import Fraction

from graphtsp.config_bounds import frontier_csv


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, nargs="+", default=[4, 6, 8])
    p.add_argument("--grid", type=Fraction, default=Fraction(1, 12))
    args = p.parse_args()
    for n in args.n:
        us = [Fraction(k, 2) for k in range(2 * n)]
        sys.stdout.write(f"# n={n}\n" + frontier_csv(n, us, args.grid))


if __name__ == "__main__":
    main()
