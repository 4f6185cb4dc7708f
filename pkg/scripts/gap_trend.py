"""Exact optimum over the LP value on the three-path family, k = 1..K."""

import argparse
from fractions import Fraction

from graphtsp.generators import gap
from graphtsp.held_karp import solve_hk_tour
from graphtsp.oracles import DP_CAP, exact_tsp, exact_tsp_milp


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--k", type=int, default=6)
    args = p.parse_args()
    print("k,n,opt_lp,exact,ratio")
    for k in range(1, args.k + 1):
        g = gap(k)
        lp = solve_hk_tour(g).objective
        opt = exact_tsp(g) if g.n <= DP_CAP else exact_tsp_milp(g)
        r = Fraction(opt) / lp
        print(f"{k},{g.n},{lp},{opt},{float(r):.4f}")


if __name__ == "__main__":
    main()
