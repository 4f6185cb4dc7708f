"""Command-line front end.

Exit codes: 0 ok, 2 an inequality failed, 3 invalid input, 4 size cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import generators
from .circulation_net import audit, build_fprime, build_fsecond, build_network
from .config_bounds import Configuration, check_theorem_bound, frontier_csv, normalize, value
from .errors import (BoundViolation, Disconnected, GraphTSPError, InvalidInput,
                     NotTwoVertexConnected, TooLarge)
from .graph_core import Graph, blocks, dfs_tree_greedy, edge_key
from .held_karp import restrict_to_support, solve_hk_path, solve_hk_tour
from .mincost_flow import min_cost_circulation, to_standard
from .oracles import DP_CAP
from .pipeline import PATH, TOUR, RunOptions, _lp_by_blocks
from .rational import fmt, parse
from .report import batch_csv, run_pipeline

EXIT_OK, EXIT_BOUND, EXIT_INPUT, EXIT_CAP = 0, 2, 3, 4


def _read_graph(path: str) -> Graph:
    try:
        with open(path) as fh:
            return Graph.from_text(fh.read())
    except OSError as exc:
        raise InvalidInput(str(exc)) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    params = {}
    for key in ("n", "m", "k", "a", "b"):
        if getattr(args, key) is not None:
            params[key] = getattr(args, key)
    if args.kind == "random_2vc":
        params["seed"] = args.seed
    _emit(generators.by_name(args.kind, **params).to_text(), args.out)
    return EXIT_OK


def cmd_lp(args) -> int:
    g = _read_graph(args.graph)
    if args.path:
        sol = solve_hk_path(g, *args.path)
    elif g.is_two_vertex_connected():
        sol = solve_hk_tour(g)
    else:
        sol = _lp_by_blocks(g)
    _emit(sol.to_json() + "\n", args.out)
    return EXIT_OK


def cmd_circulate(args) -> int:
    g = _read_graph(args.graph)
    if not g.is_two_vertex_connected():
        raise NotTwoVertexConnected("circulate expects a 2-vertex-connected graph")
    lp = solve_hk_tour(g)
    sup = restrict_to_support(g, lp)
    out = []
    for sb, vmap in blocks(sup):
        if sb.n == 2:
            out.append({"vertices": list(vmap), "doubled_edge": True})
            continue
        x = {(u, v): lp.values[edge_key(vmap[u], vmap[v])] for u, v in sb.edges}
        root = vmap.index(args.root) if args.root in vmap else 0
        net = build_network(sb, dfs_tree_greedy(sb, x, root))
        fp = build_fprime(net, x)
        fs = build_fsecond(net, fp)
        cstar = min_cost_circulation(to_standard(net))
        _, rep = audit(net, x, fp, fs, cstar, strict=False)
        out.append({"vertices": list(vmap),
                    "fprime": json.loads(fp.to_json()), "fsecond": json.loads(fs.to_json()),
                    "cstar": json.loads(cstar.to_json()),
                    "bounds": [c.as_dict() for c in rep.checks]})
    _emit(json.dumps({"opt_lp": fmt(lp.objective), "blocks": out}, indent=1) + "\n", args.out)
    failed = any(not b["pass"] for blk in out for b in blk.get("bounds", []))
    return EXIT_BOUND if failed else EXIT_OK


def _solve(args, mode: str) -> int:
    g = _read_graph(args.graph)
    opts = RunOptions(mode=mode, s=getattr(args, "s", 0), t=getattr(args, "t", 1),
                      root=args.root, oracle=args.oracle, timing=args.timing)
    rep = run_pipeline(g, opts, name=args.graph, seed=args.seed)
    _emit(batch_csv([rep]) if args.format == "csv" else rep.to_json(), args.out)
    return EXIT_OK if rep.ok else EXIT_BOUND


def cmd_solve_tsp(args) -> int:
    return _solve(args, TOUR)


def cmd_solve_tspp(args) -> int:
    return _solve(args, PATH)


def cmd_conf_bound(args) -> int:
    if args.config:
        with open(args.config) as fh:
            conf = Configuration.from_json(fh.read())
        rep = check_theorem_bound(conf)
        doc = {"value": fmt(value(conf)), "ceiling": fmt(rep.ceiling), "margin": fmt(rep.margin),
               "normalized_value": fmt(value(normalize(conf))),
               "items": [{"edges": i.edges, "value": fmt(i.value), "bound": fmt(i.bound)}
                         for i in rep.items]}
        _emit(json.dumps(doc, indent=1) + "\n", args.out)
        return EXIT_OK
    if args.n is None:
        raise InvalidInput("conf-bound needs --n or --config")
    us = [parse(u) for u in args.u_star] if args.u_star else [Fraction(k, 2) for k in range(2 * args.n)]
    grid = parse(args.grid)
    if args.format == "json":
        rows = frontier_csv(args.n, us, grid).splitlines()[1:]
        doc = [dict(zip(("u_star", "val_lower_bound", "ceiling"), r.split(","))) for r in rows]
        _emit(json.dumps(doc, indent=1) + "\n", args.out)
    else:
        _emit(frontier_csv(args.n, us, grid), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    reports = []
    for seed, g, s, t in generators.batch(args.count, args.seed):
        oracle = args.oracle and g.n <= min(14, DP_CAP)
        for mode in (TOUR, PATH):
            opts = RunOptions(mode=mode, s=s, t=t, oracle=oracle, timing=args.timing)
            reports.append(run_pipeline(g, opts, name=f"random_2vc-{seed}-{mode}", seed=seed))
    if args.format == "csv":
        text = batch_csv(reports)
    else:
        text = "".join(json.dumps(json.loads(r.to_json()), sort_keys=True) + "\n" for r in reports)
    _emit(text, args.out)
    bad = [r for r in reports if not r.ok]
    for r in bad:
        print(f"{r.instance['name']}: {[b['name'] for b in r.failures()]}", file=sys.stderr)
    return EXIT_BOUND if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphtsp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--out", help="write to this file instead of stdout")
        if seed:
            sp.add_argument("--seed", type=int, default=None)

    sp = sub.add_parser("gen", help="generate a graph")
    sp.add_argument("kind", choices=["cycle", "complete", "grid", "gap", "random_2vc"])
    for key in ("n", "m", "k", "a", "b"):
        sp.add_argument(f"--{key}", type=int)
    common(sp)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("lp", help="solve the cut relaxation exactly")
    sp.add_argument("graph")
    sp.add_argument("--path", type=int, nargs=2, metavar=("S", "T"))
    common(sp, seed=False)
    sp.set_defaults(func=cmd_lp)

    sp = sub.add_parser("circulate", help="build f', f'', C* and audit them")
    sp.add_argument("graph")
    sp.add_argument("--root", type=int, default=0)
    common(sp, seed=False)
    sp.set_defaults(func=cmd_circulate)

    for name, func, path in (("solve-tsp", cmd_solve_tsp, False), ("solve-tspp", cmd_solve_tspp, True)):
        sp = sub.add_parser(name, help="full pipeline with report")
        sp.add_argument("graph")
        if path:
            sp.add_argument("s", type=int)
            sp.add_argument("t", type=int)
        sp.add_argument("--root", type=int, default=0)
        sp.add_argument("--oracle", action="store_true", help="also run the exact solver")
        sp.add_argument("--timing", action="store_true", help="record wall-clock timings")
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("conf-bound", help="configuration value frontier or check")
    sp.add_argument("--n", type=int)
    sp.add_argument("--u-star", nargs="*", help="mass values as p/q")
    sp.add_argument("--grid", default="1/12")
    sp.add_argument("--config", help="check a configuration JSON file instead")
    sp.add_argument("--format", choices=["json", "csv"], default="csv")
    common(sp, seed=False)
    sp.set_defaults(func=cmd_conf_bound)

    sp = sub.add_parser("verify", help="batch property run over seeded random instances")
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--oracle", action="store_true")
    sp.add_argument("--timing", action="store_true")
    sp.add_argument("--format", choices=["json", "csv"], default="csv")
    common(sp, seed=False)
    sp.add_argument("--seed", type=int, default=1)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BoundViolation as exc:
        print(f"bound violation: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except TooLarge as exc:
        print(f"size cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InvalidInput, Disconnected, NotTwoVertexConnected) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GraphTSPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
