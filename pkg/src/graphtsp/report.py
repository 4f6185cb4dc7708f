"""Versioned JSON reports for one pipeline run."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from fractions import Fraction

from .errors import ParseError
from .graph_core import Graph
from .oracles import exact_tsp, exact_tspp
from .pipeline import PATH, TOUR, RunOptions, Trace, tsp_bundle, tspp_bundle
from .rational import fmt, parse

SCHEMA = "1"

_KEYS = {
    "instance": {"name", "n", "m", "seed"},
    "lp": {"objective", "support_size", "extreme", "path_objective"},
    "circulation": {"fprime", "fsecond", "f", "cstar", "u_star", "blocks"},
    "tours": {"candidates", "chosen", "edges", "order", "exact_opt", "ratio_vs_lp", "ratio_vs_opt"},
    "candidate": {"edges", "bound", "bound_name"},
    "bound": {"name", "scope", "lhs", "rhs", "pass"},
}
_TOP = {"schema", "mode", "endpoints", "instance", "lp", "circulation", "bounds", "tours", "timing"}


@dataclass(frozen=True)
class Report:
    mode: str
    endpoints: list | None
    instance: dict
    lp: dict
    circulation: dict
    bounds: list
    tours: dict
    timing: dict | None = None
    schema: str = SCHEMA

    @property
    def ok(self) -> bool:
        return all(b["pass"] for b in self.bounds)

    def failures(self) -> list[dict]:
        return [b for b in self.bounds if not b["pass"]]

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from None
        _expect(doc, _TOP, "report")
        if doc["schema"] != SCHEMA:
            raise ParseError(f"unsupported schema {doc['schema']!r}")
        for key in ("instance", "lp", "circulation", "tours"):
            _expect(doc[key], _KEYS[key], key)
        for name, cand in doc["tours"]["candidates"].items():
            _expect(cand, _KEYS["candidate"], f"candidate {name}")
        for b in doc["bounds"]:
            _expect(b, _KEYS["bound"], "bound")
            if (parse(b["lhs"]) <= parse(b["rhs"])) != b["pass"]:
                raise ParseError(f"pass flag of {b['name']} disagrees with its sides")
        return cls(**doc)


def _expect(doc, keys: set, where: str) -> None:
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: expected an object")
    extra, missing = set(doc) - keys, keys - set(doc)
    if extra or missing:
        raise ParseError(f"{where}: unknown {sorted(extra)} / missing {sorted(missing)}")


def run_pipeline(g: Graph, options: RunOptions = RunOptions(), name: str = "graph",
                 seed: int | None = None) -> Report:
    trace = Trace(None, None, [])
    if options.mode == TOUR:
        bundle = tsp_bundle(g, options.root, trace)
        endpoints = None
    elif options.mode == PATH:
        bundle = tspp_bundle(g, options.s, options.t, trace)
        endpoints = [options.s, options.t]
    else:
        raise ValueError(f"unknown mode {options.mode!r}")
    exact = None
    if options.oracle:
        if options.mode == TOUR:
            exact = exact_tsp(g)
        else:
            exact = exact_tspp(g, options.s, options.t)

    bounds, sums = [], dict.fromkeys(("fprime", "fsecond", "f", "cstar", "u_star"), Fraction(0))
    for k, bt in enumerate(trace.blocks):
        if bt.report is None:
            continue
        r = bt.report
        sums["fprime"] += r.fprime_cost
        sums["fsecond"] += r.fsecond_total
        sums["f"] += r.f_cost
        sums["cstar"] += r.cstar_cost
        sums["u_star"] += r.u_star
        for c in r.checks:
            d = c.as_dict()
            d["scope"] = f"block{k}" + (f":{c.scope}" if c.scope else "")
            bounds.append(d)
    bounds += [c.as_dict() for c in trace.checks]
    chosen = bundle.candidates[bundle.chosen]
    if exact is not None:
        limit = Fraction(13, 9) if options.mode == TOUR else Fraction(19, 12) + Fraction(3, g.n)
        name_ = "ratio_vs_opt" if options.mode == TOUR else "path_ratio_vs_opt"
        bounds.append({"name": name_, "scope": "", "lhs": fmt(Fraction(chosen.edges, max(exact, 1))),
                       "rhs": fmt(limit), "pass": Fraction(chosen.edges, max(exact, 1)) <= limit})
    lp_ref = trace.lp_path.objective if trace.lp_path is not None else trace.lp.objective
    tours = {
        "candidates": {k: {"edges": c.edges, "bound": fmt(c.bound), "bound_name": c.bound_name}
                       for k, c in bundle.candidates.items()},
        "chosen": bundle.chosen,
        "edges": chosen.edges,
        "order": bundle.walk(),
        "exact_opt": exact,
        "ratio_vs_lp": fmt(Fraction(chosen.edges) / lp_ref),
        "ratio_vs_opt": None if exact is None else fmt(Fraction(chosen.edges, max(exact, 1))),
    }
    lp = {"objective": fmt(trace.lp.objective), "support_size": len(trace.lp.support),
          "extreme": trace.lp.is_extreme,
          "path_objective": None if trace.lp_path is None else fmt(trace.lp_path.objective)}
    circ = {k: fmt(v) for k, v in sums.items()}
    circ["blocks"] = len(trace.blocks)
    return Report(options.mode, endpoints, {"name": name, "n": g.n, "m": g.m, "seed": seed},
                  lp, circ, bounds, tours,
                  {k: round(v, 6) for k, v in trace.timing.items()} if options.timing else None)


def tour_json(report: Report) -> str:
    """Compact tour record of the chosen candidate."""
    t = report.tours
    return json.dumps({"kind": report.mode, "order": t["order"], "edges": t["edges"],
                       "bound": t["candidates"][t["chosen"]]["bound"],
                       "ratio_vs_lp": t["ratio_vs_lp"], "ratio_vs_opt": t["ratio_vs_opt"]})


def batch_csv(reports) -> str:
    lines = ["name,seed,mode,n,m,opt_lp,cstar,chosen,edges,exact_opt,ok"]
    for r in reports:
        i, t = r.instance, r.tours
        lines.append(",".join(str(v) for v in (
            i["name"], "" if i["seed"] is None else i["seed"], r.mode, i["n"], i["m"],
            r.lp["objective"], r.circulation["cstar"], t["chosen"], t["edges"],
            "" if t["exact_opt"] is None else t["exact_opt"], int(r.ok))))
    return "\n".join(lines) + "\n"
