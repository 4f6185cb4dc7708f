"""Item configurations (x, l, u) and their value under an edge budget.

An item uses ``e = ceil((l + u) / x)`` edges and is worth
``max(0, l + u - 1)``.  The per-item inequality
``v <= u + (e - u) / 6`` summed over items caps the value of any
configuration at ``u* + (n - u*) / 6``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import BoundViolation, BudgetInfeasible, InvalidConfiguration, ParseError
from .rational import ceil_div, fmt, parse

ZERO = Fraction(0)
Item = tuple  # (x, l, u) as Fractions


def edges_of(item: Item) -> int:
    x, l, u = item
    if l + u == 0:
        return 0
    return ceil_div((l + u) / x)


def item_value(item: Item) -> Fraction:
    _, l, u = item
    return max(ZERO, l + u - 1)


def ceiling(n, u_star) -> Fraction:
    u_star = Fraction(u_star)
    return u_star + (n - u_star) / 6


@dataclass(frozen=True)
class Configuration:
    items: tuple
    edge_budget: int
    mass_budget: Fraction

    @classmethod
    def of(cls, items, edge_budget: int, mass_budget=None) -> "Configuration":
        its = tuple(tuple(Fraction(c) for c in it) for it in items)
        mass = sum((u for _, _, u in its), ZERO) if mass_budget is None else Fraction(mass_budget)
        return cls(its, edge_budget, mass)

    @property
    def edges(self) -> list[int]:
        return [edges_of(it) for it in self.items]

    def violations(self) -> list[str]:
        out = []
        for i, it in enumerate(self.items):
            if len(it) != 3:
                out.append(f"item {i}: expected (x, l, u)")
                continue
            x, l, u = it
            if l < 0 or u < 0:
                out.append(f"item {i}: negative l or u")
            zero = l == 0 and u == 0
            if not (0 < x <= 1 or (zero and 0 <= x <= 1)):
                out.append(f"item {i}: x={x} outside (0, 1]")
                continue
            if l > 2 - x:
                out.append(f"item {i}: l={l} exceeds 2-x={2 - x}")
            if u > 0 and l != 2 - x:
                out.append(f"item {i}: u > 0 requires l = 2-x")
        if out:
            return out
        if sum(self.edges) > self.edge_budget:
            out.append(f"edges {sum(self.edges)} exceed the budget {self.edge_budget}")
        mass = sum((u for _, _, u in self.items), ZERO)
        if mass != self.mass_budget:
            out.append(f"mass {mass} differs from u*={self.mass_budget}")
        return out

    def validate(self) -> "Configuration":
        bad = self.violations()
        if bad:
            raise InvalidConfiguration(bad)
        return self

    def to_json(self) -> str:
        return json.dumps({"items": [[fmt(c) for c in it] for it in self.items],
                           "n": self.edge_budget, "u_star": fmt(self.mass_budget)})

    @classmethod
    def from_json(cls, text: str) -> "Configuration":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from None
        if not isinstance(doc, dict) or set(doc) != {"items", "n", "u_star"}:
            raise ParseError("configuration needs exactly the keys items, n, u_star")
        items = tuple(tuple(parse(c) for c in it) for it in doc["items"])
        return cls(items, int(doc["n"]), parse(doc["u_star"]))


def value(c: Configuration) -> Fraction:
    c.validate()
    return sum((item_value(it) for it in c.items), ZERO)


def normalize_item(item: Item) -> Item:
    """Move one item to a saturated normal form without losing value.

    First l is raised (and, at the wall l = 2 - x, x is traded for l) until
    the item uses its edges exactly; then a saturated item strictly below
    the wall slides along l = e*x up to it.
    """
    x, l, u = item
    e = edges_of(item)
    if e == 0:
        return item
    raised = e * x - u
    if raised <= 2 - x:
        l = raised
    else:
        x = Fraction(2 + u, e + 1)
        l = 2 - x
    if 0 < l < 2 - x:
        x = Fraction(2, e + 1)
        l = 2 - x
    return (x, l, u)


def normalize(c: Configuration) -> Configuration:
    c.validate()
    return Configuration(tuple(normalize_item(it) for it in c.items), c.edge_budget, c.mass_budget)


@dataclass(frozen=True)
class ItemCheck:
    item: Item
    edges: int
    value: Fraction
    bound: Fraction

    @property
    def margin(self) -> Fraction:
        return self.bound - self.value


@dataclass(frozen=True)
class TheoremCheck:
    items: tuple
    value: Fraction
    ceiling: Fraction

    @property
    def margin(self) -> Fraction:
        return self.ceiling - self.value

    @property
    def ok(self) -> bool:
        return self.margin >= 0 and all(i.margin >= 0 for i in self.items)


def check_theorem_bound(c: Configuration) -> TheoremCheck:
    c.validate()
    checks = []
    for it in c.items:
        e = edges_of(it)
        u = it[2]
        checks.append(ItemCheck(it, e, item_value(it), u + (e - u) / 6))
    total = sum((ch.value for ch in checks), ZERO)
    report = TheoremCheck(tuple(checks), total, ceiling(c.edge_budget, c.mass_budget))
    for ch in checks:
        if ch.margin < 0:
            raise BoundViolation("item_value", ch.value, ch.bound, str(ch.item))
    if report.margin < 0:
        raise BoundViolation("configuration_value", report.value, report.ceiling)
    return report


TWO_EDGE = (Fraction(2, 3), Fraction(4, 3), ZERO)
THREE_EDGE = (Fraction(1, 2), Fraction(3, 2), ZERO)


def tight_example(n: int, u_star) -> Configuration:
    """Near-extremal configuration: one item carrying all the mass, the rest
    filled with the 2-edge and 3-edge items that meet the per-item bound."""
    u_star = Fraction(u_star)
    if n < 2 or u_star < 0:
        raise BudgetInfeasible("need n >= 2 and u* >= 0")
    items = []
    left = n
    if u_star > 0:
        mass_item = (Fraction(1), Fraction(1), u_star)
        left -= edges_of(mass_item)
        if left < 0:
            raise BudgetInfeasible(f"mass item needs {edges_of(mass_item)} edges > {n}")
        items.append(mass_item)
    if left >= 2:
        threes = left % 2
        items += [TWO_EDGE] * ((left - 3 * threes) // 2) + [THREE_EDGE] * threes
    return Configuration(tuple(items), n, u_star).validate()


def _grid_units(u_star: Fraction, grid: Fraction) -> int:
    return lcm(grid.denominator, u_star.denominator)


def brute_force_val(n: int, u_star, grid=Fraction(1, 12)) -> Fraction | None:
    """Best value over items on the wall l = 2 - x with x and u on a grid.

    The saturated normal forms (x, 2 - x, (e + 1) x - 2) are among them, so
    this is a lower bound on the optimum that can only grow as the grid is
    refined.  Unbounded 2D knapsack: total edges at most n, total mass
    exactly u*.  When u* is off the grid the grid is refined to a common
    denominator.  Returns None if no item mix carries exactly u*.
    """
    u_star = Fraction(u_star)
    q = _grid_units(u_star, Fraction(grid))  # work in units of 1/q
    mass = int(u_star * q)
    best_kind: dict[tuple[int, int], int] = {}
    for k in range(1, q + 1):
        for w in range(mass + 1):
            e = -((k - 2 * q - w) // k)  # ceil((2q - k + w) / k)
            if e > n:
                break
            v = max(0, q - k + w)
            if best_kind.get((e, w), -1) < v:
                best_kind[(e, w)] = v
    kinds = [(e, w, v) for (e, w), v in sorted(best_kind.items())]
    best: list[list[int | None]] = [[None] * (mass + 1) for _ in range(n + 1)]
    best[0][0] = 0
    for used in range(n + 1):
        for w in range(mass + 1):
            cur = best[used][w]
            if cur is None:
                continue
            for e, dw, v in kinds:
                ne, nw = used + e, w + dw
                if ne <= n and nw <= mass and (best[ne][nw] is None or best[ne][nw] < cur + v):
                    best[ne][nw] = cur + v
    top = [best[used][mass] for used in range(n + 1) if best[used][mass] is not None]
    return Fraction(max(top), q) if top else None


def frontier_csv(n: int, u_values, grid=Fraction(1, 12)) -> str:
    lines = ["u_star,val_lower_bound,ceiling"]
    for u in u_values:
        v = brute_force_val(n, u, grid)
        lines.append(f"{fmt(u)},{'' if v is None else fmt(v)},{fmt(ceiling(n, u))}")
    return "\n".join(lines) + "\n"
