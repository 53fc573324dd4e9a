"""Step counting for path-decomposition strategies and the combined planner.

A strategy decides, for every subtree pair ``(v, w)`` the recursion reaches,
which root-to-leaf path to decompose along (leftmost, rightmost or heavy) and
in which tree.  The local work of a pair is the number of relaxations its
sweeps perform; subtrees hanging off the chosen path recurse.  Because each
pair is reached along exactly one recursion branch, a plan's total is the
sum of local work over the pairs it reaches, and counting never needs the
distance tables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .engines import HEAVY, LEFTMOST, RIGHTMOST, DistanceTables, hanging, run_decomposition
from .tree import Tree

__all__ = [
    "PURE_STRATEGIES",
    "StepReport",
    "StrategyPlan",
    "count_steps",
    "local_steps",
    "plan",
    "ted_combined",
]

# option order doubles as tie precedence: LEFTMOST > RIGHTMOST > HEAVY
OPTIONS = (
    (LEFTMOST, 1), (LEFTMOST, 2),
    (RIGHTMOST, 1), (RIGHTMOST, 2),
    (HEAVY, 2), (HEAVY, 1),
)

PURE_STRATEGIES = ("leftmost", "rightmost", "heavy", "klein")
ALIASES = {"zs": "leftmost", "demaine": "heavy"}


@dataclass
class StepReport:
    """Relaxation counts of one strategy on one tree pair.

    ``by_category`` splits the total by the relative subtree sizes of the
    pair doing the work, with ``m`` the size of the smaller input tree and
    ``a``/``b`` the pair's subtree sizes in the smaller/larger input:
    ``S1`` when ``b > m``, ``S2`` when ``a >= b`` (and ``b <= m``), ``S3``
    otherwise.
    """

    strategy: str
    total: int
    base: int = 0
    sweeps: int = 0
    by_category: dict[str, int] = field(default_factory=lambda: {"S1": 0, "S2": 0, "S3": 0})

    def as_dict(self) -> dict:
        return {"strategy": self.strategy, "total": self.total, "base": self.base,
                "sweeps": self.sweeps, **self.by_category}


def local_steps(t1: Tree, t2: Tree, v: int, w: int, kind: str, side: int) -> int:
    """Relaxations performed by the sweeps of pair ``(v, w)`` under one decision."""
    if kind == HEAVY:
        if side == 2:
            return t1.relevant_forest_count(v) * t2.sizes[w]
        return t2.relevant_forest_count(w) * t1.sizes[v]
    key = "lr" if kind == LEFTMOST else "rl"
    if side == 1:
        return t1.sizes[v] * t2.keyroot_size_sums[key][w]
    return t2.sizes[w] * t1.keyroot_size_sums[key][v]


def _local_sweeps(t1: Tree, t2: Tree, v: int, w: int, kind: str, side: int) -> tuple[int, int]:
    """(sweep count, base entries) matching :meth:`engines._Run.sweep` bookkeeping."""
    if kind == HEAVY:
        if side == 2:
            return 1, t1.relevant_forest_count(v) + 1 + t2.sizes[w]
        return 1, t2.relevant_forest_count(w) + 1 + t1.sizes[v]
    key = "lr" if kind == LEFTMOST else "rl"
    if side == 1:
        ks = t2.keyroot_subtrees(key, w)
        return len(ks), t2.keyroot_size_sums[key][w] + len(ks) * (1 + t1.sizes[v])
    ks = t1.keyroot_subtrees(key, v)
    return len(ks), t1.keyroot_size_sums[key][v] + len(ks) * (1 + t2.sizes[w])


def _category(t1: Tree, t2: Tree, v: int, w: int) -> str:
    a, b = t1.sizes[v], t2.sizes[w]
    m = t1.size
    if t1.size > t2.size:
        a, b, m = b, a, t2.size
    if b > m:
        return "S1"
    if a >= b:
        return "S2"
    return "S3"


def walk(t1: Tree, t2: Tree, decide: Callable[[int, int], tuple[str, int]]):
    """Yield ``(v, w, kind, side)`` for every pair the strategy reaches, parents first."""
    stack = [(t1.root, t2.root)]
    while stack:
        v, w = stack.pop()
        kind, side = decide(v, w)
        yield v, w, kind, side
        if side == 1:
            stack.extend((c, w) for c in hanging(t1, kind, v))
        else:
            stack.extend((v, c) for c in hanging(t2, kind, w))


def _report(t1: Tree, t2: Tree, name: str, decide, with_base: bool = True) -> StepReport:
    rep = StepReport(name, 0)
    for v, w, kind, side in walk(t1, t2, decide):
        n = local_steps(t1, t2, v, w, kind, side)
        rep.total += n
        rep.by_category[_category(t1, t2, v, w)] += n
        if with_base:
            sw, base = _local_sweeps(t1, t2, v, w, kind, side)
            rep.sweeps += sw
            rep.base += base
    return rep


@dataclass
class StrategyPlan:
    """Per-pair decisions chosen by the combined planner.

    ``decision[v][w]`` is ``(path kind, side)`` for every pair, reachable or
    not; ``best[v][w]`` is the least total steps for solving ``(v, w)``.
    ``planned_steps`` is the total for the root pair.
    """

    t1: Tree
    t2: Tree
    decision: list[list[tuple[str, int]]]
    best: list[list[int]]
    planned_steps: int

    def decide(self, v: int, w: int) -> tuple[str, int]:
        return self.decision[v][w]

    def reachable(self) -> list[tuple[int, int, str, int, int]]:
        """``(v, w, kind, side, local steps)`` for the pairs the plan executes."""
        return [(v, w, k, s, local_steps(self.t1, self.t2, v, w, k, s))
                for v, w, k, s in walk(self.t1, self.t2, self.decide)]


def plan(t1: Tree, t2: Tree) -> StrategyPlan:
    """Pick, bottom-up over all subtree pairs, the cheapest path decomposition."""
    m, n = t1.size, t2.size
    best = [[0] * n for _ in range(m)]
    decision: list[list] = [[None] * n for _ in range(m)]
    s1, s2 = t1.sizes, t2.sizes
    A1 = [t1.relevant_forest_count(v) for v in range(m)]
    A2 = [t2.relevant_forest_count(w) for w in range(n)]
    k1, k2 = t1.keyroot_size_sums, t2.keyroot_size_sums
    hang1 = {kind: [hanging(t1, kind, v) for v in range(m)] for kind in (LEFTMOST, RIGHTMOST, HEAVY)}
    hang2 = {kind: [hanging(t2, kind, w) for w in range(n)] for kind in (LEFTMOST, RIGHTMOST, HEAVY)}
    for v in range(m):
        row = best[v]
        drow = decision[v]
        for w in range(n):
            top = None
            choice = None
            for kind, side in OPTIONS:
                if kind == HEAVY:
                    cost = A1[v] * s2[w] if side == 2 else A2[w] * s1[v]
                else:
                    key = "lr" if kind == LEFTMOST else "rl"
                    cost = s1[v] * k2[key][w] if side == 1 else s2[w] * k1[key][v]
                if top is not None and cost >= top:
                    continue
                if side == 1:
                    for c in hang1[kind][v]:
                        cost += best[c][w]
                else:
                    for c in hang2[kind][w]:
                        cost += row[c]
                if top is None or cost < top:
                    top, choice = cost, (kind, side)
            row[w] = top
            drow[w] = choice
    return StrategyPlan(t1, t2, decision, best, best[t1.root][t2.root])


def _pure_decider(t1: Tree, t2: Tree, name: str):
    if name == "leftmost":
        return lambda v, w: (LEFTMOST, 1)
    if name == "rightmost":
        return lambda v, w: (RIGHTMOST, 1)
    if name == "heavy":
        s1, s2 = t1.sizes, t2.sizes
        return lambda v, w: (HEAVY, 1) if s1[v] > s2[w] else (HEAVY, 2)
    raise ValueError(f"unknown strategy {name!r}")


def count_steps(t1: Tree, t2: Tree, strategy: str = "heavy", with_base: bool = True) -> StepReport:
    """Relaxations the matching engine would perform, without running it.

    ``strategy`` is ``leftmost`` (alias ``zs``), ``rightmost``, ``heavy``
    (alias ``demaine``), ``klein`` or ``combined``.  The leftmost count uses
    the keyroot-pair closed form, which equals walking the decomposition.
    """
    name = ALIASES.get(strategy, strategy)
    if name == "combined":
        p = plan(t1, t2)
        rep = _report(t1, t2, "combined", p.decide, with_base)
        assert rep.total == p.planned_steps
        return rep
    if name == "klein":
        a, b = (t1, t2) if t1.size <= t2.size else (t2, t1)
        ks = b.index.h_keyroots
        total = a.relevant_forest_count(a.root) * b.keyroot_size_sums["h"][b.root]
        rep = StepReport("klein", total, sweeps=len(ks))
        rep.base = len(ks) * (a.relevant_forest_count(a.root) + 1) + b.keyroot_size_sums["h"][b.root]
        for k in ks:
            cat = "S1" if b.sizes[k] > a.size else ("S2" if a.size >= b.sizes[k] else "S3")
            rep.by_category[cat] += a.relevant_forest_count(a.root) * b.sizes[k]
        return rep
    if name == "leftmost" and not with_base:
        total = t1.keyroot_size_sums["lr"][t1.root] * t2.keyroot_size_sums["lr"][t2.root]
        return StepReport("leftmost", total)
    if name == "heavy" and not with_base:
        return StepReport("heavy", _heavy_total(t1, t2))
    return _report(t1, t2, name, _pure_decider(t1, t2, name), with_base)


def _heavy_total(t1: Tree, t2: Tree) -> int:
    """Heavy-strategy total without per-pair bookkeeping.

    A pair with a single-node side costs the H-keyroot size sum of the other
    side: the recursion then visits exactly the H-keyroots of that subtree
    with a local cost of their size each.
    """
    s1, s2 = t1.sizes, t2.sizes
    h1, h2 = t1.keyroot_size_sums["h"], t2.keyroot_size_sums["h"]
    total = 0
    stack = [(t1.root, t2.root)]
    while stack:
        v, w = stack.pop()
        if s1[v] == 1:
            total += h2[w]
        elif s2[w] == 1:
            total += h1[v]
        elif s1[v] > s2[w]:
            total += t2.relevant_forest_count(w) * s1[v]
            stack.extend((c, w) for c in hanging(t1, HEAVY, v))
        else:
            total += t1.relevant_forest_count(v) * s2[w]
            stack.extend((v, c) for c in hanging(t2, HEAVY, w))
    return total


def ted_combined(t1: Tree, t2: Tree, cost, strategy_plan: StrategyPlan | None = None) -> DistanceTables:
    """Distances computed along the planner's per-pair decisions."""
    p = strategy_plan or plan(t1, t2)
    return run_decomposition(t1, t2, cost, p.decide, engine="combined")
