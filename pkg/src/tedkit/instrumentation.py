"""Executable bound checks on structural indices and relaxation counts."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .costs import builtin_unit
from .engines import ENGINES
from .strategy import count_steps
from .tree import Tree, collapsed_depths, iter_root_to_leaf_paths, leaf_count

__all__ = [
    "BOUND_CONSTANTS",
    "BoundCheck",
    "check_collapsed_depths",
    "check_engine_steps",
    "check_halving",
    "step_bound",
]

# multipliers on the asymptotic expressions; fixed, see README
BOUND_CONSTANTS = {"zs": 4, "klein": 4, "demaine": 8}

# engines are actually run (rather than counted) up to this many predicted steps
RUN_LIMIT = 400_000


@dataclass
class BoundCheck:
    name: str
    observed: int
    bound: float
    subject: str = ""

    @property
    def passed(self) -> bool:
        return self.observed <= self.bound

    def row(self) -> list[str]:
        bound = f"{self.bound:.4f}" if isinstance(self.bound, float) else str(self.bound)
        return [self.name, self.subject, str(self.observed), bound, "pass" if self.passed else "FAIL"]


def check_collapsed_depths(t: Tree) -> list[BoundCheck]:
    """LR-collapsed depth against min(depth, leaves); H-collapsed depth against log2 |T|."""
    cd = collapsed_depths(t)
    return [
        BoundCheck("lr-collapsed-depth", cd["lr"], min(t.height, leaf_count(t))),
        BoundCheck("h-collapsed-depth", cd["h"], math.log2(t.size)),
    ]


def check_halving(t: Tree) -> list[BoundCheck]:
    """Walk every root-to-leaf path and compare consecutive H-keyroot subtree sizes.

    ``h-keyroot-halving`` reports the largest ``2|T[h_{j+1}]| - |T[h_j]|`` seen
    (must be <= 0).  ``h-keyroot-suffix-sum`` reports the largest
    ``sum_{i>=u} |T[h_i]| - 2|T[h_u]|`` (must be <= 0).  A path with a single
    H-keyroot contributes nothing; an empty walk reports 0 for halving.
    """
    keyroots = set(t.index.h_keyroots)
    worst_half = None
    worst_sum = None
    for path in iter_root_to_leaf_paths(t):
        sizes = [t.sizes[x] for x in path if x in keyroots]
        for a, b in zip(sizes, sizes[1:]):
            slack = 2 * b - a
            if worst_half is None or slack > worst_half:
                worst_half = slack
        tail = 0
        for s in reversed(sizes):
            tail += s
            slack = tail - 2 * s
            if worst_sum is None or slack > worst_sum:
                worst_sum = slack
    return [
        BoundCheck("h-keyroot-halving", 0 if worst_half is None else worst_half, 0),
        BoundCheck("h-keyroot-suffix-sum", worst_sum, 0),
    ]


def step_bound(engine: str, t1: Tree, t2: Tree) -> float:
    """C times the asymptotic running-time expression of ``engine``."""
    m, n = sorted((t1.size, t2.size))
    c = BOUND_CONSTANTS[engine]
    if engine == "zs":
        f1 = min(t1.height, leaf_count(t1))
        f2 = min(t2.height, leaf_count(t2))
        return c * m * n * f1 * f2
    if engine == "klein":
        return c * m * m * n * (1 + math.log2(n))
    if engine == "demaine":
        return c * m * m * n * (1 + math.log2(n / m))
    raise ValueError(f"no bound for engine {engine!r}")


def check_engine_steps(t1: Tree, t2: Tree, engines=("zs", "klein", "demaine"),
                       run: bool | None = None, subject: str = "") -> list[BoundCheck]:
    """Relaxation counts against :func:`step_bound`.

    With ``run=None`` an engine is executed when its predicted count is at
    most ``RUN_LIMIT`` and its counter is compared with the prediction;
    larger inputs use the prediction alone.
    """
    out = []
    for name in engines:
        predicted = count_steps(t1, t2, name, with_base=False).total
        do_run = run if run is not None else predicted <= RUN_LIMIT
        observed = predicted
        if do_run:
            observed = ENGINES[name](t1, t2, builtin_unit()).steps
            if observed != predicted:
                raise AssertionError(f"{name}: engine counted {observed}, prediction {predicted}")
        out.append(BoundCheck(name, observed, step_bound(name, t1, t2), subject))
    return out
