"""Ground truth by exhaustive search over valid mappings, plus string edit distance.

Nothing here touches the forest recurrence: a tree distance is the cheapest
one-to-one, sibling- and ancestor-order preserving node mapping, costed as
substitutions for mapped pairs, deletions for unmapped nodes of the first tree
and insertions for unmapped nodes of the second.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .costs import CostModel
from .tree import Tree

__all__ = [
    "DEFAULT_SIZE_GUARD",
    "MappingCandidate",
    "SizeGuardError",
    "brute_force_batch",
    "brute_force_distance",
    "brute_force_mapping",
    "compatible",
    "size_guard",
    "string_edit_distance",
    "valid_mappings",
]

DEFAULT_SIZE_GUARD = 10


class SizeGuardError(ValueError):
    """Input too large for exhaustive search."""


def size_guard() -> int:
    raw = os.environ.get("TEDKIT_SIZE_GUARD")
    return int(raw) if raw else DEFAULT_SIZE_GUARD


def _check_guard(t1: Tree, t2: Tree, guard: int | None) -> None:
    limit = size_guard() if guard is None else guard
    if t1.size > limit or t2.size > limit:
        raise SizeGuardError(
            f"exhaustive search refuses trees of {t1.size} and {t2.size} nodes (limit {limit})")


@dataclass
class MappingCandidate:
    pairs: list[tuple[int, int]]

    def cost(self, t1: Tree, t2: Tree, cost: CostModel) -> Fraction:
        used1 = {a for a, _ in self.pairs}
        used2 = {b for _, b in self.pairs}
        total = sum((cost.sub(t1.labels[a], t2.labels[b]) for a, b in self.pairs), Fraction(0))
        total += sum((cost.delete(t1.labels[a]) for a in range(t1.size) if a not in used1), Fraction(0))
        total += sum((cost.ins(t2.labels[b]) for b in range(t2.size) if b not in used2), Fraction(0))
        return total


def _anc(t: Tree, a: int, b: int) -> bool:
    # a is a proper ancestor of b: b lies in a's subtree id range
    return t.lml[a] <= b < a


def _left(t: Tree, a: int, b: int) -> bool:
    # a is left of b: a precedes b in postorder and is not its descendant
    return a < t.lml[b]


def compatible(t1: Tree, t2: Tree, p: tuple[int, int], q: tuple[int, int]) -> bool:
    """Whether two mapping pairs can coexist (one-to-one, ancestor and sibling order)."""
    (a, b), (c, d) = p, q
    if (a == c) != (b == d):
        return False
    if a == c:
        return True
    if _anc(t1, a, c) != _anc(t2, b, d) or _anc(t1, c, a) != _anc(t2, d, b):
        return False
    return _left(t1, a, c) == _left(t2, b, d) and _left(t1, c, a) == _left(t2, d, b)


def _extensions(t1: Tree, t2: Tree, chosen: list[tuple[int, int]], a: int, used: set[int]):
    for b in range(t2.size):
        if b not in used and all(compatible(t1, t2, (a, b), q) for q in chosen):
            yield b


def valid_mappings(t1: Tree, t2: Tree, guard: int | None = None) -> list[tuple[tuple[int, int], ...]]:
    """Every valid mapping between the shapes of ``t1`` and ``t2`` (labels ignored)."""
    _check_guard(t1, t2, guard)
    out: list[tuple[tuple[int, int], ...]] = []
    chosen: list[tuple[int, int]] = []
    used: set[int] = set()

    def extend(a: int) -> None:
        if a == t1.size:
            out.append(tuple(chosen))
            return
        extend(a + 1)
        for b in list(_extensions(t1, t2, chosen, a, used)):
            chosen.append((a, b))
            used.add(b)
            extend(a + 1)
            chosen.pop()
            used.discard(b)

    extend(0)
    return out


def brute_force_distance(t1: Tree, t2: Tree, cost: CostModel, guard: int | None = None) -> Fraction:
    """Cost of the cheapest valid mapping."""
    return brute_force_mapping(t1, t2, cost, guard)[0]


def brute_force_mapping(t1: Tree, t2: Tree, cost: CostModel,
                        guard: int | None = None) -> tuple[Fraction, MappingCandidate]:
    """Cheapest valid mapping, by depth-first search with a cost bound.

    Cost is accounted as "insert everything" plus, per node of ``t1``, either
    its deletion cost or ``sub - ins`` of its partner.  The per-node minimum
    of those options gives an admissible bound for pruning.
    """
    _check_guard(t1, t2, guard)
    m, n = t1.size, t2.size
    dele = [cost.delete(x) for x in t1.labels]
    ins = [cost.ins(y) for y in t2.labels]
    gain = [[cost.sub(t1.labels[a], t2.labels[b]) - ins[b] for b in range(n)] for a in range(m)]
    lb = [min([dele[a], *gain[a]]) for a in range(m)]
    rest = [Fraction(0)] * (m + 1)
    for a in range(m - 1, -1, -1):
        rest[a] = rest[a + 1] + lb[a]
    base = sum(ins, Fraction(0))
    best = [base + sum(dele, Fraction(0))]
    best_pairs: list[list[tuple[int, int]]] = [[]]
    chosen: list[tuple[int, int]] = []
    used: set[int] = set()

    def search(a: int, acc: Fraction) -> None:
        if acc + rest[a] >= best[0]:
            return
        if a == m:
            best[0] = acc
            best_pairs[0] = list(chosen)
            return
        options = [(gain[a][b], b) for b in _extensions(t1, t2, chosen, a, used)]
        options.sort()
        for g, b in options:
            chosen.append((a, b))
            used.add(b)
            search(a + 1, acc + g)
            chosen.pop()
            used.discard(b)
        search(a + 1, acc + dele[a])

    search(0, base)
    return best[0], MappingCandidate(best_pairs[0])


def brute_force_batch(shape1: Tree, shape2: Tree, labelings1, labelings2, cost: CostModel,
                      mappings=None):
    """Oracle distances for every relabeling pair of two shapes.

    Returns ``(scaled, scale)`` like :func:`tedkit.engines.ted_batch`.  The
    valid mappings depend only on the shapes, so they are enumerated once
    (or passed in) and costed against all labelings with numpy.
    """
    import numpy as np

    from .costs import CompiledCosts

    cc = CompiledCosts.batch(cost, labelings1, labelings2)
    if mappings is None:
        mappings = valid_mappings(shape1, shape2)
    shape = (len(labelings1), len(labelings2))
    total = np.zeros(shape, dtype=np.int64)
    for col in cc.dele:
        total = total + col
    for row in cc.ins:
        total = total + row
    gain = [[cc.sub[a][b] - cc.dele[a] - cc.ins[b] for b in range(shape2.size)] for a in range(shape1.size)]
    best = np.broadcast_to(total, shape).copy()
    for mp in mappings:
        acc = total
        for a, b in mp:
            acc = acc + gain[a][b]
        np.minimum(best, acc, out=best)
    return best, cc.scale


def string_edit_distance(s1: Sequence[str], s2: Sequence[str], cost: CostModel) -> Fraction:
    """Wagner-Fischer dynamic program over two label sequences."""
    prev = [Fraction(0)]
    for b in s2:
        prev.append(prev[-1] + cost.ins(b))
    for a in s1:
        cur = [prev[0] + cost.delete(a)]
        for j, b in enumerate(s2, 1):
            cur.append(min(prev[j] + cost.delete(a), cur[j - 1] + cost.ins(b), prev[j - 1] + cost.sub(a, b)))
        prev = cur
    return prev[-1]
