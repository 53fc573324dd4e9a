"""Edit mappings: recovery from a subtree distance table, validation, scripts."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .costs import CompiledCosts, CostModel
from .engines import ENGINES
from .tree import Tree

__all__ = ["EditMapping", "recover_mapping", "recover_mappings_batch", "validate_mapping"]


@dataclass
class EditMapping:
    pairs: list[tuple[int, int]] = field(default_factory=list)
    deleted: list[int] = field(default_factory=list)
    inserted: list[int] = field(default_factory=list)
    distance: Fraction | None = None

    def cost(self, t1: Tree, t2: Tree, cost: CostModel) -> Fraction:
        total = sum((cost.sub(t1.labels[a], t2.labels[b]) for a, b in self.pairs), Fraction(0))
        total += sum((cost.delete(t1.labels[a]) for a in self.deleted), Fraction(0))
        total += sum((cost.ins(t2.labels[b]) for b in self.inserted), Fraction(0))
        return total

    def script(self, t1: Tree, t2: Tree) -> list[str]:
        """One line per operation; nodes are ``label@n`` with 1-based LR postorder numbers."""
        lines = [f"sub {t1.labels[a]}@{a + 1} {t2.labels[b]}@{b + 1}" for a, b in sorted(self.pairs)]
        lines += [f"del {t1.labels[a]}@{a + 1}" for a in sorted(self.deleted)]
        lines += [f"ins {t2.labels[b]}@{b + 1}" for b in sorted(self.inserted)]
        return lines

    @classmethod
    def from_pairs(cls, t1: Tree, t2: Tree, pairs, distance: Fraction | None = None) -> "EditMapping":
        pairs = sorted(pairs)
        used1 = {a for a, _ in pairs}
        used2 = {b for _, b in pairs}
        return cls(pairs, [a for a in range(t1.size) if a not in used1],
                   [b for b in range(t2.size) if b not in used2], distance)


def _prefix_table(t1: Tree, t2: Tree, cc: CompiledCosts, D, i: int, j: int):
    """Forest distances between LR prefixes of ``T1[i]`` and ``T2[j]``.

    ``f[x - lo1 + 1][y - lo2 + 1]`` is the distance between the nodes
    ``lml(i)..x`` and ``lml(j)..y``; row and column 0 hold the empty prefix.
    """
    lo1, lo2 = t1.lml[i], t2.lml[j]
    rows, cols = i - lo1 + 2, j - lo2 + 2
    f = [[0] * cols for _ in range(rows)]
    for x in range(lo1, i + 1):
        f[x - lo1 + 1][0] = f[x - lo1][0] + cc.dele[x]
    for y in range(lo2, j + 1):
        f[0][y - lo2 + 1] = f[0][y - lo2] + cc.ins[y]
    for x in range(lo1, i + 1):
        r = x - lo1 + 1
        for y in range(lo2, j + 1):
            c = y - lo2 + 1
            best = min(f[r - 1][c] + cc.dele[x], f[r][c - 1] + cc.ins[y])
            if t1.lml[x] == lo1 and t2.lml[y] == lo2:
                best = min(best, f[r - 1][c - 1] + cc.sub[x][y])
            else:
                best = min(best, f[t1.lml[x] - lo1][t2.lml[y] - lo2] + D[x][y])
            f[r][c] = best
    return f


def _trace(t1: Tree, t2: Tree, cc: CompiledCosts, D) -> list[tuple[int, int]]:
    pairs = []
    todo = [(t1.root, t2.root)]
    while todo:
        i, j = todo.pop()
        # the table for (i, j) may have been overwritten by the engine; rebuild it
        f = _prefix_table(t1, t2, cc, D, i, j)
        lo1, lo2 = t1.lml[i], t2.lml[j]
        x, y = i, j
        while x >= lo1 or y >= lo2:
            r, c = x - lo1 + 1, y - lo2 + 1
            if x < lo1:
                y -= 1
                continue
            if y < lo2:
                x -= 1
                continue
            here = f[r][c]
            if t1.lml[x] == lo1 and t2.lml[y] == lo2:
                if here == f[r - 1][c - 1] + cc.sub[x][y]:
                    pairs.append((x, y))
                    x, y = x - 1, y - 1
                    continue
            elif here == f[t1.lml[x] - lo1][t2.lml[y] - lo2] + D[x][y]:
                todo.append((x, y))
                x, y = t1.lml[x] - 1, t2.lml[y] - 1
                continue
            if here == f[r - 1][c] + cc.dele[x]:
                x -= 1
            else:
                y -= 1
    return pairs


def recover_mapping(t1: Tree, t2: Tree, cost: CostModel, engine: str = "demaine") -> EditMapping:
    """An optimal mapping, traced back through recomputed forest tables.

    Ties prefer substitution (or the subtree split), then deletion, then
    insertion.  ``engine="oracle"`` returns the exhaustive search's mapping.
    """
    if engine == "oracle":
        from .oracle import brute_force_mapping

        dist, cand = brute_force_mapping(t1, t2, cost)
        return EditMapping.from_pairs(t1, t2, cand.pairs, dist)
    cc = cost.compile(t1, t2)
    res = ENGINES[engine](t1, t2, cc)
    pairs = _trace(t1, t2, cc, res.scaled)
    return EditMapping.from_pairs(t1, t2, pairs, res.distance)


class _Slice:
    """Scalar cost view of one (labeling, labeling) cell of a batched table."""

    __slots__ = ("dele", "ins", "sub")

    def __init__(self, dele, ins, sub):
        self.dele, self.ins, self.sub = dele, ins, sub


def recover_mappings_batch(shape1: Tree, shape2: Tree, labelings1, labelings2, cost: CostModel,
                           engine: str = "zs"):
    """Yield ``(p, q, mapping, scaled cost, scale)`` for every relabeling pair of two shapes.

    One array-valued engine run fills the subtree tables of all pairs; each
    pair is then traced back on its own scalar slice of those tables.
    ``scaled cost`` is the mapping's cost recomputed from the slice, to be
    compared with ``mapping.distance``.
    """
    import numpy as np

    cc = CompiledCosts.batch(cost, labelings1, labelings2)
    res = ENGINES[engine](shape1, shape2, cc)
    m, n = shape1.size, shape2.size
    shape = (len(labelings1), len(labelings2))
    D = np.stack([np.stack([np.broadcast_to(res.scaled[i][j], shape) for j in range(n)]) for i in range(m)])
    S = np.stack([np.stack([np.broadcast_to(cc.sub[i][j], shape) for j in range(n)]) for i in range(m)])
    dele = np.stack([col[:, 0] for col in cc.dele])
    ins = np.stack([row[0, :] for row in cc.ins])
    for p in range(shape[0]):
        dp = dele[:, p].tolist()
        Dp = D[:, :, p, :]
        Sp = S[:, :, p, :]
        for q in range(shape[1]):
            view = _Slice(dp, ins[:, q].tolist(), Sp[:, :, q].tolist())
            table = Dp[:, :, q].tolist()
            pairs = _trace(shape1, shape2, view, table)
            mp = EditMapping.from_pairs(shape1, shape2, pairs, Fraction(table[-1][-1], cc.scale))
            total = sum(view.sub[a][b] for a, b in mp.pairs)
            total += sum(view.dele[a] for a in mp.deleted) + sum(view.ins[b] for b in mp.inserted)
            yield p, q, mp, total, cc.scale


def _name(t: Tree, x: int) -> str:
    return f"{t.labels[x]}@{x + 1}"


def validate_mapping(m: EditMapping, t1: Tree, t2: Tree) -> str | None:
    """First violated mapping condition, or ``None`` when the mapping is valid."""
    for a, b in m.pairs:
        if not (0 <= a < t1.size and 0 <= b < t2.size):
            return f"pair ({a}, {b}) references a node outside the trees"
    seen1: dict[int, int] = {}
    seen2: dict[int, int] = {}
    for a, b in m.pairs:
        if a in seen1:
            return f"one-to-one violated: {_name(t1, a)} mapped to {_name(t2, seen1[a])} and {_name(t2, b)}"
        if b in seen2:
            return f"one-to-one violated: {_name(t2, b)} mapped from {_name(t1, seen2[b])} and {_name(t1, a)}"
        seen1[a] = b
        seen2[b] = a
    if set(m.deleted) != set(range(t1.size)) - seen1.keys():
        return "deleted nodes are not exactly the unmapped nodes of the first tree"
    if set(m.inserted) != set(range(t2.size)) - seen2.keys():
        return "inserted nodes are not exactly the unmapped nodes of the second tree"
    pairs = sorted(m.pairs)
    for k, (a, b) in enumerate(pairs):
        for c, d in pairs[k + 1:]:
            shown = f"({_name(t1, a)} -> {_name(t2, b)}) and ({_name(t1, c)} -> {_name(t2, d)})"
            if t1.is_ancestor(a, c) != t2.is_ancestor(b, d) or t1.is_ancestor(c, a) != t2.is_ancestor(d, b):
                return f"ancestor order violated by {shown}"
            if t1.is_left_of(a, c) != t2.is_left_of(b, d) or t1.is_left_of(c, a) != t2.is_left_of(d, b):
                return f"sibling order violated by {shown}"
    return None
