"""Tree edit distance engines built on the forest-distance recurrence.

Every engine is a schedule of *sweeps*.  A sweep pairs a driver family of
forests from one tree with a family from the other tree and fills one
forest-distance row per driver forest, relaxing each (forest, forest) pair
exactly once.  Tree-to-tree distances found on the way go into the single
``m x n`` subtree table; rows are dropped as soon as no later driver forest
refers to them.

Costs are scaled to integers (see :class:`~tedkit.costs.CompiledCosts`), so
all arithmetic is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .costs import CompiledCosts, CostModel
from .enumeration import (
    LEFT,
    RIGHT,
    EnumerationSequence,
    Family,
    Scheme,
    SequencingError,
    Subforest,
    delete_root,
    delete_tree,
    full_family,
    full_family_sp,
    h_family,
    lr_family,
    rl_family,
)
from .tree import Tree

__all__ = [
    "ENGINES",
    "DistanceTables",
    "ForestTable",
    "LEFTMOST",
    "RIGHTMOST",
    "HEAVY",
    "distance",
    "forest_distance",
    "reference_tables",
    "run_decomposition",
    "ted_batch",
    "ted_demaine",
    "ted_klein",
    "ted_naive",
    "ted_zhang_shasha",
]

LEFTMOST = "LEFTMOST"
RIGHTMOST = "RIGHTMOST"
HEAVY = "HEAVY"


@dataclass
class DistanceTables:
    """Result of an engine run.

    ``scaled[i][j]`` is ``d(T1[i], T2[j])`` times ``scale``.  ``steps`` counts
    relaxations (one three-way minimum each); ``base_steps`` counts the
    empty-forest row and column entries filled separately.
    """

    t1: Tree
    t2: Tree
    scale: int
    scaled: list[list[int]]
    engine: str
    steps: int = 0
    base_steps: int = 0
    sweeps: int = 0
    peak_rows: int = 0
    peak_forest_entries: int = 0
    forest_table: list[list[Fraction]] | None = None

    @property
    def distance(self) -> Fraction:
        return Fraction(self.scaled[self.t1.root][self.t2.root], self.scale)

    def get(self, i: int, j: int) -> Fraction:
        return Fraction(self.scaled[i][j], self.scale)

    @property
    def subtree(self) -> list[list[Fraction]]:
        return [[Fraction(v, self.scale) for v in row] for row in self.scaled]


def _last_use(fam: Family) -> list[int]:
    cached = fam.__dict__.get("_last_use")
    if cached is not None:
        return cached
    last = [-1] * fam.size
    for b in range(fam.size):
        s = fam.sides[b]
        for j in (fam.dele[s][b], fam.cut[s][b]):
            if j >= 0:
                last[j] = b
    fam.__dict__["_last_use"] = last
    return last


class _Run:
    """Owns the subtree table and counters of one engine invocation."""

    def __init__(self, t1: Tree, t2: Tree, cc: CompiledCosts, engine: str):
        self.t1, self.t2, self.cc = t1, t2, cc
        self.D = [[0] * t2.size for _ in range(t1.size)]
        self._sub_t: list[list[int]] | None = None
        self.result = DistanceTables(t1, t2, cc.scale, self.D, engine)

    @property
    def sub_t(self) -> list[list[int]]:
        if self._sub_t is None:
            m, n = self.t1.size, self.t2.size
            self._sub_t = [[self.cc.sub[i][j] for i in range(m)] for j in range(n)]
        return self._sub_t

    def sweep(self, P: Family, p_first: bool, Q: Family, keep: bool = False) -> dict | None:
        """Relax every (P forest, Q forest) pair; ``p_first`` says P lies in T1."""
        if self.cc.vector:
            return self._sweep_vector(P, p_first, Q)
        cc, D, res = self.cc, self.D, self.result
        nq = Q.size
        if p_first:
            cD, cO, S = cc.dele, cc.ins, cc.sub
        else:
            cD, cO, S = cc.ins, cc.dele, self.sub_t
        side0 = RIGHT if Q.root[RIGHT] is not None else LEFT
        qr0, qd0 = Q.root[side0], Q.dele[side0]
        base = [0] * (nq + 1)
        for a in range(nq):
            base[a] = base[qd0[a]] + cO[qr0[a]]
        rows: dict[int, list[int]] = {-1: base}
        last = _last_use(P)
        qtree = Q.is_tree
        peak = 1
        for b in range(P.size):
            s = P.sides[b]
            x = P.root[s][b]
            rd = rows[P.dele[s][b]]
            rc = rows[P.cut[s][b]]
            qr, qd, qc = Q.root[s], Q.dele[s], Q.cut[s]
            if qr is None:
                raise SequencingError("driver side not served by the other family")
            cur = [0] * (nq + 1)
            cDx = cD[x]
            cur[nq] = rd[nq] + cDx
            Sx = S[x]
            if p_first:
                Dx = D[x]
                if P.is_tree[b]:
                    for a in range(nq):
                        y = qr[a]
                        ad = qd[a]
                        v = rd[a] + cDx
                        w = cur[ad] + cO[y]
                        if w < v:
                            v = w
                        if qtree[a]:
                            w = rd[ad] + Sx[y]
                            if w < v:
                                v = w
                            Dx[y] = v
                        else:
                            w = rc[qc[a]] + Dx[y]
                            if w < v:
                                v = w
                        cur[a] = v
                else:
                    for a in range(nq):
                        y = qr[a]
                        v = rd[a] + cDx
                        w = cur[qd[a]] + cO[y]
                        if w < v:
                            v = w
                        w = rc[qc[a]] + Dx[y]
                        if w < v:
                            v = w
                        cur[a] = v
            else:
                if P.is_tree[b]:
                    for a in range(nq):
                        y = qr[a]
                        ad = qd[a]
                        v = rd[a] + cDx
                        w = cur[ad] + cO[y]
                        if w < v:
                            v = w
                        if qtree[a]:
                            w = rd[ad] + Sx[y]
                            if w < v:
                                v = w
                            D[y][x] = v
                        else:
                            w = rc[qc[a]] + D[y][x]
                            if w < v:
                                v = w
                        cur[a] = v
                else:
                    for a in range(nq):
                        y = qr[a]
                        v = rd[a] + cDx
                        w = cur[qd[a]] + cO[y]
                        if w < v:
                            v = w
                        w = rc[qc[a]] + D[y][x]
                        if w < v:
                            v = w
                        cur[a] = v
            rows[b] = cur
            if len(rows) > peak:
                peak = len(rows)
            if not keep:
                for j in (P.dele[s][b], P.cut[s][b]):
                    if j >= 0 and last[j] == b:
                        rows.pop(j, None)
                if last[b] < 0:
                    rows.pop(b, None)
        res.steps += P.size * nq
        res.base_steps += nq + 1 + P.size
        res.sweeps += 1
        if peak > res.peak_rows:
            res.peak_rows = peak
        if peak * (nq + 1) > res.peak_forest_entries:
            res.peak_forest_entries = peak * (nq + 1)
        return rows if keep else None


    def _sweep_vector(self, P: Family, p_first: bool, Q: Family) -> None:
        """Same relaxations as :meth:`sweep`, on numpy cells of a batched cost table."""
        import numpy as np

        cc, D, res = self.cc, self.D, self.result
        nq = Q.size
        if p_first:
            cD, cO, S = cc.dele, cc.ins, cc.sub
        else:
            cD, cO, S = cc.ins, cc.dele, self.sub_t
        side0 = RIGHT if Q.root[RIGHT] is not None else LEFT
        base: list = [0] * (nq + 1)
        for a in range(nq):
            base[a] = base[Q.dele[side0][a]] + cO[Q.root[side0][a]]
        rows = {-1: base}
        for b in range(P.size):
            s = P.sides[b]
            x = P.root[s][b]
            rd, rc = rows[P.dele[s][b]], rows[P.cut[s][b]]
            qr, qd, qc = Q.root[s], Q.dele[s], Q.cut[s]
            cur: list = [0] * (nq + 1)
            cur[nq] = rd[nq] + cD[x]
            for a in range(nq):
                y, ad = qr[a], qd[a]
                v = np.minimum(rd[a] + cD[x], cur[ad] + cO[y])
                i, j = (x, y) if p_first else (y, x)
                if P.is_tree[b] and Q.is_tree[a]:
                    v = np.minimum(v, rd[ad] + S[x][y])
                    D[i][j] = v
                else:
                    v = np.minimum(v, rc[qc[a]] + D[i][j])
                cur[a] = v
            rows[b] = cur
        res.steps += P.size * nq
        res.base_steps += nq + 1 + P.size
        res.sweeps += 1


def _forest_matrix(rows: dict, P: Family, Q: Family, scale: int) -> list[list[Fraction]]:
    nq = Q.size
    out = []
    for b in range(-1, P.size):
        row = rows[b]
        out.append([Fraction(row[nq], scale)] + [Fraction(v, scale) for v in row[:nq]])
    return out


def _swapped(fn: Callable[[Tree, Tree, CompiledCosts], DistanceTables], t1: Tree, t2: Tree,
             cc: CompiledCosts) -> DistanceTables:
    """Run ``fn`` on (t2, t1) with transposed costs, then transpose the table back."""
    inner = fn(t2, t1, cc.transposed())
    m, n = t1.size, t2.size
    scaled = [[inner.scaled[j][i] for j in range(n)] for i in range(m)]
    out = DistanceTables(t1, t2, inner.scale, scaled, inner.engine, inner.steps, inner.base_steps,
                         inner.sweeps, inner.peak_rows, inner.peak_forest_entries)
    return out


def _compile(t1: Tree, t2: Tree, cost) -> CompiledCosts:
    if isinstance(cost, CompiledCosts):
        return cost
    return CostModel.compile(cost, t1, t2)


# -- engines -----------------------------------------------------------------

def ted_naive(t1: Tree, t2: Tree, cost, scheme: Scheme | str = Scheme.LR,
              keep_final: bool = False) -> DistanceTables:
    """O(m^2 n^2) engine: every subtree pair gets its own forest sweep.

    ``scheme`` is one of the four non-keyroot orders.  With ``keep_final``
    the LR/RL engines keep the forest table of the root pair, empty row and
    column first.
    """
    scheme = Scheme(scheme)
    cc = _compile(t1, t2, cost)
    run = _Run(t1, t2, cc, f"naive-{scheme.value}")
    if scheme in (Scheme.LR, Scheme.RL):
        if scheme == Scheme.LR:
            order1, order2, fam = range(t1.size), range(t2.size), lr_family
        else:
            order1, order2, fam = t1.rl_inv, t2.rl_inv, rl_family
        for i in order1:
            P = fam(t1, i)
            for j in order2:
                Q = fam(t2, j)
                last = keep_final and not cc.vector and i == t1.root and j == t2.root
                rows = run.sweep(P, True, Q, keep=last)
                if last:
                    run.result.forest_table = _forest_matrix(rows, P, Q, cc.scale)
    elif scheme == Scheme.PREFIX_SUFFIX:
        run.sweep(full_family(t1, t1.root), True, full_family(t2, t2.root))
    elif scheme == Scheme.SUFFIX_PREFIX:
        run.sweep(full_family_sp(t1, t1.root), True, full_family_sp(t2, t2.root))
    else:
        raise ValueError(f"the naive engine does not take the {scheme.value} scheme")
    return run.result


def ted_zhang_shasha(t1: Tree, t2: Tree, cost) -> DistanceTables:
    """LR-keyroot pairs in increasing postorder, one sweep each."""
    cc = _compile(t1, t2, cost)
    run = _Run(t1, t2, cc, "zs")
    for k1 in t1.index.lr_keyroots:
        P = lr_family(t1, k1)
        for k2 in t2.index.lr_keyroots:
            run.sweep(P, True, lr_family(t2, k2))
    return run.result


def _klein(t1: Tree, t2: Tree, cc: CompiledCosts) -> DistanceTables:
    run = _Run(t1, t2, cc, "klein")
    Q = full_family(t1, t1.root)
    for k in t2.index.h_keyroots:
        run.sweep(h_family(t2, k), False, Q)
    return run.result


def ted_klein(t1: Tree, t2: Tree, cost) -> DistanceTables:
    """All subforests of the smaller tree against H-keyroot blocks of the larger."""
    cc = _compile(t1, t2, cost)
    if t1.size > t2.size:
        return _swapped(_klein, t1, t2, cc)
    return _klein(t1, t2, cc)


# -- decomposition-driven engines ---------------------------------------------

def _path(t: Tree, kind: str, v: int) -> list[int]:
    if kind == LEFTMOST:
        return t.leftmost_path(v)
    if kind == RIGHTMOST:
        return t.rightmost_path(v)
    return t.heavy_path(v)


def hanging(t: Tree, kind: str, v: int) -> list[int]:
    """Roots of the subtrees attached by one edge to the ``kind`` path of ``T[v]``."""
    store = t.__dict__.setdefault("_hanging", {})
    key = (kind, v)
    out = store.get(key)
    if out is None:
        path = _path(t, kind, v)
        out = []
        for p, nxt in zip(path, path[1:]):
            out.extend(c for c in t.children[p] if c != nxt)
        store[key] = out
    return out


def relevant_keyroots(t: Tree, kind: str, v: int) -> list[int]:
    store = t.__dict__.setdefault("_rel_keyroots", {})
    key = (kind, v)
    out = store.get(key)
    if out is None:
        out = store[key] = t.keyroot_subtrees("lr" if kind == LEFTMOST else "rl", v)
    return out


Decision = tuple[str, int]


def run_decomposition(t1: Tree, t2: Tree, cost, decide: Callable[[int, int], Decision],
                      engine: str = "decomposition") -> DistanceTables:
    """Execute a per-subtree-pair strategy.

    ``decide(v, w)`` returns ``(path_kind, side)``: the path of ``T1[v]``
    (side 1) or ``T2[w]`` (side 2) to decompose along.  Subtrees hanging off
    that path are solved first, then the pair's own sweeps run.
    """
    cc = _compile(t1, t2, cost)
    run = _Run(t1, t2, cc, engine)
    stack = [(t1.root, t2.root, False)]
    while stack:
        v, w, ready = stack.pop()
        kind, side = decide(v, w)
        if not ready:
            stack.append((v, w, True))
            if side == 1:
                stack.extend((c, w, False) for c in reversed(hanging(t1, kind, v)))
            else:
                stack.extend((v, c, False) for c in reversed(hanging(t2, kind, w)))
            continue
        if kind == HEAVY:
            if side == 1:
                run.sweep(h_family(t1, v), True, full_family(t2, w))
            else:
                run.sweep(h_family(t2, w), False, full_family(t1, v))
        else:
            fam = lr_family if kind == LEFTMOST else rl_family
            if side == 1:
                P = fam(t1, v)
                for k in relevant_keyroots(t2, kind, w):
                    run.sweep(P, True, fam(t2, k))
            else:
                P = fam(t2, w)
                for k in relevant_keyroots(t1, kind, v):
                    run.sweep(P, False, fam(t1, k))
    return run.result


def demaine_decision(t1: Tree, t2: Tree) -> Callable[[int, int], Decision]:
    s1, s2 = t1.sizes, t2.sizes

    def decide(v: int, w: int) -> Decision:
        return (HEAVY, 1) if s1[v] > s2[w] else (HEAVY, 2)

    return decide


def ted_demaine(t1: Tree, t2: Tree, cost) -> DistanceTables:
    """Heavy-path decomposition of whichever subtree of the pair is larger."""
    return run_decomposition(t1, t2, cost, demaine_decision(t1, t2), engine="demaine")


# -- reference recurrence on explicit forests ---------------------------------

@dataclass
class ForestTable:
    """Dictionary-backed forest and subtree distances for the reference engine."""

    t1: Tree
    t2: Tree
    cost: CostModel
    forests: dict = field(default_factory=dict)
    subtree: dict = field(default_factory=dict)

    def removal(self, f: Subforest, first: bool) -> Fraction:
        from .enumeration import forest_nodes

        t = self.t1 if first else self.t2
        if first:
            return sum((self.cost.delete(t.labels[x]) for x in forest_nodes(t, f)), Fraction(0))
        return sum((self.cost.ins(t.labels[x]) for x in forest_nodes(t, f)), Fraction(0))

    def lookup(self, F: Subforest, G: Subforest) -> Fraction:
        if F.is_empty:
            return self.removal(G, False)
        if G.is_empty:
            return self.removal(F, True)
        try:
            return self.forests[(F, G)]
        except KeyError:
            raise SequencingError(f"d({F}, {G}) requested before it was computed") from None

    def tree_pair(self, i: int, j: int) -> Fraction:
        try:
            return self.subtree[(i, j)]
        except KeyError:
            raise SequencingError(f"d(T1[{i}], T2[{j}]) requested before it was computed") from None


def forest_distance(F: Subforest, G: Subforest, side: int, table: ForestTable) -> Fraction:
    """One relaxation of the forest recurrence, reading predecessors from ``table``.

    ``side`` picks whether the rightmost (``RIGHT``) or leftmost (``LEFT``)
    roots are removed.  Two single trees use the tree recurrence and record
    the result in ``table.subtree``.
    """
    t1, t2, cost = table.t1, table.t2, table.cost
    if F.is_empty or G.is_empty:
        return table.lookup(F, G)
    r1, r2 = F.root(side), G.root(side)
    best = table.lookup(delete_root(t1, F, side), G) + cost.delete(t1.labels[r1])
    best = min(best, table.lookup(F, delete_root(t2, G, side)) + cost.ins(t2.labels[r2]))
    if F.is_tree and G.is_tree:
        third = table.lookup(delete_root(t1, F, side), delete_root(t2, G, side)) + cost.sub(
            t1.labels[r1], t2.labels[r2])
        best = min(best, third)
        table.subtree[(r1, r2)] = best
    else:
        third = table.lookup(delete_tree(t1, F, side), delete_tree(t2, G, side)) + table.tree_pair(r1, r2)
        best = min(best, third)
    table.forests[(F, G)] = best
    return best


def reference_tables(t1: Tree, t2: Tree, cost: CostModel, seq1: EnumerationSequence,
                     seq2: EnumerationSequence, side: int = RIGHT) -> ForestTable:
    """Literal double loop over two enumeration sequences (small inputs only)."""
    table = ForestTable(t1, t2, cost)
    for F in seq1:
        for G in seq2:
            forest_distance(F, G, side, table)
    return table


# -- registry -----------------------------------------------------------------

def _combined(t1, t2, cost):
    from .strategy import ted_combined

    return ted_combined(t1, t2, cost)


ENGINES: dict[str, Callable[..., DistanceTables]] = {
    "naive": ted_naive,
    "zs": ted_zhang_shasha,
    "klein": ted_klein,
    "demaine": ted_demaine,
    "combined": _combined,
}


def ted_batch(shape1: Tree, shape2: Tree, labelings1, labelings2, cost: CostModel,
              engine: str = "demaine", **options):
    """Distances for every pair of relabelings of two fixed shapes.

    Runs the engine's ordinary schedule once with array-valued cells.
    Returns ``(scaled, scale)`` where ``scaled[p, q] / scale`` is the distance
    between ``shape1`` labeled by ``labelings1[p]`` and ``shape2`` labeled by
    ``labelings2[q]``.
    """
    import numpy as np

    cc = CompiledCosts.batch(cost, labelings1, labelings2)
    res = ENGINES[engine](shape1, shape2, cc, **options)
    out = np.broadcast_to(res.scaled[shape1.root][shape2.root], (len(labelings1), len(labelings2)))
    return out, cc.scale


def distance(t1: Tree, t2: Tree, cost, engine: str = "demaine") -> Fraction:
    return ENGINES[engine](t1, t2, cost).distance
