"""Relevant subforests and the orders in which they are enumerated.

A nonempty relevant subforest is identified by its rightmost root ``rm`` and
leftmost root ``lm``: it holds every node ``n`` with ``lr(n) <= lr(rm)`` and
``rl(n) <= rl(lm)``.  Deleting a root or a whole boundary tree from either
side keeps a forest of the same shape, so the pair identifies every forest
the recurrences visit.

Besides the user-facing :class:`EnumerationSequence` builders, this module
produces :class:`Family` objects: integer-linked forest lists that the
engines sweep over.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .tree import Tree

__all__ = [
    "EMPTY",
    "LEFT",
    "RIGHT",
    "EnumerationSequence",
    "Family",
    "Scheme",
    "SequencingError",
    "Subforest",
    "check_prefix_closure",
    "delete_root",
    "delete_tree",
    "enum_h_keyroot",
    "enum_h_postorder",
    "enum_lr",
    "enum_lr_keyroot",
    "enum_prefix_suffix",
    "enum_rl",
    "enum_suffix_prefix",
    "enumerate_scheme",
    "forest_nodes",
    "forest_from_nodes",
]

RIGHT = 0
LEFT = 1


class SequencingError(RuntimeError):
    """A forest needed by a recurrence has not been enumerated yet."""


class Scheme(str, Enum):
    LR = "lr"
    RL = "rl"
    PREFIX_SUFFIX = "prefix-suffix"
    SUFFIX_PREFIX = "suffix-prefix"
    LR_KEYROOT = "lr-keyroot"
    H_KEYROOT = "h-keyroot"


@dataclass(frozen=True)
class Subforest:
    rm: int | None
    lm: int | None

    @property
    def is_empty(self) -> bool:
        return self.rm is None

    @property
    def kind(self) -> str:
        return "EMPTY" if self.rm is None else "NONEMPTY"

    @property
    def is_tree(self) -> bool:
        return self.rm is not None and self.rm == self.lm

    def root(self, side: int) -> int | None:
        return self.rm if side == RIGHT else self.lm


EMPTY = Subforest(None, None)


def _check(t: Tree, f: Subforest) -> None:
    if f.is_empty:
        return
    if f.lm is None or not (f.lm == f.rm or t.is_left_of(f.lm, f.rm)):
        raise ValueError(f"{f} is not a valid subforest")


def forest_nodes(t: Tree, f: Subforest) -> list[int]:
    """Node ids of ``f`` in LR postorder."""
    if f.is_empty:
        return []
    _check(t, f)
    lm, rm = f.lm, f.rm
    return [x for x in range(t.lml[lm], rm + 1) if not t.is_ancestor(x, lm)]


def forest_from_nodes(t: Tree, nodes: Iterable[int]) -> Subforest:
    nodes = list(nodes)
    if not nodes:
        return EMPTY
    return Subforest(rm=max(nodes), lm=max(nodes, key=lambda x: t.rl[x]))


def _max_lr_member(t: Tree, lm: int, c: int) -> int:
    lo = t.lml[lm]
    while c >= lo:
        if not t.is_ancestor(c, lm):
            return c
        c -= 1
    raise SequencingError("walked past the leftmost root")  # pragma: no cover


def _max_rl_member(t: Tree, rm: int, r: int) -> int:
    lo = t.rl[t.rml[rm]]
    while r >= lo:
        x = t.rl_inv[r]
        if not t.is_ancestor(x, rm):
            return x
        r -= 1
    raise SequencingError("walked past the rightmost root")  # pragma: no cover


def delete_root(t: Tree, f: Subforest, side: int) -> Subforest:
    """``f`` minus its rightmost (``RIGHT``) or leftmost (``LEFT``) root."""
    if f.is_empty:
        raise ValueError("cannot delete from the empty forest")
    lm, rm = f.lm, f.rm
    if lm == rm:
        kids = t.children[rm]
        return Subforest(kids[-1], kids[0]) if kids else EMPTY
    if side == RIGHT:
        return Subforest(_max_lr_member(t, lm, rm - 1), lm)
    return Subforest(rm, _max_rl_member(t, rm, t.rl[lm] - 1))


def delete_tree(t: Tree, f: Subforest, side: int) -> Subforest:
    """``f`` minus the whole tree under its rightmost or leftmost root."""
    if f.is_empty:
        raise ValueError("cannot delete from the empty forest")
    lm, rm = f.lm, f.rm
    if lm == rm:
        return EMPTY
    if side == RIGHT:
        return Subforest(_max_lr_member(t, lm, t.lml[rm] - 1), lm)
    return Subforest(rm, _max_rl_member(t, rm, t.rl[t.rml[lm]] - 1))


def _grow(t: Tree, f: Subforest, x: int, side: int) -> Subforest:
    """Add node ``x`` whose children are exactly the roots on that side of ``f``."""
    if f.is_empty:
        return Subforest(x, x)
    lm, rm = f.lm, f.rm
    if side == RIGHT:
        if t.is_ancestor(x, lm):
            lm = x
        return Subforest(x, lm)
    if t.is_ancestor(x, rm):
        rm = x
    return Subforest(rm, x)


# -- enumeration sequences ----------------------------------------------------

@dataclass(frozen=True)
class EnumerationSequence:
    """Ordered subforests plus the recursion side(s) used for each item."""

    items: tuple[Subforest, ...]
    scheme: Scheme
    sides: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]


def _lr_prefixes(t: Tree, k: int) -> list[Subforest]:
    out = []
    f = EMPTY
    for x in range(t.lml[k], k + 1):
        f = _grow(t, f, x, RIGHT)
        out.append(f)
    return out


def _rl_prefixes(t: Tree, k: int) -> list[Subforest]:
    out = []
    f = EMPTY
    for r in range(t.rl[t.rml[k]], t.rl[k] + 1):
        f = _grow(t, f, t.rl_inv[r], LEFT)
        out.append(f)
    return out


def _full_prefix_suffix(t: Tree, v: int) -> list[Subforest]:
    pos = {x: i for i, x in enumerate(t.preorder)}
    start = pos[v]
    block = t.preorder[start:start + t.sizes[v]]
    out = []
    for j in range(t.lml[v], v + 1):
        out.append(Subforest(j, j))
        left = [x for x in block if x < t.lml[j]]
        out.extend(Subforest(j, x) for x in reversed(left))
    return out


def _full_suffix_prefix(t: Tree, v: int) -> list[Subforest]:
    pos = {x: i for i, x in enumerate(t.rl_preorder)}
    start = pos[v]
    block = t.rl_preorder[start:start + t.sizes[v]]
    lo = t.rl[t.rml[v]]
    out = []
    for r in range(lo, t.rl[v] + 1):
        j = t.rl_inv[r]
        out.append(Subforest(j, j))
        right = [x for x in block if t.rl[x] < t.rl[t.rml[j]]]
        out.extend(Subforest(x, j) for x in reversed(right))
    return out


def _h_forests(t: Tree, k: int) -> tuple[list[Subforest], list[int]]:
    out: list[Subforest] = []
    sides: list[int] = []
    f = EMPTY
    for x, tag in t.h_postorder(k):
        if tag == "P":
            f = Subforest(x, x)
            sides.append(RIGHT)
        elif tag == "R":
            f = _grow(t, f, x, RIGHT)
            sides.append(RIGHT)
        else:
            f = _grow(t, f, x, LEFT)
            sides.append(LEFT)
        out.append(f)
    return out, sides


def enum_lr(t: Tree) -> EnumerationSequence:
    items = [f for i in range(t.size) for f in _lr_prefixes(t, i)]
    return EnumerationSequence(tuple(items), Scheme.LR, ((RIGHT,),) * len(items))


def enum_rl(t: Tree) -> EnumerationSequence:
    items = [f for r in range(t.size) for f in _rl_prefixes(t, t.rl_inv[r])]
    return EnumerationSequence(tuple(items), Scheme.RL, ((LEFT,),) * len(items))


def enum_prefix_suffix(t: Tree) -> EnumerationSequence:
    items = _full_prefix_suffix(t, t.root)
    return EnumerationSequence(tuple(items), Scheme.PREFIX_SUFFIX, ((RIGHT, LEFT),) * len(items))


def enum_suffix_prefix(t: Tree) -> EnumerationSequence:
    items = _full_suffix_prefix(t, t.root)
    return EnumerationSequence(tuple(items), Scheme.SUFFIX_PREFIX, ((RIGHT, LEFT),) * len(items))


def enum_lr_keyroot(t: Tree) -> EnumerationSequence:
    items = [f for k in t.index.lr_keyroots for f in _lr_prefixes(t, k)]
    return EnumerationSequence(tuple(items), Scheme.LR_KEYROOT, ((RIGHT,),) * len(items))


def enum_h_postorder(t: Tree, subtree_root: int | None = None) -> EnumerationSequence:
    k = t.root if subtree_root is None else subtree_root
    items, sides = _h_forests(t, k)
    return EnumerationSequence(tuple(items), Scheme.H_KEYROOT, tuple((s,) for s in sides))


def enum_h_keyroot(t: Tree) -> EnumerationSequence:
    items: list[Subforest] = []
    sides: list[int] = []
    for k in t.index.h_keyroots:
        f, s = _h_forests(t, k)
        items.extend(f)
        sides.extend(s)
    return EnumerationSequence(tuple(items), Scheme.H_KEYROOT, tuple((s,) for s in sides))


_BUILDERS = {
    Scheme.LR: enum_lr,
    Scheme.RL: enum_rl,
    Scheme.PREFIX_SUFFIX: enum_prefix_suffix,
    Scheme.SUFFIX_PREFIX: enum_suffix_prefix,
    Scheme.LR_KEYROOT: enum_lr_keyroot,
    Scheme.H_KEYROOT: enum_h_keyroot,
}


def enumerate_scheme(t: Tree, scheme: Scheme | str) -> EnumerationSequence:
    return _BUILDERS[Scheme(scheme)](t)


def check_prefix_closure(t: Tree, seq: EnumerationSequence) -> str | None:
    """Replay ``seq``; report the first forest whose predecessors come later.

    For each item, both the root deletion and the boundary-tree deletion on
    every recursion side the scheme uses must be empty or already seen.
    """
    seen: set[Subforest] = set()
    for pos, (f, sides) in enumerate(zip(seq.items, seq.sides)):
        for side in sides:
            for op in (delete_root, delete_tree):
                g = op(t, f, side)
                if not g.is_empty and g not in seen:
                    name = "root" if op is delete_root else "tree"
                    where = "right" if side == RIGHT else "left"
                    return f"item {pos} {f}: {where} {name} deletion {g} not enumerated before"
        seen.add(f)
    return None


# -- engine families ---------------------------------------------------------

@dataclass
class Family:
    """Forests of one subtree, linked by integer predecessor indices.

    ``root[s]``, ``dele[s]`` and ``cut[s]`` give, per forest and side ``s``,
    the boundary root, the index after deleting that root and the index
    after deleting its whole tree (``-1`` is the empty forest).  ``sides``
    is the recursion side each forest is reached by when the family drives
    a sweep.  ``root[s]`` is ``None`` for sides the family cannot serve.
    """

    tree: Tree
    top: int
    size: int
    root: list
    dele: list
    cut: list
    is_tree: list[bool]
    sides: list[int]
    forests: list[Subforest] | None = None


def _cached(kind: str):
    """Memoize a family builder on the tree object itself."""

    def wrap(fn):
        def inner(t: Tree, k: int) -> "Family":
            store = t.__dict__.setdefault("_families", {})
            key = (kind, k)
            fam = store.get(key)
            if fam is None:
                fam = store[key] = fn(t, k)
            return fam

        inner.__name__ = fn.__name__
        inner.__doc__ = fn.__doc__
        return inner

    return wrap


def _link(t: Tree, top: int, forests: list[Subforest], sides: list[int], serve: tuple[int, ...]) -> Family:
    index = {f: i for i, f in enumerate(forests)}
    root: list = [None, None]
    dele: list = [None, None]
    cut: list = [None, None]
    for s in serve:
        r_list, d_list, c_list = [], [], []
        for i, f in enumerate(forests):
            r_list.append(f.rm if s == RIGHT else f.lm)
            for op, acc in ((delete_root, d_list), (delete_tree, c_list)):
                g = op(t, f, s)
                j = -1 if g.is_empty else index.get(g)
                if j is None or j >= i:
                    raise SequencingError(f"{g} needed by {f} is not enumerated before it")
                acc.append(j)
        root[s], dele[s], cut[s] = r_list, d_list, c_list
    return Family(
        tree=t, top=top, size=len(forests), root=root, dele=dele, cut=cut,
        is_tree=[f.lm == f.rm for f in forests], sides=sides, forests=forests,
    )


@_cached('lr_family')
def lr_family(t: Tree, k: int) -> Family:
    """LR-postorder prefixes of ``T[k]`` (forests holding its leftmost leaf)."""
    lo = t.lml[k]
    n = k - lo + 1
    roots = list(range(lo, k + 1))
    dele = list(range(-1, n - 1))
    cut = [t.lml[x] - lo - 1 for x in roots]
    is_tree = [t.lml[x] == lo for x in roots]
    return Family(t, k, n, [roots, None], [dele, None], [cut, None], is_tree, [RIGHT] * n)


@_cached('rl_family')
def rl_family(t: Tree, k: int) -> Family:
    """RL-postorder prefixes of ``T[k]`` (forests holding its rightmost leaf)."""
    lo = t.rl[t.rml[k]]
    n = t.rl[k] - lo + 1
    roots = [t.rl_inv[r] for r in range(lo, lo + n)]
    dele = list(range(-1, n - 1))
    cut = [t.rl[t.rml[x]] - lo - 1 for x in roots]
    is_tree = [t.rml[x] == t.rml[k] for x in roots]
    return Family(t, k, n, [None, roots], [None, dele], [None, cut], is_tree, [LEFT] * n)


@_cached('full_family')
def full_family(t: Tree, k: int) -> Family:
    """All relevant subforests of ``T[k]`` in prefix-suffix order, both sides linked."""
    forests = _full_prefix_suffix(t, k)
    return _link(t, k, forests, [RIGHT] * len(forests), (RIGHT, LEFT))


@_cached('full_family_sp')
def full_family_sp(t: Tree, k: int) -> Family:
    """All relevant subforests of ``T[k]`` in suffix-prefix order."""
    forests = _full_suffix_prefix(t, k)
    return _link(t, k, forests, [LEFT] * len(forests), (RIGHT, LEFT))


@_cached('h_family')
def h_family(t: Tree, k: int) -> Family:
    """H-postorder forests of ``T[k]``, each linked on the side it grew from."""
    forests, sides = _h_forests(t, k)
    index = {f: i for i, f in enumerate(forests)}
    n = len(forests)
    root = [[None] * n, [None] * n]
    dele = [[None] * n, [None] * n]
    cut = [[None] * n, [None] * n]
    for i, (f, s) in enumerate(zip(forests, sides)):
        root[s][i] = f.root(s)
        for op, acc in ((delete_root, dele), (delete_tree, cut)):
            g = op(t, f, s)
            j = -1 if g.is_empty else index.get(g)
            if j is None or j >= i:
                raise SequencingError(f"{g} needed by {f} is not enumerated before it")
            acc[s][i] = j
    return Family(t, k, n, root, dele, cut, [f.lm == f.rm for f in forests], sides, forests)
