"""Ordered labeled trees stored as flat arrays.

Node ids are 0-based left-to-right postorder positions, so the subtree of
node ``i`` is the contiguous id range ``lml[i] .. i``.  The public
``lr_post``/``rl_post`` numbers on :class:`Node` are 1-based.  The root has
depth 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

__all__ = [
    "Node",
    "ParseError",
    "StructuralIndex",
    "Tree",
    "collapsed_depths",
    "compute_postorders",
    "heavy_structure",
    "lr_keyroots",
    "parse_tree",
    "serialize_tree",
]

_SPECIAL = "{}\\"


class ParseError(ValueError):
    """Malformed bracket notation; ``offset`` is the byte offset of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Node:
    id: int
    label: str
    parent: int | None
    children: tuple[int, ...]
    lr_post: int
    rl_post: int
    leftmost_leaf: int
    rightmost_leaf: int
    subtree_size: int
    depth: int


@dataclass(frozen=True)
class StructuralIndex:
    """Keyroot sets, heavy children and collapsed depths of one tree.

    ``lr_keyroots`` is ascending in LR-postorder, ``rl_keyroots`` ascending in
    RL-postorder and ``h_keyroots`` ascending in H-postorder, i.e. each list
    is already in the processing order of its decomposition scheme.
    """

    lr_keyroots: tuple[int, ...]
    rl_keyroots: tuple[int, ...]
    h_keyroots: tuple[int, ...]
    heavy_child: tuple[int | None, ...]
    lr_collapsed_depth: tuple[int, ...]
    h_collapsed_depth: tuple[int, ...]


class Tree:
    """Immutable ordered labeled tree.

    Build one with :func:`parse_tree`, :meth:`from_nested` or
    :meth:`from_children`.
    """

    def __init__(self, labels: Sequence[str], children: Sequence[Sequence[int]], root: int = 0):
        n = len(labels)
        if n == 0:
            raise ValueError("a tree needs at least one node")
        if len(children) != n:
            raise ValueError("labels and children differ in length")
        # iterative LR postorder over the caller's ids
        order: list[int] = []
        stack = [(root, 0)]
        seen = 0
        while stack:
            v, k = stack.pop()
            kids = children[v]
            if k < len(kids):
                stack.append((v, k + 1))
                stack.append((kids[k], 0))
            else:
                order.append(v)
                seen += 1
        if seen != n:
            raise ValueError("children lists do not describe a single rooted tree")
        new_id = {old: i for i, old in enumerate(order)}
        if len(new_id) != n:
            raise ValueError("a node is reachable twice")

        self.size = n
        self.root = n - 1
        self.labels: tuple[str, ...] = tuple(str(labels[old]) for old in order)
        self.children: tuple[tuple[int, ...], ...] = tuple(
            tuple(new_id[c] for c in children[old]) for old in order
        )
        parent = [-1] * n
        for v, kids in enumerate(self.children):
            for c in kids:
                parent[c] = v
        self.parent: tuple[int, ...] = tuple(parent)

        lml = list(range(n))
        rml = list(range(n))
        sizes = [1] * n
        for v in range(n):
            kids = self.children[v]
            if kids:
                lml[v] = lml[kids[0]]
                rml[v] = rml[kids[-1]]
                sizes[v] = 1 + sum(sizes[c] for c in kids)
        self.lml = tuple(lml)
        self.rml = tuple(rml)
        self.sizes = tuple(sizes)

        depth = [1] * n
        for v in range(n - 1, -1, -1):
            if parent[v] >= 0:
                depth[v] = depth[parent[v]] + 1
        self.depths = tuple(depth)

        # RL postorder and LR preorder
        rl_order: list[int] = []
        pre_order: list[int] = []
        stack2 = [(self.root, 0)]
        while stack2:
            v, k = stack2.pop()
            kids = self.children[v]
            if k == 0:
                pre_order.append(v)
            if k < len(kids):
                stack2.append((v, k + 1))
                stack2.append((kids[len(kids) - 1 - k], 0))
            else:
                rl_order.append(v)
        # stack2 pushes children right-to-left, so pre_order above is RL preorder
        rl = [0] * n
        for i, v in enumerate(rl_order):
            rl[v] = i
        self.rl = tuple(rl)
        self.rl_inv = tuple(rl_order)
        self.rl_preorder = tuple(pre_order)
        lr_pre: list[int] = []
        stack3 = [self.root]
        while stack3:
            v = stack3.pop()
            lr_pre.append(v)
            stack3.extend(reversed(self.children[v]))
        self.preorder = tuple(lr_pre)

    # -- construction helpers -------------------------------------------
    @classmethod
    def from_nested(cls, nested) -> "Tree":
        """Build from ``(label, [child, ...])`` tuples; a bare label is a leaf."""
        labels: list[str] = []
        children: list[list[int]] = []
        stack = [(nested, -1)]
        while stack:
            item, par = stack.pop()
            if isinstance(item, tuple):
                label, kids = item
            else:
                label, kids = item, ()
            idx = len(labels)
            labels.append(str(label))
            children.append([])
            if par >= 0:
                children[par].append(idx)
            for kid in reversed(list(kids)):
                stack.append((kid, idx))
        return cls(labels, children, 0)

    @classmethod
    def from_children(cls, labels: Sequence[str], children: Sequence[Sequence[int]], root: int = 0) -> "Tree":
        return cls(labels, children, root)

    def to_nested(self, v: int | None = None):
        v = self.root if v is None else v
        return (self.labels[v], [self.to_nested(c) for c in self.children[v]])

    # -- basic queries ----------------------------------------------------
    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self.labels == other.labels and self.children == other.children

    def __hash__(self) -> int:
        return hash((self.labels, self.children))

    def __repr__(self) -> str:
        text = serialize_tree(self)
        if len(text) > 60:
            text = text[:57] + "..."
        return f"Tree({text!r})"

    def node(self, i: int) -> Node:
        p = self.parent[i]
        return Node(
            id=i,
            label=self.labels[i],
            parent=None if p < 0 else p,
            children=self.children[i],
            lr_post=i + 1,
            rl_post=self.rl[i] + 1,
            leftmost_leaf=self.lml[i],
            rightmost_leaf=self.rml[i],
            subtree_size=self.sizes[i],
            depth=self.depths[i],
        )

    @property
    def nodes(self) -> list[Node]:
        return [self.node(i) for i in range(self.size)]

    def is_ancestor(self, a: int, b: int) -> bool:
        """True if ``a`` is a strict ancestor of ``b``."""
        return self.lml[a] <= b < a

    def is_left_of(self, a: int, b: int) -> bool:
        """True if ``a`` lies entirely to the left of ``b`` (no ancestry)."""
        return a < self.lml[b]

    def subtree(self, v: int) -> range:
        return range(self.lml[v], v + 1)

    @cached_property
    def height(self) -> int:
        return max(self.depths)

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.size) if not self.children[v])

    def mirror(self) -> "Tree":
        """The tree with every child list reversed.

        Node ``v`` of ``self`` becomes node ``self.rl[v]`` of the mirror.
        """
        children = [tuple(reversed(c)) for c in self.children]
        return Tree(self.labels, children, self.root)

    # -- structural indices ----------------------------------------------
    @cached_property
    def heavy_child(self) -> tuple[int | None, ...]:
        out: list[int | None] = [None] * self.size
        for v, kids in enumerate(self.children):
            best = None
            for c in kids:
                # strict '>' keeps the leftmost among equal-sized children
                if best is None or self.sizes[c] > self.sizes[best]:
                    best = c
            out[v] = best
        return tuple(out)

    def heavy_path(self, v: int | None = None) -> list[int]:
        v = self.root if v is None else v
        path = [v]
        hc = self.heavy_child
        while hc[path[-1]] is not None:
            path.append(hc[path[-1]])
        return path

    def leftmost_path(self, v: int | None = None) -> list[int]:
        v = self.root if v is None else v
        path = [v]
        while self.children[path[-1]]:
            path.append(self.children[path[-1]][0])
        return path

    def rightmost_path(self, v: int | None = None) -> list[int]:
        v = self.root if v is None else v
        path = [v]
        while self.children[path[-1]]:
            path.append(self.children[path[-1]][-1])
        return path

    def h_postorder(self, v: int | None = None) -> list[tuple[int, str]]:
        """Nodes of ``T[v]`` in H-postorder, each tagged with the side it joins.

        Tags: ``"P"`` for heavy-path nodes, ``"R"`` for nodes right of the
        path (visited in LR postorder) and ``"L"`` for nodes left of it
        (visited in RL postorder).
        """
        path = self.heavy_path(v)
        out = [(path[-1], "P")]
        for i in range(len(path) - 2, -1, -1):
            p, h = path[i], path[i + 1]
            kids = self.children[p]
            pos = kids.index(h)
            for s in kids[pos + 1:]:
                out.extend((x, "R") for x in range(self.lml[s], s + 1))
            for s in reversed(kids[:pos]):
                lo = self.rl[self.rml[s]]
                out.extend((self.rl_inv[r], "L") for r in range(lo, self.rl[s] + 1))
            out.append((p, "P"))
        return out

    @cached_property
    def h_post(self) -> tuple[int, ...]:
        """H-postorder number (0-based) of every node of the whole tree."""
        num = [0] * self.size
        for i, (x, _) in enumerate(self.h_postorder()):
            num[x] = i
        return tuple(num)

    @cached_property
    def index(self) -> StructuralIndex:
        n = self.size
        lr_kr = [v for v in range(n) if v == self.root or self.children[self.parent[v]][0] != v]
        rl_kr = sorted(
            (v for v in range(n) if v == self.root or self.children[self.parent[v]][-1] != v),
            key=lambda v: self.rl[v],
        )
        hc = self.heavy_child
        h_kr = sorted(
            (v for v in range(n) if v == self.root or hc[self.parent[v]] != v),
            key=lambda v: self.h_post[v],
        )
        lr_set = set(lr_kr)
        h_set = set(h_kr)
        lr_cd = [0] * n
        h_cd = [0] * n
        for v in range(n - 1, -1, -1):
            p = self.parent[v]
            if p >= 0:
                lr_cd[v] = lr_cd[p] + (p in lr_set)
                h_cd[v] = h_cd[p] + (p in h_set)
        return StructuralIndex(
            lr_keyroots=tuple(lr_kr),
            rl_keyroots=tuple(rl_kr),
            h_keyroots=tuple(h_kr),
            heavy_child=hc,
            lr_collapsed_depth=tuple(lr_cd),
            h_collapsed_depth=tuple(h_cd),
        )

    def keyroot_subtrees(self, kind: str, v: int | None = None) -> list[int]:
        """Keyroots of the subtree ``T[v]`` (taken relative to ``T[v]``) in processing order.

        ``kind`` is ``"lr"``, ``"rl"`` or ``"h"``.
        """
        v = self.root if v is None else v
        members = range(self.lml[v], v + 1)
        if kind == "lr":
            return [x for x in members if x == v or self.children[self.parent[x]][0] != x]
        if kind == "rl":
            ks = [x for x in members if x == v or self.children[self.parent[x]][-1] != x]
            return sorted(ks, key=lambda x: self.rl[x])
        if kind == "h":
            hc = self.heavy_child
            ks = [x for x in members if x == v or hc[self.parent[x]] != x]
            return sorted(ks, key=lambda x: self.h_post[x])
        raise ValueError(f"unknown keyroot kind {kind!r}")

    # -- sums used by the step counters -----------------------------------
    @cached_property
    def _lml_prefix(self) -> tuple[int, ...]:
        acc = [0]
        for v in range(self.size):
            acc.append(acc[-1] + self.lml[v])
        return tuple(acc)

    @cached_property
    def _rml_prefix(self) -> tuple[int, ...]:
        # prefix sums over RL ids of the RL id of each node's rightmost leaf
        acc = [0]
        for r in range(self.size):
            acc.append(acc[-1] + self.rl[self.rml[self.rl_inv[r]]])
        return tuple(acc)

    def relevant_forest_count(self, v: int) -> int:
        """Number of relevant subforests of ``T[v]`` under full decomposition."""
        lo = self.lml[v]
        s = self.sizes[v]
        return self._lml_prefix[v + 1] - self._lml_prefix[lo] - (lo - 1) * s

    @cached_property
    def keyroot_size_sums(self) -> dict[str, tuple[int, ...]]:
        """Per node v, the sum of |T[k]| over keyroots k of T[v] (relative to T[v])."""
        n = self.size
        hc = self.heavy_child
        out = {}
        for kind in ("lr", "rl", "h"):
            acc = [0] * n
            for v in range(n):
                total = self.sizes[v]
                for pos, c in enumerate(self.children[v]):
                    inner = acc[c] - self.sizes[c]
                    if kind == "lr":
                        light = pos != 0
                    elif kind == "rl":
                        light = pos != len(self.children[v]) - 1
                    else:
                        light = c != hc[v]
                    total += inner + (self.sizes[c] if light else 0)
                acc[v] = total
            out[kind] = tuple(acc)
        return out


# -- bracket notation -------------------------------------------------------

def parse_tree(text: str) -> Tree:
    """Parse ``{label{child}...}`` notation; surrounding whitespace is ignored."""
    raw = text.encode("utf-8")
    # report byte offsets, scan characters
    offsets = []
    pos = 0
    for ch in text:
        offsets.append(pos)
        pos += len(ch.encode("utf-8"))
    offsets.append(pos)

    n = len(text)
    i = 0
    while i < n and text[i].isspace():
        i += 1
    if i >= n:
        raise ParseError("empty input", offsets[i] if i < len(offsets) else len(raw))
    labels: list[str] = []
    children: list[list[int]] = []
    stack: list[int] = []
    finished = False
    while i < n:
        ch = text[i]
        if finished:
            if ch.isspace():
                i += 1
                continue
            raise ParseError("trailing garbage", offsets[i])
        if ch != "{":
            raise ParseError(f"expected '{{', found {ch!r}", offsets[i])
        start = i
        i += 1
        buf = []
        while i < n and text[i] not in "{}":
            if text[i] == "\\":
                if i + 1 >= n:
                    raise ParseError("dangling escape", offsets[i])
                buf.append(text[i + 1])
                i += 2
            else:
                buf.append(text[i])
                i += 1
        if not buf:
            raise ParseError("empty label", offsets[start])
        idx = len(labels)
        labels.append("".join(buf))
        children.append([])
        if stack:
            children[stack[-1]].append(idx)
        stack.append(idx)
        # close as many nodes as there are '}'
        while i < n and text[i] == "}":
            stack.pop()
            i += 1
            if not stack:
                finished = True
                break
        if i < n and not finished and text[i] != "{":
            raise ParseError(f"unexpected {text[i]!r}", offsets[i])
    if not finished:
        raise ParseError("unbalanced brackets", offsets[n])
    return Tree(labels, children, 0)


def _escape(label: str) -> str:
    return "".join("\\" + c if c in _SPECIAL else c for c in label)


def serialize_tree(t: Tree, v: int | None = None) -> str:
    v = t.root if v is None else v
    parts: list[str] = []
    stack: list[tuple[int, bool]] = [(v, False)]
    while stack:
        x, closing = stack.pop()
        if closing:
            parts.append("}")
            continue
        parts.append("{" + _escape(t.labels[x]))
        stack.append((x, True))
        for c in reversed(t.children[x]):
            stack.append((c, False))
    return "".join(parts)


# -- operation-style accessors ---------------------------------------------

def compute_postorders(t: Tree) -> Tree:
    """Postorders are fixed at construction; kept for API symmetry."""
    return t


def lr_keyroots(t: Tree) -> list[int]:
    return list(t.index.lr_keyroots)


def heavy_structure(t: Tree) -> StructuralIndex:
    return t.index


def collapsed_depths(t: Tree, idx: StructuralIndex | None = None) -> dict[str, int]:
    """Tree-level LR and H collapsed depths (max over nodes)."""
    idx = t.index if idx is None else idx
    return {"lr": max(idx.lr_collapsed_depth), "h": max(idx.h_collapsed_depth)}


def leaf_count(t: Tree) -> int:
    return len(t.leaves)


def log2_size(t: Tree) -> float:
    return math.log2(t.size)


def iter_root_to_leaf_paths(t: Tree) -> Iterable[list[int]]:
    for leaf in t.leaves:
        path = [leaf]
        while t.parent[path[-1]] >= 0:
            path.append(t.parent[path[-1]])
        path.reverse()
        yield path
