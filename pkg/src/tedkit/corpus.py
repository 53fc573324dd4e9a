"""Tree families used by tests and the bench report."""
from __future__ import annotations

import random
from typing import Iterator, Sequence

from .tree import Tree

__all__ = [
    "FAMILIES",
    "all_shapes",
    "full_binary",
    "labelings",
    "left_comb",
    "make",
    "path",
    "random_path",
    "random_tree",
    "right_comb",
    "star",
]


def _from_parents(parents: Sequence[int], labels: Sequence[str]) -> Tree:
    """Build a tree from a preorder parent list (``parents[0] == -1``)."""
    kids: list[list[int]] = [[] for _ in parents]
    for i, p in enumerate(parents[1:], 1):
        kids[p].append(i)
    return Tree.from_children(labels, kids, root=0)


def path(n: int, label: str = "a") -> Tree:
    return _from_parents([-1] + list(range(n - 1)), [label] * n)


def star(n: int, label: str = "a") -> Tree:
    return _from_parents([-1] + [0] * (n - 1), [label] * n)


def _comb(n: int, spine_left: bool, label: str) -> Tree:
    # spine nodes each carry one leaf; an even n leaves a spine node with a single child
    labels = [label] * n
    kids: list[list[int]] = [[] for _ in range(n)]
    nxt, spine = 1, 0
    while nxt < n:
        if nxt + 1 < n:
            child_spine, leaf = nxt, nxt + 1
            kids[spine] = [child_spine, leaf] if spine_left else [leaf, child_spine]
            spine, nxt = child_spine, nxt + 2
        else:
            kids[spine] = [nxt]
            nxt += 1
    return Tree.from_children(labels, kids, root=0)


def left_comb(n: int, label: str = "a") -> Tree:
    """Spine along leftmost children, one leaf hanging right of each spine node."""
    return _comb(n, True, label)


def right_comb(n: int, label: str = "a") -> Tree:
    return _comb(n, False, label)


def full_binary(n: int, label: str = "a") -> Tree:
    """Complete binary tree on ``n`` nodes (heap layout)."""
    return _from_parents([-1] + [(i - 1) // 2 for i in range(1, n)], [label] * n)


def random_tree(n: int, rng: random.Random, alphabet: str = "abcd") -> Tree:
    """Random recursive tree: node i attaches below a uniformly chosen earlier node."""
    parents = [-1] + [rng.randrange(i) for i in range(1, n)]
    return _from_parents(parents, [rng.choice(alphabet) for _ in range(n)])


def random_path(n: int, rng: random.Random, alphabet: str = "abcd") -> Tree:
    return _from_parents([-1] + list(range(n - 1)), [rng.choice(alphabet) for _ in range(n)])


FAMILIES = {
    "path": path,
    "star": star,
    "left-comb": left_comb,
    "right-comb": right_comb,
    "full-binary": full_binary,
}


def make(family: str, n: int, rng: random.Random | None = None) -> Tree:
    if family == "random":
        return random_tree(n, rng or random.Random(n))
    return FAMILIES[family](n)


def _forests(n: int) -> Iterator[list]:
    """All ordered forests with ``n`` nodes, as nested child lists."""
    if n == 0:
        yield []
        return
    for first in range(1, n + 1):
        for inner in _forests(first - 1):
            for rest in _forests(n - first):
                yield [inner] + rest


def all_shapes(max_nodes: int) -> list[Tree]:
    """Every ordered unlabeled tree shape with 1..max_nodes nodes (label ``a``)."""
    out = []

    def build(kids) -> tuple:
        return ("a", [build(k) for k in kids])

    for n in range(1, max_nodes + 1):
        for forest in _forests(n - 1):
            out.append(Tree.from_nested(build(forest)))
    return out


def labelings(shape: Tree, alphabet: str = "ab") -> Iterator[Tree]:
    """All relabelings of ``shape`` over ``alphabet``."""
    n = shape.size
    for code in range(len(alphabet) ** n):
        labels = []
        for _ in range(n):
            code, r = divmod(code, len(alphabet))
            labels.append(alphabet[r])
        yield Tree.from_children(labels, shape.children, root=shape.root)
