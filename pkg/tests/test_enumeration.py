import math
from collections import Counter

import pytest

from tedkit.corpus import full_binary, path, random_tree
from tedkit.enumeration import (
    EMPTY,
    EnumerationSequence,
    LEFT,
    RIGHT,
    Scheme,
    Subforest,
    check_prefix_closure,
    delete_root,
    delete_tree,
    enum_h_keyroot,
    enum_h_postorder,
    enum_lr,
    enum_lr_keyroot,
    enum_prefix_suffix,
    enum_rl,
    enum_suffix_prefix,
    enumerate_scheme,
    forest_from_nodes,
    forest_nodes,
    full_family,
    h_family,
    lr_family,
)
from tedkit.tree import parse_tree


def node_sets(t, seq):
    return [sorted(t.labels[x] for x in forest_nodes(t, f)) for f in seq]


def test_lr_small():
    t = parse_tree("{c{a}{b}}")
    assert node_sets(t, enum_lr(t)) == [["a"], ["b"], ["a"], ["a", "b"], ["a", "b", "c"]]
    assert len(enum_lr(parse_tree("{a}"))) == 1


def test_lr_path_length():
    assert len(enum_lr(path(12))) == 12 * 13 // 2


def test_prefix_suffix_example():
    t = parse_tree("{g{d}{e}{f}}")
    assert node_sets(t, enum_prefix_suffix(t)) == [
        ["d"], ["e"], ["d", "e"], ["f"], ["e", "f"], ["d", "e", "f"], ["d", "e", "f", "g"]]


def test_keyroot_examples():
    t = parse_tree("{c{a}{b}}")
    assert node_sets(t, enum_lr_keyroot(t)) == [["b"], ["a"], ["a", "b"], ["a", "b", "c"]]
    g = parse_tree("{g{d}{e}{f}}")
    assert len(enum_lr_keyroot(g)) == 6
    assert node_sets(g, enum_h_keyroot(g)) == [
        ["e"], ["f"], ["d"], ["d", "e"], ["d", "e", "f"], ["d", "e", "f", "g"]]
    assert len(enum_lr_keyroot(path(9))) == len(enum_h_keyroot(path(9))) == 9


def test_h_postorder_grows_right_then_left():
    t = parse_tree("{r{a}{b{x}}{c}}")
    assert node_sets(t, enum_h_postorder(t)) == [
        ["x"], ["b", "x"], ["b", "c", "x"], ["a", "b", "c", "x"], ["a", "b", "c", "r", "x"]]
    assert len(enum_h_postorder(parse_tree("{x}"))) == 1


def test_canonical_round_trip(rng):
    t = random_tree(40, rng)
    for f in enum_prefix_suffix(t):
        assert forest_from_nodes(t, forest_nodes(t, f)) == f
        if not f.is_tree:
            rest = delete_root(t, f, RIGHT)
            assert forest_nodes(t, rest) == [x for x in forest_nodes(t, f) if x != f.rm]
    assert forest_nodes(t, EMPTY) == []


def test_delete_tree_on_both_sides():
    t = parse_tree("{r{a{x}}{b}{c}}")
    f = Subforest(rm=t.labels.index("c"), lm=t.labels.index("a"))
    assert sorted(t.labels[x] for x in forest_nodes(t, delete_tree(t, f, RIGHT))) == ["a", "b", "x"]
    assert sorted(t.labels[x] for x in forest_nodes(t, delete_tree(t, f, LEFT))) == ["b", "c"]
    assert sorted(t.labels[x] for x in forest_nodes(t, delete_root(t, f, LEFT))) == ["b", "c", "x"]


@pytest.mark.parametrize("scheme", list(Scheme))
def test_prefix_closure_random(scheme, rng):
    for _ in range(8):
        t = random_tree(rng.randint(1, 40), rng)
        assert check_prefix_closure(t, enumerate_scheme(t, scheme)) is None


def test_prefix_closure_detects_reordering():
    t = parse_tree("{c{a}{b}}")
    seq = enum_lr(t)
    bad = EnumerationSequence(tuple(reversed(seq.items)), seq.scheme, tuple(reversed(seq.sides)))
    assert check_prefix_closure(t, bad) is not None


def test_length_identities(rng):
    t = random_tree(60, rng)
    n = t.size
    assert len(enum_lr(t)) == sum(t.depths) <= n * min(t.height, n)
    assert len(enum_rl(t)) == len(enum_lr(t))
    assert len(enum_prefix_suffix(t)) == len(enum_suffix_prefix(t)) == t.relevant_forest_count(t.root) <= n * n
    assert len(enum_lr_keyroot(t)) == sum(t.sizes[k] for k in t.index.lr_keyroots)
    assert len(enum_h_keyroot(t)) == sum(t.sizes[k] for k in t.index.h_keyroots)


def test_multiplicities():
    t = full_binary(15)
    counts = Counter(f.rm for f in enum_lr_keyroot(t))
    assert max(counts.values()) <= max(t.index.lr_collapsed_depth) + 1
    per_node = Counter()
    for k in t.index.h_keyroots:
        for x in t.subtree(k):
            per_node[x] += 1
    assert max(per_node.values()) <= 1 + math.log2(15)


def test_families_match_sequences(rng):
    t = random_tree(30, rng)
    fam = full_family(t, t.root)
    assert fam.size == len(enum_prefix_suffix(t))
    assert lr_family(t, t.root).size == t.size
    assert h_family(t, t.root).size == t.size
