import numpy as np
import pytest

from tedkit.corpus import all_shapes, labelings, random_path, random_tree
from tedkit.costs import builtin_paper, builtin_unit
from tedkit.engines import ted_batch, ted_zhang_shasha
from tedkit.oracle import (
    SizeGuardError,
    brute_force_batch,
    brute_force_distance,
    compatible,
    string_edit_distance,
    valid_mappings,
)
from tedkit.tree import parse_tree


def test_small_examples(fig6):
    a, b = parse_tree("{a}"), parse_tree("{b}")
    assert brute_force_distance(a, a, builtin_unit()) == 0
    assert brute_force_distance(a, b, builtin_unit()) == 1
    assert brute_force_distance(*fig6, builtin_paper()) == 5


def test_string_distance():
    u = builtin_unit()
    assert string_edit_distance("", "abc", u) == 3
    assert string_edit_distance("abc", "abc", u) == 0
    assert string_edit_distance("abc", "adc", u) == 1


def test_size_guard(monkeypatch):
    big = parse_tree("{a" + "{a}" * 10 + "}")
    with pytest.raises(SizeGuardError):
        brute_force_distance(big, parse_tree("{a}"), builtin_unit())
    monkeypatch.setenv("TEDKIT_SIZE_GUARD", "12")
    assert brute_force_distance(big, parse_tree("{a}"), builtin_unit()) == 10


def test_crossing_pairs_rejected():
    t1, t2 = parse_tree("{r{a}{b}}"), parse_tree("{r{d}{e}}")
    a, b = 0, 1
    d, e = 0, 1
    assert not compatible(t1, t2, (a, e), (b, d))
    assert compatible(t1, t2, (a, d), (b, e))
    for mp in valid_mappings(t1, t2):
        assert {(a, e), (b, d)} - set(mp)


def test_mapping_counts_small():
    # two single nodes: empty mapping or the pair
    assert len(valid_mappings(parse_tree("{a}"), parse_tree("{b}"))) == 2
    # two-node paths: the empty mapping, 4 single pairs, and only the ancestry-preserving full pairing
    assert len(valid_mappings(parse_tree("{a{b}}"), parse_tree("{a{b}}"))) == 6


def test_oracle_on_paths_matches_strings(rng):
    for _ in range(30):
        p1, p2 = random_path(rng.randint(1, 7), rng), random_path(rng.randint(1, 7), rng)
        s1 = [p1.labels[x] for x in reversed(range(p1.size))]
        s2 = [p2.labels[x] for x in reversed(range(p2.size))]
        for cost in (builtin_unit(), builtin_paper()):
            assert brute_force_distance(p1, p2, cost) == string_edit_distance(s1, s2, cost)


def test_random_pairs_up_to_nine(rng):
    for _ in range(40):
        t1, t2 = random_tree(rng.randint(1, 9), rng, "abc"), random_tree(rng.randint(1, 9), rng, "abc")
        assert brute_force_distance(t1, t2, builtin_unit()) == ted_zhang_shasha(t1, t2, builtin_unit()).distance


def test_batch_matches_single_pairs(rng):
    shapes = all_shapes(4)
    s1, s2 = shapes[-1], shapes[5]
    l1 = [t.labels for t in labelings(s1)]
    l2 = [t.labels for t in labelings(s2)]
    ref, scale = brute_force_batch(s1, s2, l1, l2, builtin_paper())
    got, scale2 = ted_batch(s1, s2, l1, l2, builtin_paper(), "klein")
    assert scale == scale2 and np.array_equal(ref, got)
    trees1, trees2 = list(labelings(s1)), list(labelings(s2))
    for _ in range(20):
        p, q = rng.randrange(len(l1)), rng.randrange(len(l2))
        assert ref[p, q] == brute_force_distance(trees1[p], trees2[q], builtin_paper()) * scale
