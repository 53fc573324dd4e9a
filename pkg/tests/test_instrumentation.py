import math

from tedkit.corpus import full_binary, left_comb, path, random_tree, star
from tedkit.instrumentation import (
    BoundCheck,
    check_collapsed_depths,
    check_engine_steps,
    check_halving,
    step_bound,
)
from tedkit.tree import parse_tree


def by_name(checks):
    return {c.name: c for c in checks}


def test_collapsed_depth_examples():
    c = by_name(check_collapsed_depths(path(100)))
    assert (c["lr-collapsed-depth"].observed, c["lr-collapsed-depth"].bound) == (1, 1)
    c = by_name(check_collapsed_depths(star(100)))
    assert (c["lr-collapsed-depth"].observed, c["lr-collapsed-depth"].bound) == (1, 2)
    c = by_name(check_collapsed_depths(full_binary(1023)))
    assert c["h-collapsed-depth"].passed and c["h-collapsed-depth"].bound == math.log2(1023)


def test_halving(rng):
    for t in (path(30), star(30), full_binary(511), random_tree(512, rng)):
        assert all(c.passed for c in check_halving(t))


def test_bound_check_pass_rule():
    assert BoundCheck("x", 3, 3).passed and not BoundCheck("x", 4, 3.5).passed


def test_engine_steps_small_and_run():
    a = parse_tree("{a}")
    checks = check_engine_steps(a, a, run=True)
    assert [c.observed for c in checks] == [1, 1, 1] and all(c.passed for c in checks)


def test_engine_steps_examples():
    t = full_binary(255)
    zs = check_engine_steps(t, t, engines=("zs",))[0]
    assert zs.bound == 4 * 255 * 255 * 8 * 8 and zs.passed
    dem = check_engine_steps(left_comb(16), left_comb(1024), engines=("demaine",))[0]
    assert dem.bound == step_bound("demaine", left_comb(16), left_comb(1024)) == 8 * 16 * 16 * 1024 * 7
    assert dem.passed


def test_counts_are_deterministic(rng):
    t1, t2 = random_tree(40, rng), random_tree(50, rng)
    first = [c.observed for c in check_engine_steps(t1, t2)]
    assert first == [c.observed for c in check_engine_steps(t1, t2, run=True)]
