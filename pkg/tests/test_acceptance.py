"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Tolerances are exact (rational equality) unless a runtime cap is stated.
"""
import math
import random
import time
from fractions import Fraction
from functools import lru_cache

import numpy as np

from tedkit.corpus import (
    all_shapes,
    full_binary,
    labelings,
    left_comb,
    make,
    path,
    random_path,
    random_tree,
    right_comb,
    star,
)
from tedkit.costs import CostModel, builtin_paper, builtin_unit
from tedkit.engines import ENGINES, reference_tables, ted_batch, ted_naive
from tedkit.enumeration import (
    Scheme,
    Subforest,
    check_prefix_closure,
    enum_h_keyroot,
    enum_lr,
    enum_lr_keyroot,
    enum_prefix_suffix,
    enum_rl,
    enum_suffix_prefix,
    enumerate_scheme,
)
from tedkit.instrumentation import check_collapsed_depths, check_engine_steps, check_halving
from tedkit.mapping import recover_mapping, recover_mappings_batch, validate_mapping
from tedkit.oracle import brute_force_batch, brute_force_distance, string_edit_distance, valid_mappings
from tedkit.strategy import count_steps, plan, ted_combined
from tedkit.tree import parse_tree

ENGINE_NAMES = ("naive", "zs", "klein", "demaine", "combined")
ALPHABET = "abcd"
FIG_TABLE = [[0, 2, 4, 6, 8], [2, 1, 3, 5, 7], [4, 3, 2, 4, 6], [6, 5, 4, 6, 5]]


def fig_pair():
    return parse_tree("{c{a}{b}}"), parse_tree("{g{d}{e}{f}}")


def random_costs(rng: random.Random) -> CostModel:
    def q():
        return Fraction(rng.randint(0, 12), rng.randint(1, 6))

    return CostModel(
        default_sub=q(), default_del=q() + Fraction(1, 7), default_ins=q() + Fraction(1, 5),
        sub_overrides={(a, b): q() for a in ALPHABET for b in ALPHABET if a != b and rng.random() < 0.4},
        del_overrides={a: q() for a in ALPHABET if rng.random() < 0.5},
        ins_overrides={b: q() for b in ALPHABET if rng.random() < 0.5},
    )


@lru_cache(maxsize=None)
def scale_instances():
    rng = random.Random(3)
    out = []
    for _ in range(200):
        t1 = random_tree(rng.randint(10, 80), rng, ALPHABET)
        t2 = random_tree(rng.randint(10, 80), rng, ALPHABET)
        out.append((t1, t2, random_costs(rng)))
    return tuple(out)


@lru_cache(maxsize=None)
def small_shapes():
    shapes = all_shapes(5)
    return shapes, {s: [t.labels for t in labelings(s, "ab")] for s in shapes}


def test_criterion_01_figure_golden(criterion):
    start = time.perf_counter()
    t1, t2 = fig_pair()
    cost = builtin_paper()
    dists = {e: ENGINES[e](t1, t2, cost).distance for e in ENGINE_NAMES}
    for scheme in (Scheme.RL, Scheme.PREFIX_SUFFIX, Scheme.SUFFIX_PREFIX):
        dists[f"naive-{scheme.value}"] = ted_naive(t1, t2, cost, scheme).distance
    dists["oracle"] = brute_force_distance(t1, t2, cost)
    table = ted_naive(t1, t2, cost, keep_final=True).forest_table
    ref = reference_tables(t1, t2, cost, enum_lr(t1), enum_lr(t2))
    minus_g = Subforest(rm=t2.labels.index("f"), lm=t2.labels.index("d"))
    intermediate = ref.forests[(Subforest(t1.root, t1.root), minus_g)]
    elapsed = time.perf_counter() - start
    ok = (all(d == 5 for d in dists.values()) and table == FIG_TABLE and intermediate == 6
          and all(type(v) is Fraction and v.denominator == 1 for row in table for v in row)
          and elapsed < 1.0)
    criterion(1, ok, f"distances={sorted(set(map(str, dists.values())))} table_match={table == FIG_TABLE} "
                     f"d(T1,T2-g)={intermediate} time={elapsed:.3f}s (<1s)")


def test_criterion_02_oracle_exhaustive(criterion):
    start = time.perf_counter()
    shapes, labs = small_shapes()
    pairs = mismatches = 0
    for cost in (builtin_unit(), builtin_paper()):
        for s1 in shapes:
            for s2 in shapes:
                mappings = valid_mappings(s1, s2)
                ref, scale = brute_force_batch(s1, s2, labs[s1], labs[s2], cost, mappings)
                pairs += ref.size
                for engine in ENGINE_NAMES:
                    got, scale2 = ted_batch(s1, s2, labs[s1], labs[s2], cost, engine)
                    mismatches += int(scale != scale2) + int(np.count_nonzero(got != ref))
    # the batched paths must agree with the one-pair-at-a-time paths
    rng = random.Random(11)
    samples = 0
    for _ in range(150):
        s1, s2 = rng.choice(shapes), rng.choice(shapes)
        t1 = random.Random(rng.random()).choice(list(labelings(s1, "ab")))
        t2 = random.Random(rng.random()).choice(list(labelings(s2, "ab")))
        cost = rng.choice((builtin_unit(), builtin_paper()))
        want = brute_force_distance(t1, t2, cost)
        mismatches += sum(ENGINES[e](t1, t2, cost).distance != want for e in ENGINE_NAMES)
        samples += 1
    elapsed = time.perf_counter() - start
    ok = len(shapes) == 23 and pairs == 2 * 550 * 550 and mismatches == 0 and elapsed < 60
    criterion(2, ok, f"shapes={len(shapes)} labeled_pairs={pairs} (2 cost models) engines={len(ENGINE_NAMES)} "
                     f"scalar_samples={samples} mismatches={mismatches} time={elapsed:.1f}s (<60s)")


def test_criterion_03_cross_engine_scale(criterion):
    disagreements = 0
    for t1, t2, cost in scale_instances():
        ref = ENGINES["naive"](t1, t2, cost)
        for engine in ENGINE_NAMES[1:]:
            res = ENGINES[engine](t1, t2, cost)
            disagreements += res.distance != ref.distance or res.scaled != ref.scaled
    n = len(scale_instances())
    sizes = [t.size for t1, t2, _ in scale_instances() for t in (t1, t2)]
    criterion(3, n == 200 and disagreements == 0,
              f"pairs={n} sizes={min(sizes)}..{max(sizes)} engines={len(ENGINE_NAMES)} "
              f"disagreements={disagreements}")


def test_criterion_04_mapping_validity(criterion):
    checked = bad = 0
    t1, t2 = fig_pair()
    for engine in ENGINE_NAMES + ("oracle",):
        m = recover_mapping(t1, t2, builtin_paper(), engine)
        checked += 1
        bad += (validate_mapping(m, t1, t2) is not None or m.cost(t1, t2, builtin_paper()) != m.distance
                or m.distance != 5)
    for t1, t2, cost in scale_instances():
        m = recover_mapping(t1, t2, cost, "zs")
        checked += 1
        bad += validate_mapping(m, t1, t2) is not None or m.cost(t1, t2, cost) != m.distance
    shapes, labs = small_shapes()
    verdicts = {}
    for cost in (builtin_unit(), builtin_paper()):
        for s1 in shapes:
            for s2 in shapes:
                oracle, scale = brute_force_batch(s1, s2, labs[s1], labs[s2], cost)
                for p, q, m, total, sc in recover_mappings_batch(s1, s2, labs[s1], labs[s2], cost):
                    key = (s1, s2, tuple(m.pairs))
                    if key not in verdicts:
                        verdicts[key] = validate_mapping(m, s1, s2)
                    checked += 1
                    bad += verdicts[key] is not None or Fraction(total, sc) != m.distance \
                        or Fraction(int(oracle[p, q]), scale) != m.distance
    criterion(4, bad == 0, f"mappings_checked={checked} invalid_or_costly={bad}")


def test_criterion_05_metric(criterion):
    rng = random.Random(5)
    cost = builtin_unit()
    asym = tri = 0
    for _ in range(200):
        a, b, c = (random_tree(rng.randint(1, 30), rng, ALPHABET) for _ in range(3))
        dab = ENGINES["demaine"](a, b, cost).distance
        dba = ENGINES["demaine"](b, a, cost).distance
        dbc = ENGINES["zs"](b, c, cost).distance
        dac = ENGINES["klein"](a, c, cost).distance
        asym += dab != dba
        tri += dac > dab + dbc
        tri += ENGINES["zs"](a, a, cost).distance != 0
    criterion(5, asym == 0 and tri == 0, f"triples=200 asymmetric={asym} triangle_or_identity_violations={tri}")


def test_criterion_06_path_reduction(criterion):
    rng = random.Random(6)
    bad = 0
    for i in range(100):
        p1 = random_path(rng.randint(1, 25), rng, ALPHABET)
        p2 = random_path(rng.randint(1, 25), rng, ALPHABET)
        cost = builtin_unit() if i % 2 else builtin_paper()
        s1 = [p1.labels[x] for x in reversed(range(p1.size))]
        s2 = [p2.labels[x] for x in reversed(range(p2.size))]
        want = string_edit_distance(s1, s2, cost)
        bad += sum(ENGINES[e](p1, p2, cost).distance != want for e in ENGINE_NAMES)
    criterion(6, bad == 0, f"path_pairs=100 engines={len(ENGINE_NAMES)} mismatches={bad}")


def test_criterion_07_lemma_bounds(criterion):
    start = time.perf_counter()
    rng = random.Random(7)
    trees = []
    for n in (1, 2, 7, 64, 100, 511, 512, 1023, 2048, 4096):
        trees += [("path", path(n)), ("star", star(n)), ("left-comb", left_comb(n)),
                  ("right-comb", right_comb(n)), ("full-binary", full_binary(n)),
                  ("random", random_tree(n, rng))]
    checks = failed = halving_trees = 0
    for name, t in trees:
        results = check_collapsed_depths(t)
        if t.size <= 512:
            results += check_halving(t)
            halving_trees += 1
        checks += len(results)
        failed += sum(not c.passed for c in results)
    elapsed = time.perf_counter() - start
    criterion(7, failed == 0 and elapsed < 60,
              f"trees={len(trees)} (max 4096 nodes) halving_walked={halving_trees} checks={checks} "
              f"failed={failed} time={elapsed:.1f}s (<60s)")


def test_criterion_08_step_bounds(criterion):
    rng = random.Random(8)
    rows = failed = ran = 0
    worst = {}
    for family in ("path", "star", "left-comb", "right-comb", "full-binary", "random"):
        for n in (16, 64, 256, 1024, 4096):
            big = make(family, n, rng)
            for m in sorted({16, 64, n} & set(range(1, n + 1))):
                small = make(family, m, rng)
                for chk in check_engine_steps(small, big):
                    rows += 1
                    failed += not chk.passed
                    ran += chk.observed <= 400_000
                    worst[chk.name] = max(worst.get(chk.name, 0), chk.observed / chk.bound)
    shown = " ".join(f"{k}:{v:.3f}" for k, v in sorted(worst.items()))
    criterion(8, failed == 0, f"checks={rows} executed={ran} failed={failed} max observed/bound {shown}")


def test_criterion_09_combined_dominance(criterion):
    rng = random.Random(9)
    worse = mismatched = strict = 0
    for _ in range(100):
        t1 = random_tree(rng.randint(1, 64), rng, ALPHABET)
        t2 = random_tree(rng.randint(1, 64), rng, ALPHABET)
        p = plan(t1, t2)
        pure = min(count_steps(t1, t2, s).total for s in ("leftmost", "rightmost", "heavy"))
        worse += p.planned_steps > pure
        strict += p.planned_steps < pure
        res = ted_combined(t1, t2, builtin_unit(), p)
        mismatched += res.steps != p.planned_steps
        mismatched += res.distance != ENGINES["zs"](t1, t2, builtin_unit()).distance
    criterion(9, worse == 0 and mismatched == 0,
              f"pairs=100 plan_worse_than_pure={worse} strictly_better={strict} "
              f"execution_or_distance_mismatch={mismatched}")


def test_criterion_10_enumeration(criterion):
    rng = random.Random(10)
    closure = length = 0
    for _ in range(50):
        t = random_tree(rng.randint(1, 64), rng, ALPHABET)
        n = t.size
        for scheme in Scheme:
            closure += check_prefix_closure(t, enumerate_scheme(t, scheme)) is not None
        lr, rl = len(enum_lr(t)), len(enum_rl(t))
        ps, sp = len(enum_prefix_suffix(t)), len(enum_suffix_prefix(t))
        length += not (lr == rl == sum(t.depths) <= n * min(t.height, n) <= n * n)
        length += not (ps == sp == t.relevant_forest_count(t.root) <= n * n)
        length += len(enum_lr_keyroot(t)) != sum(t.sizes[k] for k in t.index.lr_keyroots)
        length += len(enum_h_keyroot(t)) != sum(t.sizes[k] for k in t.index.h_keyroots)
        per_node = [0] * n
        for k in t.index.h_keyroots:
            for x in t.subtree(k):
                per_node[x] += 1
        length += max(per_node) > 1 + math.log2(n)
    criterion(10, closure == 0 and length == 0,
              f"trees=50 schemes={len(Scheme)} closure_failures={closure} length_failures={length}")
