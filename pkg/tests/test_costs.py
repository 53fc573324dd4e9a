from fractions import Fraction

import pytest

from tedkit.costs import CompiledCosts, CostTableError, builtin_paper, builtin_unit, from_table, to_exact
from tedkit.tree import parse_tree


def test_unit():
    c = builtin_unit()
    assert c.sub("a", "a") == 0 and c.sub("a", "b") == 1 and c.delete("x") == 1 and c.ins("x") == 1


def test_builtin_paper_costs():
    c = builtin_paper()
    assert c.sub("c", "g") == 1 and c.ins("f") == 2 and c.delete("f") == 2 and c.sub("d", "d") == 0


def test_table_defaults_behave_like_builtin_paper():
    c = from_table("default sub 1\ndefault del 2\ndefault ins 2\n")
    p = builtin_paper()
    for a, b in [("a", "b"), ("x", "y")]:
        assert c.sub(a, b) == p.sub(a, b)
        assert c.delete(a) == p.delete(a) and c.ins(b) == p.ins(b)


def test_table_overrides_are_directional():
    c = from_table("sub a b 5   # only one way\ndel a 3\nins b 4\n")
    assert c.sub("a", "b") == 5 and c.sub("b", "a") == 1
    assert c.delete("a") == 3 and c.delete("b") == 1
    assert c.ins("b") == 4 and c.ins("a") == 1
    assert not c.is_symmetric


def test_zero_cost_is_legal_and_negative_is_not():
    assert from_table("default del 0").delete("x") == 0
    with pytest.raises(CostTableError):
        from_table("default del -1")
    with pytest.raises(CostTableError):
        from_table("sub a 3")
    with pytest.raises(CostTableError):
        from_table("del a x")


def test_decimals_are_exact():
    c = from_table("default sub 0.1\ndel a 1/3")
    assert c.sub("a", "b") == Fraction(1, 10) and c.delete("a") == Fraction(1, 3)
    assert to_exact(0.3, 10) == Fraction(3, 10)
    assert to_exact(0.26) == 0


def test_compiled_scaling():
    t1, t2 = parse_tree("{a{b}}"), parse_tree("{b}")
    c = from_table("default sub 1/2\ndefault del 1/3\ndefault ins 1/4")
    cc = CompiledCosts.build(c, t1, t2)
    assert cc.scale == 12
    assert cc.value(cc.dele[0]) == Fraction(1, 3) and cc.value(cc.ins[0]) == Fraction(1, 4)
    assert cc.sub[0][0] == 0 and cc.value(cc.sub[1][0]) == Fraction(1, 2)
    tt = cc.transposed()
    assert tt.dele == cc.ins and tt.ins == cc.dele and tt.sub[0][1] == cc.sub[1][0]


def test_transposed_model():
    c = from_table("sub a b 5\ndel a 3\nins b 4")
    t = c.transposed()
    assert t.sub("b", "a") == 5 and t.ins("a") == 3 and t.delete("b") == 4
