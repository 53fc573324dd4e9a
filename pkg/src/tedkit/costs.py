"""Edit-cost models: substitution, deletion and insertion costs on labels."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Mapping

__all__ = [
    "CompiledCosts",
    "CostModel",
    "CostTableError",
    "builtin_paper",
    "builtin_unit",
    "from_table",
]


class CostTableError(ValueError):
    """A cost-table document is malformed or carries a negative cost."""


def to_exact(value, denominator: int = 1) -> Fraction:
    """Exact rational for ``value``; floats are rounded to ``1/denominator`` steps."""
    if isinstance(value, bool):
        raise TypeError("booleans are not costs")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(round(value * denominator), denominator)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {value!r} as a cost")


@dataclass(frozen=True)
class CostModel:
    """Label-level costs.

    Lookups check the per-label overrides first and fall back to the
    defaults.  Substituting a label by itself costs 0 unless a ``(a, a)``
    override says otherwise.
    """

    default_sub: Fraction = Fraction(1)
    default_del: Fraction = Fraction(1)
    default_ins: Fraction = Fraction(1)
    sub_overrides: Mapping[tuple[str, str], Fraction] = field(default_factory=dict)
    del_overrides: Mapping[str, Fraction] = field(default_factory=dict)
    ins_overrides: Mapping[str, Fraction] = field(default_factory=dict)
    name: str = "custom"

    def __post_init__(self):
        for value in (self.default_sub, self.default_del, self.default_ins,
                      *self.sub_overrides.values(), *self.del_overrides.values(),
                      *self.ins_overrides.values()):
            if value < 0:
                raise CostTableError(f"negative cost {value}")

    def sub(self, a: str, b: str) -> Fraction:
        cost = self.sub_overrides.get((a, b))
        if cost is not None:
            return cost
        return Fraction(0) if a == b else self.default_sub

    def delete(self, a: str) -> Fraction:
        return self.del_overrides.get(a, self.default_del)

    def ins(self, b: str) -> Fraction:
        return self.ins_overrides.get(b, self.default_ins)

    def transposed(self) -> "CostModel":
        """Costs for editing in the opposite direction (T2 -> T1)."""
        return CostModel(
            default_sub=self.default_sub,
            default_del=self.default_ins,
            default_ins=self.default_del,
            sub_overrides={(b, a): c for (a, b), c in self.sub_overrides.items()},
            del_overrides=dict(self.ins_overrides),
            ins_overrides=dict(self.del_overrides),
            name=self.name,
        )

    @property
    def is_symmetric(self) -> bool:
        if self.default_del != self.default_ins or self.del_overrides != self.ins_overrides:
            return False
        return all(self.sub(b, a) == c for (a, b), c in self.sub_overrides.items())

    def compile(self, t1, t2) -> "CompiledCosts":
        return CompiledCosts.build(self, t1, t2)


@dataclass
class CompiledCosts:
    """Node-indexed integer costs, all scaled by ``scale``.

    Engines run on integers; ``value(x)`` turns a scaled integer back into
    the exact rational.
    """

    scale: int
    dele: list[int]
    ins: list[int]
    sub: list[list[int]]
    vector: bool = False

    @classmethod
    def build(cls, model: CostModel, t1, t2) -> "CompiledCosts":
        l1 = sorted(set(t1.labels))
        l2 = sorted(set(t2.labels))
        subs = {(a, b): model.sub(a, b) for a in l1 for b in l2}
        dels = {a: model.delete(a) for a in l1}
        inss = {b: model.ins(b) for b in l2}
        scale = 1
        for v in (*subs.values(), *dels.values(), *inss.values()):
            scale = lcm(scale, v.denominator)

        def as_int(v: Fraction) -> int:
            return v.numerator * (scale // v.denominator)

        sub_int = {k: as_int(v) for k, v in subs.items()}
        dele = [as_int(dels[a]) for a in t1.labels]
        ins = [as_int(inss[b]) for b in t2.labels]
        sub = [[sub_int[(a, b)] for b in t2.labels] for a in t1.labels]
        return cls(scale=scale, dele=dele, ins=ins, sub=sub)

    def value(self, scaled: int) -> Fraction:
        return Fraction(scaled, self.scale)

    def transposed(self) -> "CompiledCosts":
        n = len(self.ins)
        m = len(self.dele)
        sub_t = [[self.sub[i][j] for i in range(m)] for j in range(n)]
        return CompiledCosts(scale=self.scale, dele=list(self.ins), ins=list(self.dele), sub=sub_t,
                             vector=self.vector)

    @classmethod
    def batch(cls, model: CostModel, labelings1, labelings2) -> "CompiledCosts":
        """Costs for every (labeling of shape 1, labeling of shape 2) pair at once.

        Each labeling is a label sequence in node-id order.  Entries become
        integer numpy arrays broadcasting to ``(len(labelings1), len(labelings2))``:
        deletions are columns, insertions rows, substitutions full matrices.
        Transposing swaps the node lists but keeps that orientation.
        """
        import numpy as np

        l1 = sorted({a for lab in labelings1 for a in lab})
        l2 = sorted({b for lab in labelings2 for b in lab})
        vals = [model.sub(a, b) for a in l1 for b in l2]
        vals += [model.delete(a) for a in l1] + [model.ins(b) for b in l2]
        scale = 1
        for v in vals:
            scale = lcm(scale, v.denominator)

        def as_int(v: Fraction) -> int:
            return v.numerator * (scale // v.denominator)

        lab1 = np.array([list(lab) for lab in labelings1], dtype=object)
        lab2 = np.array([list(lab) for lab in labelings2], dtype=object)
        dmap = {a: as_int(model.delete(a)) for a in l1}
        imap = {b: as_int(model.ins(b)) for b in l2}
        m, n = lab1.shape[1], lab2.shape[1]
        dele = [np.array([dmap[a] for a in lab1[:, x]], dtype=np.int64)[:, None] for x in range(m)]
        ins = [np.array([imap[b] for b in lab2[:, y]], dtype=np.int64)[None, :] for y in range(n)]
        smat = np.array([[as_int(model.sub(a, b)) for b in l2] for a in l1], dtype=np.int64)
        idx1 = np.array([[l1.index(a) for a in row] for row in lab1])
        idx2 = np.array([[l2.index(b) for b in row] for row in lab2])
        sub = [[smat[idx1[:, x][:, None], idx2[:, y][None, :]] for y in range(n)] for x in range(m)]
        return cls(scale=scale, dele=dele, ins=ins, sub=sub, vector=True)


def builtin_unit() -> CostModel:
    return CostModel(Fraction(1), Fraction(1), Fraction(1), name="unit")


def builtin_paper() -> CostModel:
    """Substitution 1 (0 on equal labels), deletion and insertion 2."""
    return CostModel(Fraction(1), Fraction(2), Fraction(2), name="paper")


def from_table(text: str, denominator: int = 1) -> CostModel:
    """Parse a line-oriented cost table.

    Recognised lines (``#`` starts a comment)::

        default sub 1
        default del 2
        default ins 2
        sub a b 5
        del a 3
        ins b 4
    """
    defaults = {"sub": Fraction(1), "del": Fraction(1), "ins": Fraction(1)}
    subs: dict[tuple[str, str], Fraction] = {}
    dels: dict[str, Fraction] = {}
    inss: dict[str, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "default" and len(parts) == 3 and parts[1] in defaults:
                defaults[parts[1]] = to_exact(parts[2], denominator)
            elif parts[0] == "sub" and len(parts) == 4:
                subs[(parts[1], parts[2])] = to_exact(parts[3], denominator)
            elif parts[0] == "del" and len(parts) == 3:
                dels[parts[1]] = to_exact(parts[2], denominator)
            elif parts[0] == "ins" and len(parts) == 3:
                inss[parts[1]] = to_exact(parts[2], denominator)
            else:
                raise CostTableError(f"line {lineno}: cannot parse {raw.strip()!r}")
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, CostTableError):
                raise
            raise CostTableError(f"line {lineno}: bad number in {raw.strip()!r}") from exc
    return CostModel(defaults["sub"], defaults["del"], defaults["ins"], subs, dels, inss, name="table")
