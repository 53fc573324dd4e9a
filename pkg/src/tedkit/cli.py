"""Command-line front end: ``tedkit dist|mapping|steps|enum|bench``.

Exit status: 0 success, 1 tree parse error, 2 configuration error,
3 internal invariant failure (including a failed bound check in ``bench``).
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import corpus
from .costs import CostModel, CostTableError, builtin_paper, builtin_unit, from_table
from .engines import ENGINES
from .enumeration import Scheme, SequencingError, enumerate_scheme, forest_nodes
from .instrumentation import check_collapsed_depths, check_engine_steps, check_halving
from .mapping import recover_mapping, validate_mapping
from .oracle import SizeGuardError, brute_force_distance
from .strategy import count_steps, plan
from .tree import ParseError, Tree, parse_tree

log = logging.getLogger("tedkit")

FORMAT_VERSION = 1
ENGINE_CHOICES = ("naive", "zs", "klein", "demaine", "combined", "oracle")
STRATEGY_CHOICES = ("leftmost", "rightmost", "heavy", "klein", "combined")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    engine: str = "demaine"
    cost: str = "unit"
    inputs: tuple[str, ...] = ()
    output: str = "text"


def _rational(x: Fraction) -> str:
    return str(x)


class Emitter:
    """Writes text lines or versioned JSON-lines records."""

    def __init__(self, fmt: str, out=None):
        self.fmt = fmt
        self.out = out or sys.stdout

    def emit(self, text: str, record: dict) -> None:
        if self.fmt == "jsonl":
            self.out.write(json.dumps({"v": FORMAT_VERSION, **record}, sort_keys=True) + "\n")
        else:
            self.out.write(text + "\n")


def load_cost(name: str) -> CostModel:
    if name == "unit":
        return builtin_unit()
    if name == "paper":
        return builtin_paper()
    path = Path(name)
    if not path.is_file():
        raise ConfigError(f"cost model {name!r} is neither unit, paper nor a readable file")
    try:
        return from_table(path.read_text(encoding="utf-8"))
    except CostTableError as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def load_tree(arg: str) -> Tree:
    """Inline bracket text, or a path to a file holding one tree."""
    text = arg
    if not arg.lstrip().startswith("{"):
        path = Path(arg)
        if not path.is_file():
            raise ConfigError(f"{arg!r} is neither a bracket tree nor a readable file")
        text = path.read_text(encoding="utf-8")
    return parse_tree(text)


def _two_trees(cfg: RunConfig) -> tuple[Tree, Tree]:
    if len(cfg.inputs) != 2:
        raise ConfigError(f"{cfg.command} needs exactly two trees, got {len(cfg.inputs)}")
    return load_tree(cfg.inputs[0]), load_tree(cfg.inputs[1])


def cmd_dist(cfg: RunConfig, em: Emitter) -> int:
    t1, t2 = _two_trees(cfg)
    cost = load_cost(cfg.cost)
    if cfg.engine == "oracle":
        d = brute_force_distance(t1, t2, cost)
    else:
        d = ENGINES[cfg.engine](t1, t2, cost).distance
    em.emit(_rational(d), {"kind": "distance", "engine": cfg.engine, "distance": _rational(d)})
    return 0


def cmd_mapping(cfg: RunConfig, em: Emitter) -> int:
    t1, t2 = _two_trees(cfg)
    cost = load_cost(cfg.cost)
    m = recover_mapping(t1, t2, cost, cfg.engine)
    problem = validate_mapping(m, t1, t2)
    if problem is not None:
        raise AssertionError(f"recovered mapping is invalid: {problem}")
    if m.cost(t1, t2, cost) != m.distance:
        raise AssertionError(f"mapping costs {m.cost(t1, t2, cost)} but distance is {m.distance}")
    em.emit(f"distance {_rational(m.distance)}",
            {"kind": "distance", "engine": cfg.engine, "distance": _rational(m.distance)})
    for line in m.script(t1, t2):
        op, *nodes = line.split()
        rec = {"kind": "op", "op": op}
        for key, node in zip(("t1", "t2") if op == "sub" else (("t1",) if op == "del" else ("t2",)), nodes):
            label, num = node.rsplit("@", 1)
            rec[key] = int(num)
            rec[f"{key}_label"] = label
        em.emit(line, rec)
    return 0


def cmd_steps(cfg: RunConfig, em: Emitter, strategies, show_plan: bool) -> int:
    t1, t2 = _two_trees(cfg)
    for name in strategies:
        rep = count_steps(t1, t2, name)
        cats = " ".join(f"{k}={v}" for k, v in rep.by_category.items())
        em.emit(f"{name}\ttotal={rep.total}\tbase={rep.base}\tsweeps={rep.sweeps}\t{cats}",
                {"kind": "steps", **rep.as_dict()})
    if show_plan:
        p = plan(t1, t2)
        em.emit(f"plan\tplanned_steps={p.planned_steps}",
                {"kind": "plan", "planned_steps": p.planned_steps})
        for v, w, kind, side, local in p.reachable():
            em.emit(f"pair\t{v + 1}\t{w + 1}\t{kind}\tT{side}\t{local}",
                    {"kind": "plan-pair", "t1": v + 1, "t2": w + 1, "path": kind,
                     "tree": side, "local_steps": local})
    return 0


def cmd_enum(cfg: RunConfig, em: Emitter, scheme: str) -> int:
    if len(cfg.inputs) != 1:
        raise ConfigError(f"enum needs exactly one tree, got {len(cfg.inputs)}")
    t = load_tree(cfg.inputs[0])
    seq = enumerate_scheme(t, scheme)
    for i, f in enumerate(seq):
        if f.is_empty:
            em.emit("[]", {"kind": "forest", "index": i, "lm": None, "rm": None, "size": 0})
            continue
        em.emit(f"[{t.labels[f.lm]}..{t.labels[f.rm]}]",
                {"kind": "forest", "index": i, "lm": f.lm + 1, "rm": f.rm + 1,
                 "lm_label": t.labels[f.lm], "rm_label": t.labels[f.rm],
                 "size": len(forest_nodes(t, f))})
    return 0


def bench_rows(sizes, families, engines, small=(16, 64), seed=0):
    """Bound checks on the adversarial corpus; one dict per (family, m, n, check)."""
    rng = random.Random(seed)
    rows = []
    for family in families:
        for n in sizes:
            big = corpus.make(family, n, rng)
            for m in sorted({*(s for s in small if s < n), n}):
                other = corpus.make(family, m, rng)
                for chk in check_engine_steps(other, big, engines):
                    rows.append({"family": family, "m": m, "n": n, "check": chk.name, "engine": chk.name,
                                 "observed": chk.observed, "bound": chk.bound, "pass": chk.passed})
            structural = check_collapsed_depths(big)
            if n <= 512:
                structural += check_halving(big)
            for chk in structural:
                rows.append({"family": family, "m": n, "n": n, "check": chk.name, "engine": None,
                             "observed": chk.observed, "bound": chk.bound, "pass": chk.passed})
    return rows


def cmd_bench(cfg: RunConfig, em: Emitter, sizes, families, figures) -> int:
    rows = bench_rows(sizes, families, ("zs", "klein", "demaine"))
    if cfg.output == "text":
        em.emit("family\tm\tn\tcheck\tobserved\tbound\tpass", {})
    for r in rows:
        bound = r["bound"]
        shown = f"{bound:.4f}" if isinstance(bound, float) else str(bound)
        em.emit(f"{r['family']}\t{r['m']}\t{r['n']}\t{r['check']}\t{r['observed']}\t{shown}\t"
                f"{'pass' if r['pass'] else 'FAIL'}",
                {"kind": "bound", "family": r["family"], "m": r["m"], "n": r["n"], "check": r["check"],
                 "observed": r["observed"], "bound": bound, "pass": r["pass"]})
    if figures:
        from .plotting import render_bench

        for path in render_bench([r for r in rows if r["engine"]], figures):
            log.info("wrote %s", path)
    failed = [r for r in rows if not r["pass"]]
    if failed:
        log.error("%d bound checks failed", len(failed))
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cost", default="unit", help="unit, paper, or a cost-table file")
    common.add_argument("--format", choices=("text", "jsonl"), default="text")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="tedkit", description="Ordered tree edit distance toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    for name, helptext in (("dist", "print the edit distance"),
                           ("mapping", "print the distance and an optimal edit script")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("--engine", choices=ENGINE_CHOICES, default="demaine")
        sp.add_argument("trees", nargs="*", help="bracket trees inline or as file paths")

    sp = sub.add_parser("steps", parents=[common], help="relaxation counts per strategy")
    sp.add_argument("--strategy", action="append", choices=STRATEGY_CHOICES,
                    help="repeatable; default is all strategies")
    sp.add_argument("--plan", action="store_true", help="also list the combined plan's pairs")
    sp.add_argument("trees", nargs="*")

    sp = sub.add_parser("enum", parents=[common], help="dump an enumeration sequence")
    sp.add_argument("--scheme", "--dump-enumeration", dest="scheme", default="lr",
                    choices=[s.value for s in Scheme])
    sp.add_argument("trees", nargs="*")

    sp = sub.add_parser("bench", parents=[common], help="bound checks on the tree corpus")
    sp.add_argument("--sizes", default="64,256,1024,4096", help="comma-separated n values")
    sp.add_argument("--families", default="path,star,left-comb,right-comb,full-binary,random")
    sp.add_argument("--figures", metavar="DIR", help="write PNG figures here")
    return p


def run(cfg: RunConfig, args: argparse.Namespace, out=None) -> int:
    em = Emitter(cfg.output, out)
    if cfg.command == "dist":
        return cmd_dist(cfg, em)
    if cfg.command == "mapping":
        return cmd_mapping(cfg, em)
    if cfg.command == "steps":
        return cmd_steps(cfg, em, args.strategy or STRATEGY_CHOICES, args.plan)
    if cfg.command == "enum":
        return cmd_enum(cfg, em, args.scheme)
    if cfg.command == "bench":
        try:
            sizes = [int(s) for s in args.sizes.split(",") if s]
        except ValueError as exc:
            raise ConfigError(f"bad --sizes {args.sizes!r}") from exc
        families = [f for f in args.families.split(",") if f]
        unknown = [f for f in families if f != "random" and f not in corpus.FAMILIES]
        if unknown or any(s < 1 for s in sizes):
            raise ConfigError(f"bad bench selection: {unknown or sizes}")
        return cmd_bench(cfg, em, sizes, families, args.figures)
    raise ConfigError(f"unknown command {cfg.command!r}")


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    cfg = RunConfig(command=args.command, engine=getattr(args, "engine", "demaine"), cost=args.cost,
                    inputs=tuple(getattr(args, "trees", ()) or ()), output=args.format)
    try:
        return run(cfg, args, out)
    except ParseError as exc:
        print(f"tedkit: parse error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, SizeGuardError, OSError) as exc:
        print(f"tedkit: {exc}", file=sys.stderr)
        return 2
    except (SequencingError, AssertionError) as exc:
        print(f"tedkit: internal invariant failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
