"""Command-line interface.

Exit codes: 0 success, 1 domain error or failed check, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path as FsPath
from typing import Sequence

from . import fixtures as fx
from . import gradings, grammar, physics, prelie
from .sums import FormalSum, format_sum
from .trees import (
    EMPTY,
    Mode,
    TreeError,
    as_tree,
    canonical_key,
    edge_count,
    full_binary_trees,
    labeled_nonplanar_trees,
    leaf_count,
    node_count,
    parse_tree,
    serialize_tree,
    subtree_at,
    unary_binary_trees,
)


class UsageError(Exception):
    pass


# -- argument helpers ---------------------------------------------------------

def parse_path(text: str) -> tuple[int, ...]:
    """``"1,0"``, ``"[1,0]"`` or ``""``/``"[]"`` for the root."""
    s = text.strip().strip("[]").strip()
    if not s:
        return ()
    try:
        return tuple(int(x) for x in s.replace(" ", "").split(","))
    except ValueError:
        raise UsageError(f"bad path {text!r}; expected comma-separated child indices") from None


def parse_range(text: str) -> range:
    if ".." in text:
        a, b = text.split("..", 1)
        return range(int(a), int(b) + 1)
    return range(int(text), int(text) + 1)


def read_sum(text: str, mode: Mode) -> FormalSum:
    """Tree text, a FormalSum JSON object, or ``@file`` holding either."""
    if text.startswith("@"):
        text = FsPath(text[1:]).read_text(encoding="utf-8").strip()
    if text.lstrip().startswith("{"):
        s = FormalSum.from_json(text)
        return s if s.mode is mode else FormalSum(((t, c) for t, c in s), mode)
    return FormalSum([(parse_tree(text), 1)], mode)


def read_graph(text: str) -> physics.PhysicsGraph:
    if text.startswith("@"):
        text = FsPath(text[1:]).read_text(encoding="utf-8").strip()
    if text.lstrip().startswith("{"):
        return physics.from_json(text)
    return physics.tree_to_physics(parse_tree(text))


# -- output -------------------------------------------------------------------

class Out:
    def __init__(self, args):
        self.json = getattr(args, "json", False)
        self.dot = getattr(args, "dot", False)

    def emit(self, data, text: str) -> None:
        if self.json:
            print(json.dumps(data, ensure_ascii=False, indent=2, sort_keys=False))
        else:
            print(text)


def pretty_sum(x: FormalSum) -> str:
    if not x:
        return "0"
    rows = [(str(c), k) for k, c in x.items()]
    width = max(len(c) for c, _ in rows)
    return "\n".join(f"{c:>{width}}  {k}" for c, k in rows)


def render(t) -> str:
    """Indented outline of a tree."""
    t = as_tree(t)
    if t is EMPTY:
        return "∅"
    lines = []

    def go(s, depth):
        lines.append("  " * depth + (s._head()[1:] or "•"))
        for c in s.children:
            go(c, depth + 1)

    go(t, 0)
    return "\n".join(lines)


# -- universes ----------------------------------------------------------------

def universe(op: str, max_nodes: int, shape: str, labels: str):
    if op.startswith("graft"):
        return [t for n in range(1, max_nodes + 1) for t in labeled_nonplanar_trees(n, list(labels))]
    gen = full_binary_trees if shape == "full-binary" else unary_binary_trees
    return [t for n in range(1, max_nodes + 1) for t in gen(n)]


def operator(name: str, labeled: bool = False, foot_policy: str | None = None, label: str | None = None) -> prelie.Operator:
    if name == "adjoin":
        cfg = prelie.AdjunctionConfig(prelie.Labeling.LABELED if labeled else prelie.Labeling.UNLABELED, foot_policy)
        return prelie.adjoin_operator(cfg)
    if name == "graft":
        return prelie.graft_operator(label)
    raise UsageError(f"unknown operator {name!r}; expected adjoin or graft")


# -- commands -----------------------------------------------------------------

def cmd_tree(args, out: Out) -> int:
    t = parse_tree(args.text)
    if args.action == "dot" or out.dot:
        print(physics.tree_to_dot(t))
        return 0
    if args.action == "render":
        out.emit({"tree": serialize_tree(t)}, render(t))
        return 0
    mode = Mode(args.mode)
    info = {"tree": serialize_tree(t), "key": canonical_key(t, mode), "mode": mode.value}
    if t is not EMPTY:
        info.update(nodes=node_count(t), leaves=leaf_count(t), edges=edge_count(t))
    text = "\n".join(f"{k}: {v}" for k, v in info.items())
    out.emit(info, text)
    return 0


def _emit_sum(out: Out, x: FormalSum) -> None:
    out.emit(x.to_json(), pretty_sum(x))


def cmd_adjoin(args, out: Out) -> int:
    if args.at is not None:
        if args.foot is None:
            raise UsageError("--at requires --foot")
        t = prelie.adjoin_at(args.T, parse_path(args.at), args.S, parse_path(args.foot))
        if out.dot:
            print(physics.tree_to_dot(t))
        else:
            out.emit({"tree": str(t)}, str(t))
        return 0
    op = operator("adjoin", args.labeled, args.foot_policy)
    mode = Mode.PLANAR
    _emit_sum(out, op(read_sum(args.T, mode), read_sum(args.S, mode)))
    return 0


def cmd_graft(args, out: Out) -> int:
    op = operator("graft", label=args.label)
    _emit_sum(out, op(read_sum(args.T, Mode.NONPLANAR), read_sum(args.S, Mode.NONPLANAR)))
    return 0


def cmd_bracket(args, out: Out) -> int:
    op = operator(args.op, getattr(args, "labeled", False))
    _emit_sum(out, prelie.bracket(read_sum(args.x, op.mode), read_sum(args.y, op.mode), op))
    return 0


def cmd_associator(args, out: Out) -> int:
    op = operator(args.op, getattr(args, "labeled", False))
    a, b, c = (read_sum(x, op.mode) for x in (args.a, args.b, args.c))
    fn = prelie.vinberg_defect if args.vinberg else prelie.associator
    _emit_sum(out, fn(a, b, c, op))
    return 0


def cmd_check(args, out: Out) -> int:
    if args.what == "grading":
        scheme = args.scheme or ("doubled_vertex_count" if args.op == "double" else "vertex_count")
        op = args.op if args.op in gradings.GRADING_OPS else "single"
        r = gradings.grading_report(op, scheme, args.max_nodes if op == "single" else args.max_degree)
        out.emit(r.to_json(), r.summary())
        return 0
    if args.what == "coeffsum":
        trees = universe("adjoin", args.max_nodes, "unary-binary", "")
        r = prelie.check_coefficient_sum(trees)
        out.emit(r.to_json(), r.summary())
        return 0 if r.passed else 1
    if args.op not in ("adjoin", "graft"):
        raise UsageError(f"check {args.what} needs --op adjoin or --op graft")
    op = operator(args.op)
    trees = universe(args.op, args.max_nodes, args.shape, args.labels)
    if args.sample is not None:
        rng = random.Random(args.seed)
        trees = rng.sample(trees, min(args.sample, len(trees)))
    fn = {"vinberg": prelie.check_prelie, "jacobi": prelie.check_jacobi, "antisymmetry": prelie.check_antisymmetry}[args.what]
    r = fn(op, trees)
    out.emit(r.to_json(), r.summary())
    return 0 if r.passed else 1


def cmd_enum(args, out: Out) -> int:
    cls = gradings.TreeClass.parse(args.cls)
    degrees = parse_range(args.degrees)
    basis = {d: [str(t) if t is not EMPTY else "∅" for t in gradings.enumerate_trees(d, cls, args.bound)] for d in degrees}
    data = {
        "class": cls.value,
        "scheme": cls.scheme.value,
        "dims": {str(d): len(ts) for d, ts in basis.items()},
        "basis": {str(d): ts for d, ts in basis.items()},
    }
    lines = [f"{cls.value} graded by {cls.scheme.value}"]
    for d, ts in basis.items():
        lines.append(f"  degree {d:>2}: dim {len(ts)}" + (f"  {' '.join(ts)}" if ts else ""))
    out.emit(data, "\n".join(lines))
    return 0


def _graph_out(out: Out, g: physics.PhysicsGraph, extra: dict | None = None) -> None:
    if out.dot:
        print(physics.to_dot(g))
        return
    data = g.to_json()
    try:
        tree = str(physics.physics_to_tree(g))
        flat = str(physics.physics_to_tree(g, contract=False))
    except physics.PhysicsError:
        tree = flat = None
    summary = {"corollas": len(g), "external": len(g.external()), "tree": tree, "uncontracted": flat}
    if extra:
        summary.update(extra)
    text = "\n".join(f"{k}: {v}" for k, v in summary.items() if v is not None)
    out.emit({**summary, "graph": data}, text)


def cmd_physics(args, out: Out) -> int:
    if args.action == "encode":
        _graph_out(out, read_graph(args.graphs[0]))
        return 0
    if args.action == "split":
        g = read_graph(args.graphs[0])
        labels = tuple(args.labels.split(",", 1)) if args.labels else None
        t1, t2 = physics.split_edge(g, physics.SplitSpec(physics.edge_above(g, parse_path(args.edge)), labels))
        if out.dot:
            print(physics.to_dot(t1, "T1"))
            print(physics.to_dot(t2, "T2"))
        else:
            out.emit({"T1": t1.to_json(), "T2": t2.to_json()}, f"T1: {len(t1)} corollas, open flags {t1.open_flags()}\nT2: {len(t2)} corollas, root {physics.physics_to_tree(t2)}")
        return 0
    if args.action == "compose":
        if len(args.graphs) != 2 or args.flag is None:
            raise UsageError("physics compose needs two graphs and --flag")
        g1, g2 = (read_graph(x) for x in args.graphs)
        _graph_out(out, physics.compose(g1, args.flag, g2, args.to_flag))
        return 0
    if args.action == "adjoin":
        if len(args.graphs) != 2:
            raise UsageError("physics adjoin needs T and S")
        T, S = (parse_tree(x) for x in args.graphs)
        if args.all:
            _emit_sum(out, physics.adjoin_physics_sum(T, S))
            return 0
        if args.site is None or args.foot is None:
            raise UsageError("physics adjoin needs --site and --foot (or --all)")
        site, foot = parse_path(args.site), parse_path(args.foot)
        if not subtree_at(S, foot).foot:
            S = physics._mark_foot(S, foot)
        gT, gS = physics.tree_to_physics(T), physics.tree_to_physics(S)
        g = physics.adjoin_physics(gT, physics.SplitSpec(physics.edge_above(gT, site)), gS, physics.foot_flag_of(gS, foot))
        _graph_out(out, g, {"audit": physics.audit(g).to_json()})
        return 0
    if args.action == "edge-insert":
        if len(args.graphs) != 2 or args.edge is None:
            raise UsageError("physics edge-insert needs T, S and --edge")
        t = physics.edge_insert(args.graphs[0], parse_path(args.edge), args.graphs[1], args.side)
        if out.dot:
            print(physics.tree_to_dot(t))
        else:
            out.emit({"tree": str(t), "nodes": node_count(t)}, f"{t}\nnodes: {node_count(t)}")
        return 0
    raise UsageError(f"unknown physics action {args.action!r}")


def cmd_tag(args, out: Out) -> int:
    g = grammar.load_grammar(args.grammar)
    if args.action in ("validate", "lexicalized"):
        fn = grammar.validate_grammar if args.action == "validate" else grammar.is_lexicalized
        vs = fn(g)
        text = "ok" if not vs else "\n".join(str(v) for v in vs)
        out.emit({"passed": not vs, "violations": [v.to_json() for v in vs], "implicit_feet": [[i, list(p)] for i, p in g.implicit_feet]}, text)
        return 0 if not vs else 1
    if args.action == "derive":
        if args.derivation is None:
            raise UsageError("tag derive needs a derivation (JSON text or @file)")
        text = args.derivation
        if text.startswith("@"):
            text = FsPath(text[1:]).read_text(encoding="utf-8")
        t = grammar.derive(g, grammar.Derivation.from_json(text), args.feature_policy)
        if out.dot:
            print(physics.tree_to_dot(t))
        else:
            out.emit({"tree": str(t)}, str(t))
        return 0
    if args.action == "enumerate":
        ts = grammar.enumerate_derived(g, args.max_steps, args.budget)
        out.emit({"count": len(ts), "trees": [str(t) for t in ts]}, "\n".join(str(t) for t in ts))
        return 0
    raise UsageError(f"unknown tag action {args.action!r}")


def cmd_fixtures(args, out: Out) -> int:
    try:
        results = fx.run_fixtures(args.only)
    except KeyError as e:
        raise UsageError(f"{e.args[0]}; known: {', '.join(fx.fixture_names())}") from None
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status}  {r.name:<20} {r.about}")
        if not r.passed:
            lines.append(f"      expected {json.dumps(r.expected, ensure_ascii=False)}")
            lines.append(f"      got      {json.dumps(r.actual, ensure_ascii=False)}" + (f"  ({r.error})" if r.error else ""))
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} fixtures pass")
    out.emit({"passed": passed == len(results), "results": [r.to_json() for r in results]}, "\n".join(lines))
    return 0 if passed == len(results) else 1


# -- parser -------------------------------------------------------------------

def _globals(defaults: bool) -> argparse.ArgumentParser:
    # shared flags, accepted before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--json", action="store_true", default=d(False), help="emit JSON")
    p.add_argument("--mode", choices=["planar", "nonplanar"], default=d("planar"), help="planarity mode for canonical keys")
    p.add_argument("--seed", type=int, default=d(0), help="seed for sampled checks")
    p.add_argument("--budget", type=int, default=d(10_000), help="enumeration guard")
    p.add_argument("--dot", action="store_true", default=d(False), help="emit Graphviz DOT where a tree or graph is produced")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _globals(defaults=False)
    parser = argparse.ArgumentParser(prog="tagprelie", description="Tree adjunction and grafting as pre-Lie products.", parents=[_globals(True)])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tree", parents=[common], help="parse, render or export a tree")
    p.add_argument("action", choices=["parse", "render", "dot"])
    p.add_argument("text")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("adjoin", parents=[common], help="adjunction T ◁ S")
    p.add_argument("T")
    p.add_argument("S")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--all", action="store_true", help="sum over all sites and feet (default)")
    g.add_argument("--at", metavar="SITE", help="single adjunction at this path of T")
    p.add_argument("--foot", metavar="FOOT", help="foot path in S for --at")
    p.add_argument("--labeled", action="store_true", help="labels must match at site, root and foot")
    p.add_argument("--foot-policy", choices=["all_leaves", "matching_label_leaves"])
    p.set_defaults(func=cmd_adjoin)

    p = sub.add_parser("graft", parents=[common], help="grafting T ◁ S (nonplanar)")
    p.add_argument("T")
    p.add_argument("S")
    p.add_argument("--label", help="only graft at nodes with this label")
    p.set_defaults(func=cmd_graft)

    p = sub.add_parser("bracket", parents=[common], help="[x, y] = x◁y - y◁x")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--op", default="adjoin", choices=["adjoin", "graft"])
    p.add_argument("--labeled", action="store_true")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("associator", parents=[common], help="(a◁b)◁c - a◁(b◁c)")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c")
    p.add_argument("--op", default="adjoin", choices=["adjoin", "graft"])
    p.add_argument("--labeled", action="store_true")
    p.add_argument("--vinberg", action="store_true", help="print A(a,b,c) - A(a,c,b) instead")
    p.set_defaults(func=cmd_associator)

    p = sub.add_parser("check", parents=[common], help="exhaustive identity checks")
    p.add_argument("what", choices=["vinberg", "jacobi", "antisymmetry", "coeffsum", "grading"])
    p.add_argument("--op", default="adjoin", help="adjoin or graft; for grading: single or double")
    p.add_argument("--max-nodes", type=int, default=4)
    p.add_argument("--max-degree", type=int, default=10, help="degree bound for the double-vertex grading check")
    p.add_argument("--shape", choices=["full-binary", "unary-binary"], default="full-binary", help="adjunction universe")
    p.add_argument("--labels", default="ab", help="label alphabet for the grafting universe")
    p.add_argument("--scheme", choices=[s.value for s in gradings.DegreeScheme])
    p.add_argument("--sample", type=int, help="check a seeded random subset of this many trees")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("enum", parents=[common], help="basis trees per degree")
    p.add_argument("--class", dest="cls", default="Tprime", help="binary, T or Tprime")
    p.add_argument("--degrees", default="0..10", help="A..B or a single degree")
    p.add_argument("--bound", type=int, default=gradings.DEFAULT_BOUND)
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("physics", parents=[common], help="flag/involution encoding")
    p.add_argument("action", choices=["encode", "split", "compose", "adjoin", "edge-insert"])
    p.add_argument("graphs", nargs="+", help="tree text, graph JSON or @file")
    p.add_argument("--edge", help="path of the lower end of the edge")
    p.add_argument("--labels", help="colors for the upper and lower flags, 'u,l'")
    p.add_argument("--flag", type=int, help="external down flag of the first graph (compose)")
    p.add_argument("--to-flag", type=int, help="root flag of the second graph (compose; default its root)")
    p.add_argument("--site", help="adjunction site path in T")
    p.add_argument("--foot", help="foot leaf path in S")
    p.add_argument("--all", action="store_true", help="sum over all sites and feet")
    p.add_argument("--side", choices=["left", "right"], default="left", help="edge-insert: side of the new child")
    p.set_defaults(func=cmd_physics)

    p = sub.add_parser("tag", parents=[common], help="grammar validation and derivation")
    p.add_argument("action", choices=["validate", "lexicalized", "derive", "enumerate"])
    p.add_argument("grammar", help="watched-has, ftag, inline JSON or a JSON file")
    p.add_argument("derivation", nargs="?", help="derivation JSON or @file (derive)")
    p.add_argument("--max-steps", type=int, default=1)
    p.add_argument("--feature-policy", choices=list(grammar.FEATURE_POLICIES), default="license")
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("fixtures", parents=[common], help="rerun the worked examples against goldens")
    p.add_argument("--only", help="comma-separated fixture names")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    out = Out(args)
    try:
        return args.func(args, out)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except (TreeError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
