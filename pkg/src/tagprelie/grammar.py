"""Tree-adjoining grammars: the 5-tuple, validation, and derivations."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Sequence

from .physics import feature_check
from .prelie import adjoin_at
from .trees import (
    Adjoin,
    Path,
    Tree,
    TreeError,
    as_tree,
    leaf_paths,
    parse_tree,
    paths,
    replace_at,
    subtree_at,
)


class GrammarError(TreeError):
    pass


class DerivationError(GrammarError):
    def __init__(self, step: int, path: Sequence[int] | None, message: str):
        where = f" at {list(path)}" if path is not None else ""
        super().__init__(f"step {step}{where}: {message}")
        self.step = step
        self.path = tuple(path) if path is not None else None


class BudgetExceeded(GrammarError):
    pass


def _implicit_foot(t: Tree) -> tuple[Tree, Path | None]:
    """Mark a lone feature-bearing leaf matching the root as the foot.

    Some drawings omit the asterisk on an auxiliary tree's foot and only
    show its feature; such a leaf is read as the foot.
    """
    if any(subtree_at(t, p).foot for p in leaf_paths(t)):
        return t, None
    cands = [
        p for p in leaf_paths(t)
        if p and subtree_at(t, p).label == t.label and (subtree_at(t, p).top or subtree_at(t, p).bottom) and not subtree_at(t, p).subst
    ]
    if len(cands) != 1:
        return t, None
    (p,) = cands
    leaf = subtree_at(t, p)
    feat = leaf.bottom if leaf.bottom is not None else leaf.top
    return replace_at(t, p, leaf.with_(foot=True, top=None, bottom=feat)), p


@dataclass(frozen=True)
class TagGrammar:
    sigma: frozenset[str]
    n: frozenset[str]
    start: str
    initial: tuple[Tree, ...] = ()
    auxiliary: tuple[Tree, ...] = ()
    implicit_feet: tuple[tuple[int, Path], ...] = ()

    @classmethod
    def build(cls, sigma, n, start, initial=(), auxiliary=()) -> "TagGrammar":
        init = tuple(as_tree(t) for t in initial)
        aux, implicit = [], []
        for i, t in enumerate(as_tree(t) for t in auxiliary):
            t, p = _implicit_foot(t)
            aux.append(t)
            if p is not None:
                implicit.append((i, p))
        return cls(frozenset(sigma), frozenset(n), start, init, tuple(aux), tuple(implicit))

    @classmethod
    def from_json(cls, data: dict | str) -> "TagGrammar":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.build(data.get("sigma", []), data.get("n", []), data.get("start", "S"), [parse_tree(t) for t in data.get("initial", [])], [parse_tree(t) for t in data.get("auxiliary", [])])

    @classmethod
    def load(cls, path: str | FsPath) -> "TagGrammar":
        return cls.from_json(FsPath(path).read_text(encoding="utf-8"))

    def to_json(self) -> dict:
        return {
            "sigma": sorted(self.sigma),
            "n": sorted(self.n),
            "start": self.start,
            "initial": [str(t) for t in self.initial],
            "auxiliary": [str(t) for t in self.auxiliary],
        }


@dataclass(frozen=True)
class Violation:
    kind: str  # "grammar", "initial" or "auxiliary"
    index: int | None
    path: Path | None
    message: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "index": self.index, "path": None if self.path is None else list(self.path), "message": self.message}

    def __str__(self) -> str:
        where = "" if self.index is None else f" {self.kind}[{self.index}]"
        at = "" if self.path is None else f" at {list(self.path)}"
        return f"{where.strip() or self.kind}{at}: {self.message}"


def _tree_violations(g: TagGrammar, kind: str, i: int, t: Tree) -> list[Violation]:
    out = []
    feet = []
    for p in paths(t):
        s = subtree_at(t, p)
        def bad(msg: str) -> None:
            out.append(Violation(kind, i, p, msg))
        if len(s.children) > 2:
            bad(f"node has {len(s.children)} children; elementary trees are unary-binary")
        if s.label not in g.sigma and s.label not in g.n:
            bad(f"label {s.label!r} is neither terminal nor nonterminal")
        if s.children and s.label not in g.n:
            bad(f"interior node labeled {s.label!r}, which is not a nonterminal")
        if s.foot:
            feet.append(p)
            continue
        if not s.children and s.label in g.n and not s.subst:
            bad(f"nonterminal leaf {s.label!r} is not marked for substitution")
        if s.subst and s.label in g.sigma:
            bad(f"terminal leaf {s.label!r} is marked for substitution")
    if kind == "initial" and feet:
        out.append(Violation(kind, i, feet[0], "initial tree has a foot node"))
    if kind == "auxiliary":
        if len(feet) != 1:
            out.append(Violation(kind, i, None, f"auxiliary tree has {len(feet)} foot nodes, expected exactly 1"))
        for p in feet:
            if subtree_at(t, p).label != t.label:
                out.append(Violation(kind, i, p, f"foot label {subtree_at(t, p).label!r} differs from root label {t.label!r}"))
    return out


def validate_grammar(g: TagGrammar) -> list[Violation]:
    """All violated well-formedness clauses; empty means valid."""
    out = []
    overlap = g.sigma & g.n
    if overlap:
        out.append(Violation("grammar", None, None, f"symbols in both terminals and nonterminals: {sorted(overlap)}"))
    if g.start not in g.n:
        out.append(Violation("grammar", None, None, f"start symbol {g.start!r} is not a nonterminal"))
    for i, t in enumerate(g.initial):
        out.extend(_tree_violations(g, "initial", i, t))
    for i, t in enumerate(g.auxiliary):
        out.extend(_tree_violations(g, "auxiliary", i, t))
    return out


def is_lexicalized(g: TagGrammar) -> list[Violation]:
    """Elementary trees without a terminal leaf."""
    out = []
    for kind, trees in (("initial", g.initial), ("auxiliary", g.auxiliary)):
        for i, t in enumerate(trees):
            if not any(subtree_at(t, p).label in g.sigma for p in leaf_paths(t)):
                out.append(Violation(kind, i, None, "no terminal leaf"))
    return out


# -- derivations --------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    op: str  # "adjoin" or "substitute"
    target: Path
    tree: int
    foot: Path | None = None

    def to_json(self) -> dict:
        d = {"op": self.op, "target": list(self.target), "tree": self.tree}
        if self.foot is not None:
            d["foot"] = list(self.foot)
        return d


@dataclass(frozen=True)
class Derivation:
    base: int
    steps: tuple[Step, ...] = ()

    @classmethod
    def from_json(cls, data: dict | str) -> "Derivation":
        if isinstance(data, str):
            data = json.loads(data)
        steps = []
        for s in data.get("steps", []):
            foot = s.get("foot")
            steps.append(Step(s["op"], tuple(s["target"]), s["tree"], None if foot is None else tuple(foot)))
        return cls(data.get("base", 0), tuple(steps))

    def to_json(self) -> dict:
        return {"base": self.base, "steps": [s.to_json() for s in self.steps]}


def substitute(t: Tree | str, leaf: Sequence[int], s: Tree | str) -> Tree:
    t, s = as_tree(t), as_tree(s)
    leaf = tuple(leaf)
    target = subtree_at(t, leaf)
    if not target.subst:
        raise GrammarError(f"node at {list(leaf)} is not marked for substitution")
    if target.label != s.label:
        raise GrammarError(f"substitution label mismatch: {target.label!r} vs {s.label!r}")
    return replace_at(t, leaf, s)


def unresolved_required(t: Tree) -> list[Path]:
    return [p for p in paths(t) if subtree_at(t, p).adjoin is Adjoin.REQUIRED]


def feature_mismatches(t: Tree) -> list[Path]:
    out = []
    for p in paths(t):
        s = subtree_at(t, p)
        if s.top and s.bottom and feature_check(s.top, s.bottom) == "mismatch":
            out.append(p)
    return out


FEATURE_POLICIES = ("license", "require")


def _foot_path(S: Tree) -> Path:
    feet = [p for p in leaf_paths(S) if subtree_at(S, p).foot]
    if len(feet) != 1:
        raise GrammarError(f"auxiliary tree {S} has {len(feet)} foot nodes")
    return feet[0]


def apply_step(g: TagGrammar, t: Tree, step: Step, k: int = 0) -> Tree:
    if step.op == "adjoin":
        if not 0 <= step.tree < len(g.auxiliary):
            raise DerivationError(k, step.target, f"no auxiliary tree {step.tree}")
        S = g.auxiliary[step.tree]
        try:
            v = subtree_at(t, step.target)
        except TreeError as e:
            raise DerivationError(k, step.target, str(e)) from None
        if v.adjoin is Adjoin.FORBIDDEN:
            raise DerivationError(k, step.target, "adjunction forbidden at this node")
        if v.label != S.label:
            raise DerivationError(k, step.target, f"site label {v.label!r} differs from auxiliary root {S.label!r}")
        foot = step.foot if step.foot is not None else _foot_path(S)
        f = subtree_at(S, foot)
        for upper, lower, what in ((v.top, S.top, "root"), (f.bottom, v.bottom, "foot")):
            if upper and lower and upper != lower:
                raise DerivationError(k, step.target, f"{what} features disagree: {upper} vs {lower}")
        try:
            return adjoin_at(t, step.target, S, foot)
        except TreeError as e:
            raise DerivationError(k, step.target, str(e)) from None
    if step.op == "substitute":
        if not 0 <= step.tree < len(g.initial):
            raise DerivationError(k, step.target, f"no initial tree {step.tree}")
        try:
            return substitute(t, step.target, g.initial[step.tree])
        except TreeError as e:
            raise DerivationError(k, step.target, str(e)) from None
    raise DerivationError(k, None, f"unknown operation {step.op!r}")


def derive(g: TagGrammar, d: Derivation, feature_policy: str = "license") -> Tree:
    """Fold the steps of ``d`` over its base tree.

    Adjoining at an ``@oa`` node consumes the requirement; any left over at
    the end rejects the derivation.  Under ``require`` a remaining feature
    mismatch (top and bottom of one node disagreeing) also rejects it.
    """
    if feature_policy not in FEATURE_POLICIES:
        raise GrammarError(f"feature policy must be one of {FEATURE_POLICIES}")
    if not 0 <= d.base < len(g.initial):
        raise DerivationError(0, None, f"no initial tree {d.base}")
    t = g.initial[d.base]
    for k, step in enumerate(d.steps):
        t = apply_step(g, t, step, k)
    end = len(d.steps)
    left = unresolved_required(t)
    if left:
        raise DerivationError(end, left[0], "obligatory adjunction left unresolved")
    if feature_policy == "require":
        bad = feature_mismatches(t)
        if bad:
            raise DerivationError(end, bad[0], "feature mismatch left unresolved")
    return t


def successors(g: TagGrammar, t: Tree) -> list[Tree]:
    out = []
    for p in paths(t):
        v = subtree_at(t, p)
        if v.subst:
            for j, s in enumerate(g.initial):
                if s.label == v.label:
                    out.append(substitute(t, p, s))
            continue
        if v.adjoin is Adjoin.FORBIDDEN:
            continue
        for j in range(len(g.auxiliary)):
            try:
                out.append(apply_step(g, t, Step("adjoin", p, j)))
            except GrammarError:
                pass
    return out


def enumerate_derived(g: TagGrammar, max_steps: int, budget: int = 10_000) -> list[Tree]:
    """Every tree reachable from an initial tree in at most ``max_steps`` operations."""
    if max_steps < 0:
        raise GrammarError("max_steps must be non-negative")
    seen = {str(t): t for t in g.initial}
    frontier = deque((t, 0) for t in g.initial)
    while frontier:
        t, depth = frontier.popleft()
        if depth == max_steps:
            continue
        for nxt in successors(g, t):
            k = str(nxt)
            if k in seen:
                continue
            seen[k] = nxt
            if len(seen) > budget:
                raise BudgetExceeded(f"more than {budget} derived trees; raise the budget or lower max_steps")
            frontier.append((nxt, depth + 1))
    return [seen[k] for k in sorted(seen)]


# -- built-in grammars ----------------------------------------------------------

def watched_has() -> TagGrammar:
    return TagGrammar.build(
        sigma={"watched", "has"},
        n={"S", "NP", "VP", "V"},
        start="S",
        initial=[parse_tree("[S[NP!][VP[V[watched]][NP!]]]")],
        auxiliary=[parse_tree("[VP[V[has]][VP*]]")],
    )


def ftag() -> TagGrammar:
    return TagGrammar.build(
        sigma={"What_i", "Elizabeth", "lost", "t_i", "do", "you", "think"},
        n={"S", "C", "NP", "VP", "V", "Aux"},
        start="S",
        initial=[parse_tree("[S[C[What_i]][S{+WH}{-WH}[NP[Elizabeth]][VP[V[lost]][NP[t_i]]]]]")],
        # foot drawn without an asterisk; read as implicit
        auxiliary=[parse_tree("[S{+WH}[Aux[do]][S[NP[you]][VP[V[think]][S{-WH}]]]]")],
    )


BUILTIN = {"watched-has": watched_has, "ftag": ftag}


def load_grammar(source: str) -> TagGrammar:
    """A built-in grammar name, inline JSON, or a JSON file path."""
    if source in BUILTIN:
        return BUILTIN[source]()
    if source.lstrip().startswith("{"):
        return TagGrammar.from_json(source)
    return TagGrammar.load(source)
