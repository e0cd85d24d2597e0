"""Insertion operators on trees, the induced bracket, and identity checkers.

Two basis-level products are provided:

* :func:`graft` -- attach ``S`` as a new child of each node of ``T``
  (nonplanar, labeled, any arity);
* :func:`adjoin_all` -- tree adjunction of ``S`` at each eligible node of
  ``T``, reattaching the displaced children at each eligible foot leaf of
  ``S`` (planar, unary-binary).

Both are wrapped in :class:`Operator`, which extends them bilinearly and
memoizes basis products.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Sequence

from .sums import FormalSum, bilinear_extend, format_sum, key_tree
from .trees import (
    EMPTY,
    EMPTY_KEY,
    Mode,
    Path,
    Tree,
    TreeError,
    TreeLike,
    as_tree,
    canonical_key,
    is_unary_binary,
    leaf_count,
    leaf_paths,
    node_count,
    paths,
    replace_at,
    subtree_at,
)


class ArityError(TreeError):
    pass


class LabelMismatch(TreeError):
    pass


class Labeling(str, enum.Enum):
    UNLABELED = "unlabeled"
    LABELED = "labeled"


class FootPolicy(str, enum.Enum):
    ALL_LEAVES = "all_leaves"
    MATCHING_LABEL_LEAVES = "matching_label_leaves"


@dataclass(frozen=True)
class AdjunctionConfig:
    labeling: Labeling = Labeling.UNLABELED
    foot_policy: FootPolicy | None = None
    allow_leaf_sites: bool = True

    def __post_init__(self):
        object.__setattr__(self, "labeling", Labeling(self.labeling))
        if self.foot_policy is None:
            default = FootPolicy.MATCHING_LABEL_LEAVES if self.labeling is Labeling.LABELED else FootPolicy.ALL_LEAVES
            object.__setattr__(self, "foot_policy", default)
        else:
            object.__setattr__(self, "foot_policy", FootPolicy(self.foot_policy))


UNLABELED = AdjunctionConfig()
LABELED = AdjunctionConfig(Labeling.LABELED)


# -- grafting ---------------------------------------------------------------

# canonical nonplanar key -> (label, head text, sorted child keys)
_STRUCT: dict[str, tuple[str, str, tuple[str, ...]]] = {}


def _struct(key: str) -> tuple[str, str, tuple[str, ...]]:
    hit = _STRUCT.get(key)
    if hit is None:
        t = key_tree(key)
        hit = _STRUCT[key] = (t.label, t._head(), tuple(canonical_key(c, Mode.NONPLANAR) for c in t.children))
    return hit


@lru_cache(maxsize=1 << 21)
def _graft_keys(tk: str, sk: str, label: str | None) -> tuple[str, ...]:
    lab, head, kids = _struct(tk)
    out = []
    if label is None or lab == label:
        new_kids = tuple(sorted(kids + (sk,)))
        k = head + "".join(new_kids) + "]"
        _STRUCT.setdefault(k, (lab, head, new_kids))
        out.append(k)
    for i, ck in enumerate(kids):
        rest = kids[:i] + kids[i + 1 :]
        for grafted in _graft_keys(ck, sk, label):
            new_kids = tuple(sorted(rest + (grafted,)))
            k = head + "".join(new_kids) + "]"
            _STRUCT.setdefault(k, (lab, head, new_kids))
            out.append(k)
    return tuple(out)


def _graft_key_sum(tk: str, sk: str, label: str | None = None) -> FormalSum:
    if EMPTY_KEY in (tk, sk):
        return FormalSum.from_keys({tk: 1}, Mode.NONPLANAR)
    counts: dict[str, int] = {}
    for k in _graft_keys(tk, sk, label):
        counts[k] = counts.get(k, 0) + 1
    return FormalSum.from_keys(counts, Mode.NONPLANAR)


def _graft_sum(T: TreeLike, S: TreeLike, label: str | None) -> FormalSum:
    T, S = as_tree(T), as_tree(S)
    return _graft_key_sum(canonical_key(T, Mode.NONPLANAR), canonical_key(S, Mode.NONPLANAR), label)


def graft(T: TreeLike, S: TreeLike) -> FormalSum:
    """Sum over nodes of ``T`` of ``T`` with ``S`` hung below that node."""
    return _graft_sum(T, S, None)


def graft_restricted(T: TreeLike, S: TreeLike, label: str) -> FormalSum:
    """Grafting only at nodes of ``T`` labeled ``label``."""
    return _graft_sum(T, S, label)


# -- adjunction -------------------------------------------------------------

def _assemble(T: Tree, site: Path, S: Tree, foot: Path) -> Tree:
    v = subtree_at(T, site)
    f = subtree_at(S, foot)
    at_root = not site
    root_feats = (v.top, S.top) if not at_root else (S.top, S.bottom)
    foot_feats = (f.bottom, v.bottom if not at_root else v.top)
    if not foot:
        if any(x is not None for x in (v.top, v.bottom, S.top, S.bottom)):
            raise TreeError("features on a single-node auxiliary tree are not supported")
        return replace_at(T, site, S.with_(children=v.children, foot=False))
    if not at_root and S.bottom is not None:
        raise TreeError("root of an auxiliary tree carries only a top feature")
    if at_root and v.bottom is not None:
        raise TreeError("adjoining at a root with a bottom feature would drop it")
    new_foot = f.with_(children=v.children, foot=False, top=foot_feats[0], bottom=foot_feats[1])
    body = replace_at(S, foot, new_foot)
    body = body.with_(top=root_feats[0], bottom=root_feats[1])
    return replace_at(T, site, body)


def adjoin_at(T: TreeLike, site: Sequence[int], S: TreeLike, foot: Sequence[int]) -> Tree:
    """Replace the node of ``T`` at ``site`` by ``S``; its children move under the foot.

    Labels at the site, the root of ``S`` and the foot must agree.
    """
    T, S = as_tree(T), as_tree(S)
    site, foot = tuple(site), tuple(foot)
    v = subtree_at(T, site)
    f = subtree_at(S, foot)
    if f.children:
        raise TreeError(f"foot {list(foot)} is not a leaf")
    if not (v.label == S.label == f.label):
        raise LabelMismatch(f"site {v.label!r}, root {S.label!r} and foot {f.label!r} differ")
    return _assemble(T, site, S, foot)


def adjunction_sites(T: Tree, S: Tree, cfg: AdjunctionConfig = UNLABELED) -> list[Path]:
    out = []
    for p in paths(T):
        v = subtree_at(T, p)
        if not cfg.allow_leaf_sites and not v.children:
            continue
        if cfg.labeling is Labeling.LABELED and v.label != S.label:
            continue
        out.append(p)
    return out


def adjunction_feet(S: Tree, cfg: AdjunctionConfig = UNLABELED) -> list[Path]:
    feet = leaf_paths(S)
    if cfg.foot_policy is FootPolicy.MATCHING_LABEL_LEAVES:
        feet = [p for p in feet if subtree_at(S, p).label == S.label]
    return feet


def adjoin_all(T: TreeLike, S: TreeLike, cfg: AdjunctionConfig = UNLABELED) -> FormalSum:
    """Sum of all adjunctions of ``S`` into ``T`` over sites and feet."""
    T, S = as_tree(T), as_tree(S)
    if S is EMPTY or T is EMPTY:
        return FormalSum([(T, 1)])
    if cfg.labeling is Labeling.UNLABELED:
        for name, tree in (("first", T), ("second", S)):
            if not is_unary_binary(tree):
                raise ArityError(f"{name} argument is not unary-binary: {tree}")
    feet = adjunction_feet(S, cfg)
    return FormalSum((_assemble(T, v, S, f), 1) for v in adjunction_sites(T, S, cfg) for f in feet)


# -- operators --------------------------------------------------------------

class Operator:
    """A bilinear product on formal sums, given by its basis-level map."""

    def __init__(self, name: str, basis: Callable[[TreeLike, TreeLike], FormalSum], mode: Mode | str, key_basis=None):
        self.name = name
        self.basis = basis
        self.mode = Mode(mode)
        self.cache: dict = {}
        self._ext = bilinear_extend(basis, self.mode, self.cache, key_basis)

    def lift(self, x) -> FormalSum:
        if isinstance(x, FormalSum):
            return x
        return FormalSum([(as_tree(x), 1)], self.mode)

    def __call__(self, x, y) -> FormalSum:
        return self._ext(self.lift(x), self.lift(y))

    def __repr__(self) -> str:
        return f"Operator({self.name!r})"


def adjoin_operator(cfg: AdjunctionConfig = UNLABELED) -> Operator:
    name = "adjoin" if cfg == UNLABELED else f"adjoin[{cfg.labeling.value},{cfg.foot_policy.value}]"
    return Operator(name, lambda t, s: adjoin_all(t, s, cfg), Mode.PLANAR)


def graft_operator(label: str | None = None) -> Operator:
    if label is None:
        return Operator("graft", graft, Mode.NONPLANAR, _graft_key_sum)
    return Operator(f"graft[{label}]", lambda t, s: graft_restricted(t, s, label), Mode.NONPLANAR, lambda tk, sk: _graft_key_sum(tk, sk, label))


def bracket(x, y, op: Operator) -> FormalSum:
    return op(x, y) - op(y, x)


def associator(a, b, c, op: Operator) -> FormalSum:
    return op(op(a, b), c) - op(a, op(b, c))


def vinberg_defect(a, b, c, op: Operator) -> FormalSum:
    return associator(a, b, c, op) - associator(a, c, b, op)


def jacobi_sum(a, b, c, op: Operator) -> FormalSum:
    return (
        bracket(a, bracket(b, c, op), op)
        + bracket(b, bracket(c, a, op), op)
        + bracket(c, bracket(a, b, op), op)
    )


# -- exhaustive checks ------------------------------------------------------

@dataclass
class Witness:
    args: tuple[str, ...]
    value: FormalSum

    def to_json(self) -> dict:
        return {"args": list(self.args), "value": self.value.to_json()}


@dataclass
class Report:
    check: str
    op: str
    universe_size: int
    checked: int = 0
    failures: list[Witness] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "op": self.op,
            "universe": self.universe_size,
            "checked": self.checked,
            "passed": self.passed,
            "failures": [w.to_json() for w in self.failures],
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else f"FAIL ({len(self.failures)} witnesses)"
        lines = [f"{self.check} [{self.op}] universe={self.universe_size} checked={self.checked}: {status}"]
        for w in self.failures[:5]:
            lines.append(f"  {', '.join(w.args)} -> {format_sum(w.value)}")
        return "\n".join(lines)


def _lifted(op: Operator, universe: Iterable[TreeLike]) -> list[tuple[str, FormalSum]]:
    out = {}
    for t in universe:
        s = op.lift(t)
        out[canonical_key(as_tree(t), op.mode)] = s
    return sorted(out.items())


def check_prelie(op: Operator, universe: Iterable[TreeLike], max_failures: int = 20) -> Report:
    """Vinberg identity on every triple drawn from ``universe``."""
    items = _lifted(op, universe)
    report = Report("vinberg", op.name, len(items))
    n = len(items)
    prod = {(i, j): op(items[i][1], items[j][1]) for i in range(n) for j in range(n)}
    for i in range(n):
        ka, a = items[i]
        for j in range(n):
            kb, b = items[j]
            for k in range(j + 1, n):
                kc, c = items[k]
                defect = (op(prod[i, j], c) - op(a, prod[j, k])) - (op(prod[i, k], b) - op(a, prod[k, j]))
                report.checked += 1
                if defect and len(report.failures) < max_failures:
                    report.failures.append(Witness((ka, kb, kc), defect))
    return report


def check_jacobi(op: Operator, universe: Iterable[TreeLike], max_failures: int = 20) -> Report:
    """Jacobi identity for the induced bracket; cyclic symmetry covers all orderings."""
    items = _lifted(op, universe)
    report = Report("jacobi", op.name, len(items))
    brackets: dict[tuple[str, str], FormalSum] = {}

    def br(ki, x, kj, y):
        key = (ki, kj)
        if key not in brackets:
            brackets[key] = bracket(x, y, op)
        return brackets[key]

    for (ka, a), (kb, b), (kc, c) in combinations_with_replacement(items, 3):
        total = (
            bracket(a, br(kb, b, kc, c), op)
            + bracket(b, br(kc, c, ka, a), op)
            + bracket(c, br(ka, a, kb, b), op)
        )
        report.checked += 1
        if total and len(report.failures) < max_failures:
            report.failures.append(Witness((ka, kb, kc), total))
    return report


def check_antisymmetry(op: Operator, universe: Iterable[TreeLike], max_failures: int = 20) -> Report:
    items = _lifted(op, universe)
    report = Report("antisymmetry", op.name, len(items))
    for ka, a in items:
        for kb, b in items:
            total = bracket(a, b, op) + bracket(b, a, op)
            report.checked += 1
            if total and len(report.failures) < max_failures:
                report.failures.append(Witness((ka, kb), total))
    return report


def check_coefficient_sum(universe: Iterable[Tree], cfg: AdjunctionConfig = UNLABELED, max_failures: int = 20) -> Report:
    """``coefficient_sum(T ◁ S) == |T| * leaves(S)`` on every ordered pair."""
    trees = [as_tree(t) for t in universe]
    report = Report("coeffsum", "adjoin", len(trees))
    for T in trees:
        for S in trees:
            got = adjoin_all(T, S, cfg).coefficient_sum()
            report.checked += 1
            if got != node_count(T) * leaf_count(S) and len(report.failures) < max_failures:
                report.failures.append(Witness((str(T), str(S)), FormalSum([(T, got)])))
    return report


def single_node_diagnostics(T: TreeLike) -> dict[str, FormalSum]:
    """The insertions against the one-node tree used to rule out freeness."""
    T = as_tree(T)
    dot = Tree()
    op = adjoin_operator()
    return {
        "T<dot": op(T, dot),
        "dot<T": op(dot, T),
        "[T,dot]": bracket(T, dot, op),
        "expected T<dot": FormalSum([(T, node_count(T))]),
        "expected dot<T": FormalSum([(T, leaf_count(T))]),
        "expected [T,dot]": FormalSum([(T, node_count(T) - leaf_count(T))]),
    }


def distinct_vertex_terms(T1: Tree, T2: Tree, T3: Tree) -> list[Tree]:
    """Terms of ``(T1◁T2)◁T3`` where T2 and T3 land at distinct original nodes of T1.

    Built directly from pairs of disjoint sites, independent of the operator.
    """
    out = []
    sites = list(paths(T1))
    for s2 in sites:
        for s3 in sites:
            if s2 == s3:
                continue
            # descendants sort after ancestors; adjoining there first keeps the other path valid
            for f2 in leaf_paths(T2):
                for f3 in leaf_paths(T3):
                    first, second = (s3, s2) if s3 > s2 else (s2, s3)
                    ft1, tr1, ft2, tr2 = (f3, T3, f2, T2) if first == s3 else (f2, T2, f3, T3)
                    out.append(_assemble(_assemble(T1, first, tr1, ft1), second, tr2, ft2))
    return out


def coefficient(x: FormalSum, t: TreeLike) -> Fraction:
    return x[t]
