"""Degree functions, per-degree basis enumeration, and grading reports.

Three tree classes are enumerated:

``binary``
    anonymous full binary planar trees, graded by vertex count;
``T``
    full binary planar trees in which any node may be doubled, graded by
    doubled vertex count;
``Tprime``
    the subclass of ``T`` that occurs in adjunction: either every node is
    doubled, or (auxiliary trees) exactly the root and one leaf are single.

In the double-vertex encoding adjunction happens only at doubled nodes and
only with auxiliary second arguments; the site's two counts are handed to
the root and the foot of ``S``, so degrees add.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Sequence

from .prelie import UNLABELED, adjoin_all
from .sums import FormalSum, key_tree
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
    edge_count,
    full_binary_trees,
    leaf_paths,
    node_count,
    paths,
    replace_at,
    subtree_at,
)

DEFAULT_BOUND = 12


class GradingError(TreeError):
    pass


class BoundExceeded(GradingError):
    pass


class DegreeScheme(str, enum.Enum):
    VERTEX_COUNT = "vertex_count"
    EDGE_COUNT = "edge_count"
    DOUBLED_VERTEX_COUNT = "doubled_vertex_count"


class TreeClass(str, enum.Enum):
    BINARY_PLANAR_UNLABELED = "binary_planar_unlabeled"
    DOUBLE_VERTEX_ALL = "double_vertex_all"
    DOUBLE_VERTEX_TAG = "double_vertex_tag"

    @classmethod
    def parse(cls, name: str) -> "TreeClass":
        aliases = {"binary": cls.BINARY_PLANAR_UNLABELED, "T": cls.DOUBLE_VERTEX_ALL, "Tprime": cls.DOUBLE_VERTEX_TAG, "T'": cls.DOUBLE_VERTEX_TAG}
        return aliases.get(name) or cls(name)

    @property
    def scheme(self) -> DegreeScheme:
        if self is TreeClass.BINARY_PLANAR_UNLABELED:
            return DegreeScheme.VERTEX_COUNT
        return DegreeScheme.DOUBLED_VERTEX_COUNT


def doubled_vertex_count(t: TreeLike) -> int:
    if t is EMPTY:
        return 0
    return t.doubling + sum(doubled_vertex_count(c) for c in t.children)


def degree(t: TreeLike | str, scheme: DegreeScheme | str) -> int:
    t = as_tree(t)
    scheme = DegreeScheme(scheme)
    if t is EMPTY:
        return 0
    if scheme is DegreeScheme.VERTEX_COUNT:
        return node_count(t)
    if scheme is DegreeScheme.EDGE_COUNT:
        return edge_count(t)
    return doubled_vertex_count(t)


# -- class membership -------------------------------------------------------

def _is_full_binary(t: Tree) -> bool:
    return len(t.children) in (0, 2) and all(_is_full_binary(c) for c in t.children)


def single_nodes(t: Tree) -> list[Path]:
    return [p for p in paths(t) if subtree_at(t, p).doubling == 1]


def is_auxiliary(t: TreeLike) -> bool:
    """Double-vertex auxiliary pattern: only the root and one (other) leaf are single."""
    if t is EMPTY or not t.children:
        return False
    singles = single_nodes(t)
    return len(singles) == 2 and singles[0] == () and not subtree_at(t, singles[1]).children


def is_fully_doubled(t: TreeLike) -> bool:
    return t is not EMPTY and not single_nodes(t)


def in_class(t: TreeLike, cls: TreeClass | str) -> bool:
    cls = TreeClass.parse(cls) if isinstance(cls, str) else cls
    if t is EMPTY:
        return True
    if not _is_full_binary(t) or any(subtree_at(t, p).label for p in paths(t)):
        return False
    if cls is TreeClass.BINARY_PLANAR_UNLABELED:
        return not any(subtree_at(t, p).doubling == 2 for p in paths(t))
    if cls is TreeClass.DOUBLE_VERTEX_ALL:
        return True
    return is_fully_doubled(t) or is_auxiliary(t)


# -- enumeration ------------------------------------------------------------

def _with_doubling(t: Tree, marks: Sequence[int]) -> Tree:
    it = iter(marks)

    def go(s: Tree) -> Tree:
        d = next(it)
        kids = tuple(go(c) for c in s.children)
        return s.with_(doubling=d, children=kids)

    return go(t)


def _class_members(d: int, cls: TreeClass) -> list[Tree]:
    out: list[Tree] = []
    if cls is TreeClass.BINARY_PLANAR_UNLABELED:
        return list(full_binary_trees(d))
    if cls is TreeClass.DOUBLE_VERTEX_ALL:
        # n nodes with k doubled has degree n + k, k <= n
        for n in range(1, d + 1, 2):
            k = d - n
            if k > n:
                continue
            for shape in full_binary_trees(n):
                for marks in product((1, 2), repeat=n):
                    if marks.count(2) == k:
                        out.append(_with_doubling(shape, marks))
        return out
    # Tprime: all doubled (degree 2n) or auxiliary (degree 2n - 2, n >= 3)
    if d % 2:
        return out
    n_full = d // 2
    for shape in full_binary_trees(n_full):
        out.append(_with_doubling(shape, [2] * n_full))
    n_aux = d // 2 + 1
    for shape in full_binary_trees(n_aux) if n_aux >= 3 else ():
        order = list(paths(shape))
        for leaf in leaf_paths(shape):
            marks = [1 if p in ((), leaf) else 2 for p in order]
            out.append(_with_doubling(shape, marks))
    return out


def enumerate_trees(d: int, cls: TreeClass | str, bound: int = DEFAULT_BOUND) -> list[TreeLike]:
    """All members of ``cls`` of degree ``d``, sorted by canonical key."""
    cls = TreeClass.parse(cls) if isinstance(cls, str) else cls
    if d < 0:
        raise GradingError(f"negative degree {d}")
    if d > bound:
        raise BoundExceeded(f"degree {d} exceeds enumeration bound {bound}")
    if d == 0:
        return [EMPTY]
    members = {str(t): t for t in _class_members(d, cls)}
    return [members[k] for k in sorted(members)]


def dimensions(cls: TreeClass | str, degrees: Iterable[int], bound: int = DEFAULT_BOUND) -> dict[int, int]:
    return {d: len(enumerate_trees(d, cls, bound)) for d in degrees}


def mod4_violations(max_degree: int = 10, bound: int = DEFAULT_BOUND) -> list[str]:
    """Tprime trees breaking 'degree 0 mod 4 is auxiliary, 2 mod 4 is not'."""
    bad = []
    for d in range(2, max_degree + 1, 2):
        for t in enumerate_trees(d, TreeClass.DOUBLE_VERTEX_TAG, bound):
            if is_auxiliary(t) != (d % 4 == 0):
                bad.append(f"degree {d}: {t}")
    return bad


# -- double-vertex adjunction -----------------------------------------------

def _foot_of(S: Tree) -> Path:
    return single_nodes(S)[1]


def adjoin_double_vertex(T: TreeLike | str, S: TreeLike | str, site: Sequence[int], foot: Sequence[int] | None = None) -> Tree:
    """Adjoin auxiliary ``S`` at the doubled node ``site`` of ``T``.

    The site's upper count goes to the root of ``S`` and its lower count to
    the foot, so both become doubled interior nodes of the result.
    """
    T, S = as_tree(T), as_tree(S)
    site = tuple(site)
    v = subtree_at(T, site)
    if v.doubling != 2:
        raise GradingError(f"site {list(site)} is not a doubled node")
    if not is_auxiliary(S):
        raise GradingError(f"{S} is not auxiliary (root and exactly one leaf single)")
    expected = _foot_of(S)
    if foot is not None and tuple(foot) != expected:
        raise GradingError(f"foot {list(foot)} is not the single leaf {list(expected)}")
    f = subtree_at(S, expected)
    body = replace_at(S, expected, f.with_(children=v.children, doubling=2))
    return replace_at(T, site, body.with_(doubling=2))


def adjoin_double_all(T: TreeLike | str, S: TreeLike | str) -> FormalSum:
    """Sum over doubled sites; zero when ``S`` is not auxiliary."""
    T, S = as_tree(T), as_tree(S)
    if S is EMPTY or T is EMPTY:
        return FormalSum([(T, 1)])
    if not is_auxiliary(S):
        return FormalSum.zero()
    sites = [p for p in paths(T) if subtree_at(T, p).doubling == 2]
    return FormalSum((adjoin_double_vertex(T, S, p), 1) for p in sites)


def closure_violations(max_degree: int = 10, bound: int = DEFAULT_BOUND) -> list[str]:
    """Products of Tprime basis trees that leave the enumerated basis of the summed degree."""
    basis = {d: enumerate_trees(d, TreeClass.DOUBLE_VERTEX_TAG, bound) for d in range(2, max_degree + 1, 2)}
    keys = {d: {canonical_key(t) for t in ts} for d, ts in basis.items()}
    bad = []
    for dt, ts in basis.items():
        for ds, ss in basis.items():
            if dt + ds > max_degree:
                continue
            for T in ts:
                for S in ss:
                    for k in adjoin_double_all(T, S).support():
                        if k not in keys[dt + ds]:
                            bad.append(f"{T} ◁ {S} -> {k}")
    return bad


# -- grading reports --------------------------------------------------------

@dataclass
class GradingReport:
    op: str
    scheme: DegreeScheme
    bound: int
    pairs: int = 0
    offsets: dict[int, int] = field(default_factory=dict)
    examples: dict[int, str] = field(default_factory=dict)
    degree_zero: list[str] = field(default_factory=list)

    @property
    def constant_offset(self) -> int | None:
        return next(iter(self.offsets)) if len(self.offsets) == 1 else None

    @property
    def degree_zero_ambiguous(self) -> bool:
        return len(self.degree_zero) > 1

    @property
    def preserves_grading(self) -> bool:
        return self.constant_offset == 0

    def to_json(self) -> dict:
        return {
            "op": self.op,
            "scheme": self.scheme.value,
            "bound": self.bound,
            "pairs": self.pairs,
            "offsets": {str(k): v for k, v in sorted(self.offsets.items())},
            "constant_offset": self.constant_offset,
            "degree_zero_basis": self.degree_zero,
            "degree_zero_ambiguous": self.degree_zero_ambiguous,
            "examples": {str(k): v for k, v in sorted(self.examples.items())},
        }

    def summary(self) -> str:
        off = self.constant_offset
        head = f"grading [{self.op}, {self.scheme.value}] pairs={self.pairs}: "
        head += f"constant offset {off:+d}" if off is not None else f"offsets vary {sorted(self.offsets)}"
        if self.degree_zero_ambiguous:
            head += f"; degree 0 spanned by {len(self.degree_zero)} distinct trees: {', '.join(self.degree_zero)}"
        return head


GRADING_OPS = ("single", "double")


def _single_universe(bound: int) -> list[Tree]:
    return [t for n in range(1, bound + 1) for t in full_binary_trees(n)]


def _double_universe(bound: int) -> list[Tree]:
    return [t for d in range(2, bound + 1, 2) for t in enumerate_trees(d, TreeClass.DOUBLE_VERTEX_TAG, max(bound, d))]


def grading_report(op: str, scheme: DegreeScheme | str, bound: int) -> GradingReport:
    """Offsets ``deg(term) - deg(T) - deg(S)`` over all nonempty products up to ``bound``.

    ``single`` is unlabeled adjunction on full binary trees with at most
    ``bound`` nodes; ``double`` is double-vertex adjunction on Tprime trees
    of degree at most ``bound``.  The degree-0 part of the basis (with the
    empty tree) is listed so the ambiguity of edge grading shows up.
    """
    scheme = DegreeScheme(scheme)
    if op == "single":
        universe = _single_universe(bound)
        product_fn: Callable = lambda t, s: adjoin_all(t, s, UNLABELED)
    elif op == "double":
        universe = _double_universe(bound)
        product_fn = adjoin_double_all
    else:
        raise GradingError(f"unknown grading op {op!r}; expected one of {GRADING_OPS}")
    report = GradingReport(op, scheme, bound)
    report.degree_zero = [EMPTY_KEY] + sorted(str(t) for t in universe if degree(t, scheme) == 0)
    for T in universe:
        dT = degree(T, scheme)
        for S in universe:
            result = product_fn(T, S)
            if not result:
                continue
            report.pairs += 1
            dS = degree(S, scheme)
            for k in result.support():
                off = degree(key_tree(k), scheme) - dT - dS
                report.offsets[off] = report.offsets.get(off, 0) + 1
                report.examples.setdefault(off, f"{T} ◁ {S} -> {k}")
    return report
