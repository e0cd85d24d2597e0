"""Immutable planar trees, their bracket text format, and structural queries.

Text format::

    node    := "[" label? marker* node* "]"
    marker  := "*" | "!" | "=2" | "@na" | "@oa" | "{" ("+"|"-") NAME "}" | "{}"

``*`` marks a foot leaf, ``!`` a substitution leaf, ``=2`` a doubled node,
``@na``/``@oa`` forbid/require adjunction.  Feature tags fill the node's
``top`` then ``bottom`` slot in order (``{}`` skips a slot); on a foot leaf a
single tag is the ``bottom`` feature.  The empty tree is written ``∅`` or
``empty``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence, Union

Path = tuple[int, ...]


class TreeError(ValueError):
    """Invalid tree construction or addressing."""


class ParseError(TreeError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class Mode(str, enum.Enum):
    PLANAR = "planar"
    NONPLANAR = "nonplanar"


class Adjoin(str, enum.Enum):
    ALLOWED = "allowed"
    FORBIDDEN = "forbidden"
    REQUIRED = "required"


class LabelKind(str, enum.Enum):
    NONTERMINAL = "nonterminal"
    TERMINAL = "terminal"
    ANONYMOUS = "anonymous"


class _Empty:
    """The empty tree; unit on the right of both insertion operators."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EMPTY"

    def __reduce__(self):
        return (_Empty, ())


EMPTY = _Empty()
EMPTY_KEY = "∅"

_FEATURE = re.compile(r"[+-][^\s\[\]{}]+")


@dataclass(frozen=True, eq=False)
class Tree:
    label: str = ""
    children: tuple["Tree", ...] = ()
    foot: bool = False
    subst: bool = False
    doubling: int = 1
    adjoin: Adjoin = Adjoin.ALLOWED
    top: str | None = None
    bottom: str | None = None
    _text: str = field(default="", repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))
        if not isinstance(self.adjoin, Adjoin):
            object.__setattr__(self, "adjoin", Adjoin(self.adjoin))
        if self.foot and self.children:
            raise TreeError("foot marker on a non-leaf")
        if self.subst and self.children:
            raise TreeError("substitution marker on a non-leaf")
        if self.subst and not self.label:
            raise TreeError("substitution marker on an unlabeled node")
        if self.doubling not in (1, 2):
            raise TreeError(f"doubling must be 1 or 2, got {self.doubling}")
        if self.foot and self.top is not None:
            raise TreeError("a foot leaf carries only a bottom feature")
        for feat in (self.top, self.bottom):
            if feat is not None and not _FEATURE.fullmatch(feat):
                raise TreeError(f"malformed feature tag {feat!r}")
        object.__setattr__(self, "_text", self._head() + "".join(c._text for c in self.children) + "]")

    def _head(self) -> str:
        parts = ["[", self.label]
        if self.foot:
            parts.append("*")
        if self.subst:
            parts.append("!")
        if self.doubling == 2:
            parts.append("=2")
        if self.adjoin is Adjoin.FORBIDDEN:
            parts.append("@na")
        elif self.adjoin is Adjoin.REQUIRED:
            parts.append("@oa")
        if self.foot:
            if self.bottom is not None:
                parts.append("{%s}" % self.bottom)
        elif self.bottom is not None:
            parts.append("{%s}{%s}" % (self.top or "", self.bottom))
        elif self.top is not None:
            parts.append("{%s}" % self.top)
        return "".join(parts)

    def __eq__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return self._text == other._text

    def __hash__(self):
        return hash(self._text)

    def __str__(self) -> str:
        return self._text

    def __repr__(self) -> str:
        return f"Tree({self._text!r})"

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def with_(self, **changes) -> "Tree":
        """Copy with some fields replaced."""
        fields = dict(
            label=self.label,
            children=self.children,
            foot=self.foot,
            subst=self.subst,
            doubling=self.doubling,
            adjoin=self.adjoin,
            top=self.top,
            bottom=self.bottom,
        )
        fields.update(changes)
        return Tree(**fields)


TreeLike = Union[Tree, _Empty]


def node(label: str = "", *children: Tree, **kw) -> Tree:
    """Shorthand constructor: ``node("a", node("b"), node("c"))``."""
    return Tree(label, tuple(children), **kw)


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<open>\[)
  | (?P<close>\])
  | (?P<foot>\*)
  | (?P<subst>!)
  | (?P<double>=(?P<dcount>\d+))
  | (?P<adjoin>@(?P<aflag>na|oa))
  | (?P<feat>\{(?P<fval>[^{}]*)\})
  | (?P<label>[^\s\[\]*!=@{}]+)
    """,
    re.VERBOSE,
)


def _tokens(text: str) -> list[tuple[str, re.Match, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", len(text[:pos].encode()))
        if m.lastgroup != "ws":
            kind = next(k for k in ("open", "close", "foot", "subst", "double", "adjoin", "feat", "label") if m.group(k) is not None)
            out.append((kind, m, len(text[:pos].encode())))
        pos = m.end()
    return out


def parse_tree(text: str) -> TreeLike:
    """Parse bracket text into a :class:`Tree` (or ``EMPTY``)."""
    stripped = text.strip()
    if stripped in (EMPTY_KEY, "empty"):
        return EMPTY
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty input", 0)
    pos = 0

    def parse_node() -> Tree:
        nonlocal pos
        kind, m, off = toks[pos]
        if kind != "open":
            raise ParseError(f"expected '[' but found {m.group(0)!r}", off)
        pos += 1
        label = ""
        if pos < len(toks) and toks[pos][0] == "label":
            label = toks[pos][1].group(0)
            pos += 1
        foot = subst = False
        doubling = 1
        adjoin = Adjoin.ALLOWED
        feats: list[str | None] = []
        while pos < len(toks) and toks[pos][0] not in ("open", "close"):
            kind, m, off = toks[pos]
            if kind == "foot":
                foot = True
            elif kind == "subst":
                subst = True
            elif kind == "double":
                doubling = int(m.group("dcount"))
                if doubling not in (1, 2):
                    raise ParseError(f"doubling must be 1 or 2, got {doubling}", off)
            elif kind == "adjoin":
                adjoin = Adjoin.FORBIDDEN if m.group("aflag") == "na" else Adjoin.REQUIRED
            elif kind == "feat":
                val = m.group("fval").strip()
                if val and not _FEATURE.fullmatch(val):
                    raise ParseError(f"malformed feature tag {m.group(0)!r}", off)
                if len(feats) == 2:
                    raise ParseError("more than two feature tags on one node", off)
                feats.append(val or None)
            else:
                raise ParseError(f"unexpected label {m.group(0)!r}", off)
            pos += 1
        marker_off = off if feats or foot or subst else None
        children = []
        while True:
            if pos >= len(toks):
                raise ParseError("unterminated node", len(text.encode()))
            if toks[pos][0] == "close":
                close_off = toks[pos][2]
                pos += 1
                break
            children.append(parse_node())
        if foot and children:
            raise ParseError("foot marker on a non-leaf", marker_off if marker_off is not None else close_off)
        if subst and children:
            raise ParseError("substitution marker on a non-leaf", marker_off if marker_off is not None else close_off)
        if foot:
            if len(feats) > 1:
                raise ParseError("a foot leaf carries a single feature tag", close_off)
            top, bottom = None, (feats[0] if feats else None)
        else:
            feats += [None] * (2 - len(feats))
            top, bottom = feats
        try:
            return Tree(label, tuple(children), foot, subst, doubling, adjoin, top, bottom)
        except TreeError as exc:
            raise ParseError(str(exc), close_off) from None

    tree = parse_node()
    if pos != len(toks):
        raise ParseError("trailing input after tree", toks[pos][2])
    return tree


def serialize_tree(t: TreeLike) -> str:
    if t is EMPTY:
        return EMPTY_KEY
    return t._text


def as_tree(t: TreeLike | str) -> TreeLike:
    return parse_tree(t) if isinstance(t, str) else t


# -- canonical keys ---------------------------------------------------------

@lru_cache(maxsize=None)
def _nonplanar_key(t: Tree) -> str:
    return t._head() + "".join(sorted(_nonplanar_key(c) for c in t.children)) + "]"


def canonical_key(t: TreeLike, mode: Mode | str = Mode.PLANAR) -> str:
    if t is EMPTY:
        return EMPTY_KEY
    if Mode(mode) is Mode.PLANAR:
        return t._text
    return _nonplanar_key(t)


@lru_cache(maxsize=None)
def _sorted_tree(t: Tree) -> Tree:
    kids = sorted((_sorted_tree(c) for c in t.children), key=_nonplanar_key)
    return t.with_(children=tuple(kids))


def canonical_tree(t: TreeLike, mode: Mode | str = Mode.PLANAR) -> TreeLike:
    """Representative whose planar text equals its canonical key."""
    if t is EMPTY or Mode(mode) is Mode.PLANAR:
        return t
    return _sorted_tree(t)


# -- structural queries -----------------------------------------------------

def node_count(t: TreeLike) -> int:
    if t is EMPTY:
        return 0
    return 1 + sum(node_count(c) for c in t.children)


def leaf_count(t: TreeLike) -> int:
    if t is EMPTY:
        return 0
    if not t.children:
        return 1
    return sum(leaf_count(c) for c in t.children)


def edge_count(t: TreeLike) -> int:
    return max(node_count(t) - 1, 0)


def max_arity(t: Tree) -> int:
    return max([len(t.children)] + [max_arity(c) for c in t.children])


def is_unary_binary(t: TreeLike) -> bool:
    return t is EMPTY or max_arity(t) <= 2


def paths(t: Tree) -> Iterator[Path]:
    """All node addresses in preorder."""
    yield ()
    for i, c in enumerate(t.children):
        for p in paths(c):
            yield (i,) + p


def leaf_paths(t: Tree) -> list[Path]:
    return [p for p in paths(t) if not subtree_at(t, p).children]


def subtree_at(t: Tree, path: Sequence[int]) -> Tree:
    cur = t
    for depth, i in enumerate(path):
        if not 0 <= i < len(cur.children):
            raise TreeError(f"path {list(path)} leaves the tree at depth {depth}")
        cur = cur.children[i]
    return cur


def replace_at(t: Tree, path: Sequence[int], r: Tree) -> Tree:
    if not path:
        return r
    i = path[0]
    if not 0 <= i < len(t.children):
        raise TreeError(f"path {list(path)} leaves the tree")
    kids = list(t.children)
    kids[i] = replace_at(kids[i], path[1:], r)
    return t.with_(children=tuple(kids))


def labels(t: Tree) -> set[str]:
    return {subtree_at(t, p).label for p in paths(t)}


def strip_markers(t: Tree) -> Tree:
    """Labels and shape only; the form the figures are drawn in."""
    return Tree(t.label, tuple(strip_markers(c) for c in t.children))


def relabel(t: Tree, label: str = "") -> Tree:
    return t.with_(label=label, children=tuple(relabel(c, label) for c in t.children))


# -- enumeration ------------------------------------------------------------

@lru_cache(maxsize=None)
def planar_trees(n: int, max_children: int | None = None) -> tuple[Tree, ...]:
    """All anonymous planar trees with ``n`` nodes and bounded arity."""
    if n <= 0:
        return ()
    if n == 1:
        return (Tree(),)
    out = []
    for forest in _forests(n - 1, max_children):
        out.append(Tree("", forest))
    return tuple(out)


@lru_cache(maxsize=None)
def _forests(m: int, max_children: int | None, width: int = 0) -> tuple[tuple[Tree, ...], ...]:
    # ordered forests of total size m with at most max_children - width trees
    if m == 0:
        return ((),)
    if max_children is not None and width >= max_children:
        return ()
    out = []
    for first in range(1, m + 1):
        for head in planar_trees(first, max_children):
            for rest in _forests(m - first, max_children, width + 1):
                out.append((head,) + rest)
    return tuple(out)


def unary_binary_trees(n: int) -> tuple[Tree, ...]:
    return planar_trees(n, 2)


@lru_cache(maxsize=None)
def full_binary_trees(n: int) -> tuple[Tree, ...]:
    if n == 1:
        return (Tree(),)
    if n < 3 or n % 2 == 0:
        return ()
    out = []
    for k in range(1, n - 1, 2):
        for left in full_binary_trees(k):
            for right in full_binary_trees(n - 1 - k):
                out.append(Tree("", (left, right)))
    return tuple(out)


def _label_all(t: Tree, choices: Sequence[str]) -> list[Tree]:
    kid_options = [_label_all(c, choices) for c in t.children]
    out = []
    for lab in choices:
        for kids in product(*kid_options):
            out.append(t.with_(label=lab, children=tuple(kids)))
    return out


def labeled_nonplanar_trees(n: int, label_set: Sequence[str]) -> list[Tree]:
    """Nonplanar rooted trees of any arity with ``n`` nodes, one representative each."""
    seen: dict[str, Tree] = {}
    for shape in planar_trees(n):
        for t in _label_all(shape, list(label_set)):
            k = _nonplanar_key(t)
            if k not in seen:
                seen[k] = _sorted_tree(t)
    return [seen[k] for k in sorted(seen)]
