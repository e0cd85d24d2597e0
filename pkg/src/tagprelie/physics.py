"""Trees as corollas joined by flags (half-edges) under an involution.

Every corolla lists its flags in slot order.  Slot 0 is the flag pointing
toward the parent; slots 1.. point to the children in planar order.  The
root's slot-0 flag is external (a fixed point of the involution).  A foot
corolla additionally owns an external slot-1 "foot-down" flag, which is
where the displaced lower part of the host tree is joined during adjunction.

Features sit on flags.  For a non-root node ``v`` the parent's down flag
carries ``v.top`` and ``v``'s own up flag carries ``v.bottom``; the root's
up flag carries ``root.top``.  A foot leaf's bottom feature sits on its
foot-down flag.  Splittability (``@na``/``@oa``) lives on a node's up flag
and is mirrored on the parent's down flag.

Adjunction at a non-root node ``v`` splits the edge above ``v`` into the
upper part ``T1`` and the lower part ``T2`` and forms
``(T1 ∘ S) ∘ T2``.  The foot corolla of ``S`` and the root of ``T2`` stay
separate corollas, so a result has ``|T| + |S|`` corollas;
``physics_to_tree(..., contract=True)`` merges each joined foot with its
child and recovers the node-level tree with ``|T| + |S| - 1`` nodes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

from .sums import FormalSum
from .trees import (
    EMPTY,
    Adjoin,
    Path,
    Tree,
    TreeError,
    TreeLike,
    as_tree,
    leaf_paths,
    node_count,
    paths,
    replace_at,
    subtree_at,
)


class PhysicsError(TreeError):
    pass


class ColorMismatch(PhysicsError):
    pass


class FeatureError(PhysicsError):
    pass


@dataclass(frozen=True)
class Flag:
    id: int
    owner: int
    slot: int
    feature: str | None = None
    split: Adjoin = Adjoin.ALLOWED
    color: str | None = None


@dataclass(frozen=True)
class Corolla:
    id: int
    label: str
    flags: tuple[int, ...]
    foot: bool = False
    subst: bool = False
    doubling: int = 1
    bottom: str | None = None  # second feature of a root; no flag is left to carry it


@dataclass(frozen=True)
class SplitSpec:
    """Split the edge above corolla ``edge``; colors for the upper and lower flags."""

    edge: int
    labels: tuple[str | None, str | None] | None = None


@dataclass(frozen=True, eq=False)
class PhysicsGraph:
    corollas: tuple[Corolla, ...]
    flags: tuple[Flag, ...]
    involution: tuple[tuple[int, int], ...]  # (f, I(f)) for every flag

    def __post_init__(self):
        inv = dict(self.involution)
        ids = {f.id for f in self.flags}
        if set(inv) != ids:
            raise PhysicsError("involution must be defined on every flag")
        for a, b in inv.items():
            if inv.get(b) != a:
                raise PhysicsError(f"involution is not self-inverse at flag {a}")

    # -- lookups ---------------------------------------------------------

    @cached_property
    def _flag(self) -> dict[int, Flag]:
        return {f.id: f for f in self.flags}

    @cached_property
    def _corolla(self) -> dict[int, Corolla]:
        return {c.id: c for c in self.corollas}

    @cached_property
    def _inv(self) -> dict[int, int]:
        return dict(self.involution)

    def flag(self, fid: int) -> Flag:
        return self._flag[fid]

    def corolla(self, cid: int) -> Corolla:
        return self._corolla[cid]

    def partner(self, fid: int) -> int:
        return self._inv[fid]

    def is_external(self, fid: int) -> bool:
        return self._inv[fid] == fid

    def external(self) -> list[int]:
        return sorted(f for f, g in self._inv.items() if f == g)

    def internal_edges(self) -> list[tuple[int, int]]:
        return sorted((a, b) for a, b in self._inv.items() if a < b)

    def root(self) -> int:
        roots = [c.id for c in self.corollas if self.is_external(c.flags[0])]
        if len(roots) != 1:
            raise PhysicsError(f"expected one root corolla, found {len(roots)}")
        return roots[0]

    def up_flag(self, cid: int) -> Flag:
        return self._flag[self._corolla[cid].flags[0]]

    def parent_flag(self, cid: int) -> Flag | None:
        up = self._corolla[cid].flags[0]
        other = self._inv[up]
        return None if other == up else self._flag[other]

    def child(self, fid: int) -> int | None:
        """Corolla on the far side of a down flag, if joined."""
        other = self._inv[fid]
        return None if other == fid else self._flag[other].owner

    def foot_flags(self) -> list[int]:
        return [c.flags[1] for c in self.corollas if c.foot and self.is_external(c.flags[1])]

    def open_flags(self) -> list[int]:
        """External down flags left by a split (not roots, not feet)."""
        out = []
        for f in self.flags:
            c = self._corolla[f.owner]
            if f.slot > 0 and not c.foot and self.is_external(f.id):
                out.append(f.id)
        return out

    def __len__(self) -> int:
        return len(self.corollas)

    # -- equality via canonical form ---------------------------------------

    def canonical(self) -> "PhysicsGraph":
        return canonicalize(self)

    def to_json(self) -> dict:
        g = canonicalize(self)
        corollas = []
        for c in g.corollas:
            entry = {"id": c.id, "label": c.label, "flags": []}
            for fid in c.flags:
                f = g.flag(fid)
                fe = {"id": f.id, "slot": f.slot, "feature": f.feature, "split": f.split.value}
                if f.color is not None and g.is_external(f.id):
                    fe["color"] = f.color
                entry["flags"].append(fe)
            for name in ("foot", "subst"):
                if getattr(c, name):
                    entry[name] = True
            if c.doubling != 1:
                entry["doubling"] = c.doubling
            if c.bottom is not None:
                entry["bottom"] = c.bottom
            corollas.append(entry)
        return {
            "corollas": corollas,
            "involution": [list(e) for e in g.internal_edges()],
            "external": g.external(),
        }

    def key(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhysicsGraph):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def from_json(data: dict | str) -> PhysicsGraph:
    if isinstance(data, str):
        data = json.loads(data)
    corollas, flags = [], []
    for c in data["corollas"]:
        fids = []
        for f in c["flags"]:
            flags.append(Flag(f["id"], c["id"], f["slot"], f.get("feature"), Adjoin(f.get("split", "allowed")), f.get("color")))
            fids.append(f["id"])
        corollas.append(Corolla(c["id"], c.get("label", ""), tuple(fids), c.get("foot", False), c.get("subst", False), c.get("doubling", 1), c.get("bottom")))
    inv = {f.id: f.id for f in flags}
    for a, b in data.get("involution", []):
        inv[a], inv[b] = b, a
    return PhysicsGraph(tuple(corollas), tuple(flags), tuple(sorted(inv.items())))


# -- construction and canonical ids ------------------------------------------

class _Builder:
    def __init__(self):
        self.corollas: dict[int, Corolla] = {}
        self.flags: dict[int, Flag] = {}
        self.inv: dict[int, int] = {}

    def add_flag(self, owner: int, slot: int, **kw) -> int:
        fid = len(self.flags)
        self.flags[fid] = Flag(fid, owner, slot, **kw)
        self.inv[fid] = fid
        return fid

    def join(self, a: int, b: int) -> None:
        self.inv[a], self.inv[b] = b, a

    def build(self) -> PhysicsGraph:
        return PhysicsGraph(
            tuple(self.corollas[k] for k in sorted(self.corollas)),
            tuple(self.flags[k] for k in sorted(self.flags)),
            tuple(sorted(self.inv.items())),
        )


def canonicalize(g: PhysicsGraph) -> PhysicsGraph:
    """Renumber corollas in depth-first preorder from the root, flags by (corolla, slot)."""
    order: list[int] = []
    stack = [g.root()]
    seen = set()
    while stack:
        cid = stack.pop()
        if cid in seen:
            raise PhysicsError("graph is not a tree: corolla reached twice")
        seen.add(cid)
        order.append(cid)
        kids = [g.child(f) for f in g.corolla(cid).flags[1:]]
        stack.extend(k for k in reversed(kids) if k is not None)
    if len(order) != len(g.corollas):
        raise PhysicsError("graph is not connected")
    cmap = {old: new for new, old in enumerate(order)}
    fmap: dict[int, int] = {}
    for cid in order:
        for fid in g.corolla(cid).flags:
            fmap[fid] = len(fmap)
    corollas = tuple(
        replace(g.corolla(old), id=cmap[old], flags=tuple(fmap[f] for f in g.corolla(old).flags)) for old in order
    )
    flags = tuple(sorted((replace(f, id=fmap[f.id], owner=cmap[f.owner]) for f in g.flags), key=lambda f: f.id))
    inv = tuple(sorted((fmap[a], fmap[b]) for a, b in g.involution))
    return PhysicsGraph(corollas, flags, inv)


def tree_to_physics(t: TreeLike | str) -> PhysicsGraph:
    t = as_tree(t)
    if t is EMPTY:
        raise PhysicsError("the empty tree has no physics encoding")
    b = _Builder()

    def go(s: Tree, parent_down: int | None) -> None:
        cid = len(b.corollas)
        at_root = parent_down is None
        if at_root:
            up_feat = s.top
        elif s.foot:
            up_feat = None
        else:
            up_feat = s.bottom
        up = b.add_flag(cid, 0, feature=up_feat, split=s.adjoin, color=s.label if at_root else None)
        fids = [up]
        if parent_down is not None:
            b.join(parent_down, up)
        if s.foot:
            fids.append(b.add_flag(cid, 1, feature=s.bottom, color=s.label))
        b.corollas[cid] = Corolla(cid, s.label, (), s.foot, s.subst, s.doubling, s.bottom if at_root and not s.foot else None)
        for i, c in enumerate(s.children, start=1):
            down = b.add_flag(cid, i, feature=c.top, split=c.adjoin)
            fids.append(down)
            go(c, down)
        b.corollas[cid] = replace(b.corollas[cid], flags=tuple(fids))

    if t.foot and t.bottom is not None:
        raise PhysicsError("a single foot node cannot carry a feature")
    go(t, None)
    return canonicalize(b.build())


def physics_to_tree(g: PhysicsGraph, contract: bool = True) -> Tree:
    """Read a tree-shaped graph back as a tree.

    With ``contract`` (the default) each foot corolla whose foot-down flag
    is joined is merged with the corolla below it, giving the node-level
    adjunction result; without it every corolla becomes a node.
    """
    if g.open_flags():
        raise PhysicsError(f"graph has unjoined split flags {g.open_flags()}; compose it first")

    def go(cid: int) -> Tree:
        c = g.corolla(cid)
        up = g.up_flag(cid)
        parent = g.parent_flag(cid)
        if parent is None:
            top, bottom = up.feature, c.bottom
        else:
            top, bottom = parent.feature, up.feature
        adjoin = up.split
        if c.foot:
            fd = g.flag(c.flags[1])
            below = g.child(fd.id)
            if below is None:
                if parent is None and fd.feature is not None:
                    raise PhysicsError("a single foot node cannot carry a feature")
                return Tree(c.label, (), foot=True, doubling=c.doubling, adjoin=adjoin, bottom=fd.feature)
            lower = go(below)
            if contract:
                # the merged node shows the features of the joined foot edge
                return Tree(c.label, lower.children, doubling=c.doubling, adjoin=adjoin, top=fd.feature, bottom=g.up_flag(below).feature)
            return Tree(c.label, (lower,), doubling=c.doubling, adjoin=adjoin, top=top, bottom=bottom)
        kids = tuple(go(g.child(f)) for f in c.flags[1:])
        return Tree(c.label, kids, subst=c.subst, doubling=c.doubling, adjoin=adjoin, top=top, bottom=bottom)

    return go(g.root())


# -- split and compose --------------------------------------------------------

def _component(g: PhysicsGraph, start: int) -> list[int]:
    out, stack = [], [start]
    while stack:
        cid = stack.pop()
        out.append(cid)
        for f in g.corolla(cid).flags[1:]:
            k = g.child(f)
            if k is not None:
                stack.append(k)
    return out


def _subgraph(g: PhysicsGraph, cids: Iterable[int], inv: dict[int, int], flag_updates: dict[int, Flag]) -> PhysicsGraph:
    cids = set(cids)
    corollas = tuple(c for c in g.corollas if c.id in cids)
    flags = tuple(flag_updates.get(f.id, f) for f in g.flags if f.owner in cids)
    ids = {f.id for f in flags}
    return PhysicsGraph(corollas, flags, tuple(sorted((a, inv[a]) for a in ids)))


def split_edge(g: PhysicsGraph, spec: SplitSpec) -> tuple[PhysicsGraph, PhysicsGraph]:
    """Cut the edge above corolla ``spec.edge`` into its two flags.

    Returns ``(T1, T2)``: ``T1`` holds the root and keeps the parent-side
    flag, ``T2`` keeps the child-side flag as its new root flag.  Both
    flags are colored (default: the lower corolla's label) and reset to
    ``allowed``, since splitting consumes any adjunction constraint.
    """
    lower = spec.edge
    up = g.up_flag(lower)
    parent = g.parent_flag(lower)
    if parent is None:
        raise PhysicsError(f"corolla {lower} has an external up flag; there is no internal edge to split")
    if up.split is Adjoin.FORBIDDEN or parent.split is Adjoin.FORBIDDEN:
        raise PhysicsError(f"edge above corolla {lower} may not be split (null adjoining)")
    label = g.corolla(lower).label
    upper_color, lower_color = spec.labels or (label, label)
    inv = dict(g._inv)
    inv[up.id] = up.id
    inv[parent.id] = parent.id
    updates = {
        up.id: replace(up, color=lower_color, split=Adjoin.ALLOWED),
        parent.id: replace(parent, color=upper_color, split=Adjoin.ALLOWED),
    }
    below = set(_component(g, lower))
    above = [c.id for c in g.corollas if c.id not in below]
    t1 = _subgraph(g, above, inv, updates)
    t2 = _subgraph(g, below, inv, updates)
    return canonicalize(t1), canonicalize(t2)


def feature_check(upper: Flag | str | None, lower: Flag | str | None) -> str:
    """``match`` or ``mismatch`` for the features on two flags of one edge."""
    a = upper.feature if isinstance(upper, Flag) else upper
    b = lower.feature if isinstance(lower, Flag) else lower
    if a is None or b is None:
        if a is not b:
            raise FeatureError(f"only one side carries a feature: {a!r} / {b!r}")
        return "match"
    if a[1:] != b[1:]:
        raise FeatureError(f"feature names differ: {a} / {b}")
    return "match" if a[0] == b[0] else "mismatch"


def _features_compatible(a: str | None, b: str | None) -> bool:
    return a is None or b is None or a == b


def _join(g1: PhysicsGraph, f1: int, g2: PhysicsGraph, f2: int, check_features: bool = True) -> tuple[PhysicsGraph, int]:
    # g1 ids kept, g2 ids shifted; returns the merged graph and the shift
    if not g1.is_external(f1):
        raise PhysicsError(f"flag {f1} of the upper graph is not external")
    if not g2.is_external(f2):
        raise PhysicsError(f"flag {f2} of the lower graph is not external")
    a, b = g1.flag(f1), g2.flag(f2)
    if a.slot == 0:
        raise PhysicsError(f"flag {f1} is a root flag; the upper graph must offer a down flag")
    if b.slot != 0:
        raise PhysicsError(f"flag {f2} is not the root flag of the lower graph")
    if (a.color or "") != (b.color or ""):
        raise ColorMismatch(f"colors differ: {a.color!r} vs {b.color!r}")
    if check_features and not _features_compatible(a.feature, b.feature):
        raise FeatureError(f"features do not match across the join: {a.feature} / {b.feature}")
    low_root = g2.corolla(b.owner)
    if low_root.bottom is not None:
        raise PhysicsError("a root carrying two features cannot be joined below another corolla")
    coff = max(c.id for c in g1.corollas) + 1
    foff = max(f.id for f in g1.flags) + 1
    corollas = list(g1.corollas)
    for c in g2.corollas:
        corollas.append(replace(c, id=c.id + coff, flags=tuple(x + foff for x in c.flags)))
    # the joined parent-side flag mirrors the child's splittability; colors only gate joins
    flags = [replace(f, split=b.split, color=None) if f.id == f1 else f for f in g1.flags]
    for f in g2.flags:
        nf = replace(f, id=f.id + foff, owner=f.owner + coff)
        if f.id == f2:
            nf = replace(nf, color=None)
        flags.append(nf)
    inv = dict(g1._inv)
    inv.update({x + foff: y + foff for x, y in g2._inv.items()})
    inv[f1], inv[f2 + foff] = f2 + foff, f1
    return PhysicsGraph(tuple(corollas), tuple(flags), tuple(sorted(inv.items()))), foff


def compose(g1: PhysicsGraph, f1: int, g2: PhysicsGraph, f2: int | None = None, check_features: bool = True) -> PhysicsGraph:
    """Join external down flag ``f1`` of ``g1`` to the root flag ``f2`` of ``g2``."""
    if f2 is None:
        f2 = g2.up_flag(g2.root()).id
    merged, _ = _join(g1, f1, g2, f2, check_features)
    return canonicalize(merged)


def edge_above(g: PhysicsGraph, path: Sequence[int]) -> int:
    """Corolla id of the node at ``path`` (children counted in slot order)."""
    cid = g.root()
    for i in path:
        flags = g.corolla(cid).flags
        if g.corolla(cid).foot or not 0 <= i < len(flags) - 1:
            raise PhysicsError(f"path {list(path)} leaves the tree")
        nxt = g.child(flags[i + 1])
        if nxt is None:
            raise PhysicsError(f"path {list(path)} reaches an unjoined flag")
        cid = nxt
    return cid


def foot_flag_of(g: PhysicsGraph, path: Sequence[int]) -> int:
    cid = edge_above(g, path)
    c = g.corolla(cid)
    if not c.foot:
        raise PhysicsError(f"node at {list(path)} is not a foot")
    return c.flags[1]


def adjoin_physics(T: PhysicsGraph, site: SplitSpec, S: PhysicsGraph, foot: int | None = None, check_features: bool = True) -> PhysicsGraph:
    """``(T1 ∘ S) ∘ T2`` where ``T1, T2`` come from splitting the edge above the site.

    ``foot`` is a foot-down flag id of ``S`` (default: its only one).  At the
    root of ``T`` nothing is split; the foot of ``S`` takes ``T`` whole.
    """
    feet = S.foot_flags()
    if foot is None:
        if len(feet) != 1:
            raise PhysicsError(f"auxiliary graph has {len(feet)} foot flags; pass one explicitly")
        foot = feet[0]
    elif foot not in feet:
        raise PhysicsError(f"flag {foot} is not an open foot flag of the auxiliary graph")
    s_root = S.up_flag(S.root()).id
    if site.edge == T.root():
        root_flag = T.up_flag(T.root())
        if root_flag.split is Adjoin.FORBIDDEN:
            raise PhysicsError("adjunction at the root is forbidden (null adjoining)")
        T = _recolor(T, root_flag.id, site.labels[1] if site.labels else T.corolla(T.root()).label, reset=True)
        merged, _ = _join(S, foot, T, T.up_flag(T.root()).id, check_features)
        return canonicalize(merged)
    t1, t2 = split_edge(T, site)
    (hole,) = t1.open_flags()
    upper, off = _join(t1, hole, S, s_root, check_features)
    merged, _ = _join(upper, foot + off, t2, t2.up_flag(t2.root()).id, check_features)
    return canonicalize(merged)


def _recolor(g: PhysicsGraph, fid: int, color: str | None, reset: bool = False) -> PhysicsGraph:
    f = g.flag(fid)
    nf = replace(f, color=color, split=Adjoin.ALLOWED if reset else f.split)
    return PhysicsGraph(g.corollas, tuple(nf if x.id == fid else x for x in g.flags), g.involution)


def _mark_foot(S: Tree, foot: Path) -> Tree:
    f = subtree_at(S, foot)
    return replace_at(S, foot, f.with_(foot=True, top=None, bottom=f.bottom if f.foot else None))


def adjoin_tree_via_physics(T: TreeLike | str, site: Sequence[int], S: TreeLike | str, foot: Sequence[int], contract: bool = True) -> Tree:
    """Tree-level adjunction routed through the flag encoding."""
    T, S = as_tree(T), as_tree(S)
    S = _mark_foot(S, tuple(foot)) if not subtree_at(S, tuple(foot)).foot else S
    # any other explicit foot markers stay as ordinary feet of the graph
    gT, gS = tree_to_physics(T), tree_to_physics(S)
    result = adjoin_physics(gT, SplitSpec(edge_above(gT, site)), gS, foot_flag_of(gS, foot))
    return physics_to_tree(result, contract=contract)


def adjoin_physics_sum(T: TreeLike | str, S: TreeLike | str) -> FormalSum:
    """Unlabeled sum over every site of ``T`` and every leaf of ``S`` taken as foot."""
    T, S = as_tree(T), as_tree(S)
    out = []
    for foot in leaf_paths(S):
        Sf = _mark_foot(S, foot)
        gS = tree_to_physics(Sf)
        f = foot_flag_of(gS, foot)
        gT = tree_to_physics(T)
        for site in paths(T):
            g = adjoin_physics(gT, SplitSpec(edge_above(gT, site)), gS, f)
            out.append((physics_to_tree(g), 1))
    return FormalSum(out)


def cap_open_feet(g: PhysicsGraph, terminal: str | None = None) -> PhysicsGraph:
    """Join a single-corolla terminal under every unused foot flag."""
    while g.foot_flags():
        f = g.foot_flags()[0]
        color = g.flag(f).color
        cap = tree_to_physics(Tree(terminal if terminal is not None else (color or "")))
        cap = _recolor(cap, cap.up_flag(cap.root()).id, color)
        merged, _ = _join(g, f, cap, cap.up_flag(cap.root()).id, check_features=False)
        g = canonicalize(merged)
    return g


def corolla_counts(g: PhysicsGraph) -> dict[str, int]:
    """Corolla count before and after capping open feet with terminals."""
    return {"uncapped": len(g), "capped": len(cap_open_feet(g))}


# -- audits -------------------------------------------------------------------

@dataclass
class Audit:
    required_unsplit: list[int] = field(default_factory=list)
    feature_mismatches: list[tuple[int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.required_unsplit and not self.feature_mismatches

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "required_unsplit": self.required_unsplit,
            "feature_mismatches": [list(p) for p in self.feature_mismatches],
        }


def audit(g: PhysicsGraph) -> Audit:
    """Edges that still must be split: ``required`` flags and feature mismatches."""
    out = Audit()
    for c in g.corollas:
        up = g.up_flag(c.id)
        if up.split is Adjoin.REQUIRED:
            out.required_unsplit.append(c.id)
        parent = g.parent_flag(c.id)
        if parent is not None and parent.feature and up.feature and not c.foot:
            if feature_check(parent, up) == "mismatch":
                out.feature_mismatches.append((parent.id, up.id))
        if c.foot:
            fd = g.flag(c.flags[1])
            below = g.child(fd.id)
            if below is not None:
                low = g.up_flag(below)
                if fd.feature and low.feature and feature_check(fd, low) == "mismatch":
                    out.feature_mismatches.append((fd.id, low.id))
    return out


def audit_required(g: PhysicsGraph) -> list[int]:
    return audit(g).required_unsplit


# -- edge insertion -----------------------------------------------------------

def edge_insert(T: TreeLike | str, edge: Sequence[int], S: TreeLike | str, side: str = "left") -> Tree:
    """Subdivide the edge above ``edge`` with a new node and hang ``S`` from it.

    The new node gets two children, ``S`` and the old lower end, with ``S``
    on ``side``.
    """
    T, S = as_tree(T), as_tree(S)
    edge = tuple(edge)
    if S is EMPTY:
        raise TreeError("cannot insert the empty tree into an edge")
    if not edge:
        raise TreeError("the root has no edge above it")
    lower = subtree_at(T, edge)
    if side not in ("left", "right"):
        raise TreeError(f"side must be left or right, got {side!r}")
    kids = (S, lower) if side == "left" else (lower, S)
    return replace_at(T, edge, Tree("", kids))


def edge_remove(t: TreeLike | str, at: Sequence[int], side: str = "left") -> tuple[Tree, Tree]:
    """Inverse of :func:`edge_insert`: drop the subdividing node, returning ``(T, S)``."""
    t = as_tree(t)
    m = subtree_at(t, tuple(at))
    if len(m.children) != 2:
        raise TreeError(f"node at {list(at)} is not a subdividing node")
    S, lower = m.children if side == "left" else m.children[::-1]
    return replace_at(t, tuple(at), lower), S


# -- DOT output -----------------------------------------------------------------

def _dot_label(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(g: PhysicsGraph, name: str = "G") -> str:
    g = canonicalize(g)
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    for c in g.corollas:
        mark = "*" if c.foot else "!" if c.subst else ""
        shape = ' shape=doublecircle' if c.doubling == 2 else ""
        lines.append(f'  c{c.id} [label="{_dot_label(c.label + mark)}"{shape}];')
    for a, b in g.internal_edges():
        fa, fb = g.flag(a), g.flag(b)
        up, down = (fa, fb) if fa.slot > 0 else (fb, fa)
        feats = " / ".join(x for x in (up.feature, down.feature) if x)
        attrs = [f'label="{_dot_label(feats)}"'] if feats else []
        style = {Adjoin.FORBIDDEN: "style=dotted", Adjoin.REQUIRED: "style=bold"}.get(down.split)
        if style:
            attrs.append(style)
        suffix = f" [{' '.join(attrs)}]" if attrs else ""
        lines.append(f"  c{up.owner} -> c{down.owner}{suffix};")
    for fid in g.external():
        f = g.flag(fid)
        lines.append(f'  h{fid} [shape=point label=""];')
        text = ",".join(x for x in (f.color, f.feature) if x)
        attr = f' [label="{_dot_label(text)}"]' if text else ""
        if f.slot == 0:
            lines.append(f"  h{fid} -> c{f.owner}{attr};")
        else:
            lines.append(f"  c{f.owner} -> h{fid}{attr};")
    lines.append("}")
    return "\n".join(lines)


def tree_to_dot(t: TreeLike | str, name: str = "T") -> str:
    t = as_tree(t)
    lines = [f"digraph {name} {{", "  node [shape=plaintext];"]
    if t is EMPTY:
        lines.append('  n0 [label="∅"];')
    else:
        ids: dict[Path, int] = {p: i for i, p in enumerate(paths(t))}
        for p, i in ids.items():
            s = subtree_at(t, p)
            lines.append(f'  n{i} [label="{_dot_label(s._head()[1:] or "•")}"];')
            if p:
                lines.append(f"  n{ids[p[:-1]]} -> n{i};")
    lines.append("}")
    return "\n".join(lines)


def corolla_count_law(T: TreeLike, S: TreeLike) -> int:
    return node_count(as_tree(T)) + node_count(as_tree(S))
