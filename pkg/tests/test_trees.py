from __future__ import annotations

import pytest
from hypothesis import given

from conftest import trees
from tagprelie.trees import (
    EMPTY,
    Adjoin,
    Mode,
    ParseError,
    Tree,
    TreeError,
    canonical_key,
    edge_count,
    full_binary_trees,
    labeled_nonplanar_trees,
    leaf_count,
    node_count,
    parse_tree,
    planar_trees,
    replace_at,
    serialize_tree,
    strip_markers,
    subtree_at,
    unary_binary_trees,
)


def test_parse_markers_and_features():
    t = parse_tree("[S[NP!][VP@na[V][VP*{-WH}]][X=2@oa{+WH}{-WH}]]")
    assert subtree_at(t, (0,)).subst
    assert subtree_at(t, (1,)).adjoin is Adjoin.FORBIDDEN
    foot = subtree_at(t, (1, 1))
    assert foot.foot and foot.bottom == "-WH" and foot.top is None
    x = subtree_at(t, (2,))
    assert x.doubling == 2 and x.adjoin is Adjoin.REQUIRED and (x.top, x.bottom) == ("+WH", "-WH")
    assert str(parse_tree(str(t))) == str(t)


def test_empty_tree():
    assert parse_tree("∅") is EMPTY
    assert node_count(EMPTY) == 0
    assert serialize_tree(EMPTY) == "∅"


@pytest.mark.parametrize("bad", ["", "[", "[[]", "[]]", "[a]b", "[*[]]", "[a!]x"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_tree(bad)


def test_invalid_markers_rejected():
    with pytest.raises(TreeError):
        Tree("a", (Tree(),), foot=True)
    with pytest.raises(TreeError):
        Tree("", subst=True)


def test_counts():
    t = parse_tree("[[][[][]]]")
    assert (node_count(t), leaf_count(t), edge_count(t)) == (5, 3, 4)


def test_planar_vs_nonplanar_keys():
    a, b = parse_tree("[a[b][c[d]]]"), parse_tree("[a[c[d]][b]]")
    assert canonical_key(a, Mode.PLANAR) != canonical_key(b, Mode.PLANAR)
    assert canonical_key(a, Mode.NONPLANAR) == canonical_key(b, Mode.NONPLANAR)


def test_enumeration_counts():
    assert [len(planar_trees(n)) for n in range(1, 7)] == [1, 1, 2, 5, 14, 42]
    assert [len(unary_binary_trees(n)) for n in range(1, 8)] == [1, 1, 2, 4, 9, 21, 51]
    assert [len(full_binary_trees(n)) for n in range(1, 8)] == [1, 0, 1, 0, 2, 0, 5]
    # rooted unordered trees with 2-coloured nodes
    assert [len(labeled_nonplanar_trees(n, "ab")) for n in range(1, 5)] == [2, 4, 14, 52]


def test_replace_and_strip():
    t = parse_tree("[S[NP!][VP]]")
    assert str(replace_at(t, (1,), Tree("X"))) == "[S[NP!][X]]"
    assert str(strip_markers(t)) == "[S[NP][VP]]"


@given(trees("ab"))
def test_parse_roundtrip(t):
    assert parse_tree(serialize_tree(t)) == t


@given(trees("abc"))
def test_nonplanar_key_ignores_sibling_order(t):
    def mirror(s):
        return Tree(s.label, tuple(mirror(c) for c in reversed(s.children)))

    assert canonical_key(mirror(t), Mode.NONPLANAR) == canonical_key(t, Mode.NONPLANAR)
    assert node_count(mirror(t)) == node_count(t)
