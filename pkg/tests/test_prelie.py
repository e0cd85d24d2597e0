from __future__ import annotations

import pytest
from hypothesis import given, settings

from conftest import trees, unary_binary
from tagprelie import fixtures, prelie
from tagprelie.prelie import (
    LABELED,
    AdjunctionConfig,
    ArityError,
    FootPolicy,
    LabelMismatch,
    Labeling,
    Operator,
    adjoin_all,
    adjoin_at,
    adjoin_operator,
    check_prelie,
    graft,
    graft_operator,
    graft_restricted,
)
from tagprelie.sums import FormalSum
from tagprelie.trees import EMPTY, Mode, Tree, leaf_count, node_count, parse_tree

T5 = "[[][[][]]]"
CHERRY = "[[][]]"


def test_adjoin_at_moves_children_to_foot():
    assert str(adjoin_at(T5, (1,), CHERRY, (0,))) == "[[][[[][]][]]]"
    assert str(adjoin_at(T5, (), CHERRY, (1,))) == "[[][[][[][]]]]"


def test_labeled_adjunction_needs_matching_labels():
    with pytest.raises(LabelMismatch):
        adjoin_at("[a[b]]", (0,), "[c[c*]]", (0,))
    got = adjoin_all("[a[b][a]]", "[a[x][a*]]", AdjunctionConfig(Labeling.LABELED, FootPolicy.MATCHING_LABEL_LEAVES))
    assert got == FormalSum([("[a[x][a[b][a]]]", 1), ("[a[b][a[x][a]]]", 1)])


def test_adjoin_rejects_higher_arity_when_unlabeled():
    with pytest.raises(ArityError):
        adjoin_all("[[][][]]", "[]")


def test_adjoin_with_empty():
    assert adjoin_all(T5, EMPTY) == FormalSum([(T5, 1)])
    assert adjoin_all(EMPTY, T5) == FormalSum([(EMPTY, 1)])


@settings(max_examples=60, deadline=None)
@given(unary_binary(), unary_binary())
def test_coefficient_sum_law(t, s):
    assert adjoin_all(t, s).coefficient_sum() == node_count(t) * leaf_count(s)


def test_graft_basics():
    assert graft("[a[b][c]]", "[b]") == FormalSum(
        [("[a[b[b]][c]]", 1), ("[a[b][b][c]]", 1), ("[a[b][c[b]]]", 1)], Mode.NONPLANAR
    )
    assert graft(EMPTY, "[a]") == FormalSum([(EMPTY, 1)], Mode.NONPLANAR)


@settings(max_examples=40, deadline=None)
@given(trees("ab", max_leaves=4), trees("ab", max_leaves=3))
def test_restricted_grafts_partition_graft(t, s):
    total = sum((graft_restricted(t, s, lab) for lab in "ab"), FormalSum.zero(Mode.NONPLANAR))
    assert total == graft(t, s)
    assert graft(t, s).coefficient_sum() == node_count(t)


@settings(max_examples=30, deadline=None)
@given(trees("ab", max_leaves=3), trees("ab", max_leaves=2), trees("ab", max_leaves=2))
def test_graft_is_prelie_on_random_triples(a, b, c):
    assert not prelie.vinberg_defect(a, b, c, graft_operator())


def test_graft_prelie_small_exhaustive():
    from tagprelie.trees import labeled_nonplanar_trees

    universe = [t for k in range(1, 4) for t in labeled_nonplanar_trees(k, "ab")]
    report = check_prelie(graft_operator(), universe)
    assert report.passed and report.checked == 20 * 20 * 19 // 2


def test_single_node_diagnostics_example():
    d = prelie.single_node_diagnostics(T5)
    assert d["T<dot"] == FormalSum([(T5, 5)])
    assert d["dot<T"] == FormalSum([(T5, 3)])
    assert d["[T,dot]"] == FormalSum([(T5, 2)])


def test_labeled_config_is_exported():
    assert LABELED.labeling is Labeling.LABELED


# mutation checks: the harness must notice a broken operator


def test_broken_operator_fails_with_witness():
    def lopsided(t, s):
        # graft only at the root: associative-looking but not pre-Lie
        return FormalSum([(Tree(t.label, t.children + (s,)), 1)], Mode.NONPLANAR)

    op = Operator("root-only", lopsided, Mode.NONPLANAR)
    universe = [parse_tree(x) for x in ("[a]", "[b]", "[a[b]]")]
    report = check_prelie(op, universe)
    assert not report.passed
    w = report.failures[0]
    assert len(w.args) == 3 and w.value


def test_broken_adjoin_is_caught_by_fixture(monkeypatch):
    real = prelie.adjoin_all

    def off_by_one(T, S, cfg=prelie.UNLABELED):
        return real(T, S, cfg) + FormalSum([(T, 1)])

    monkeypatch.setattr(prelie, "adjoin_all", off_by_one)
    (r,) = fixtures.run_fixtures("adjoin-worked")
    assert not r.passed
