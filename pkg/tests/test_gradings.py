from __future__ import annotations

import json

import pytest

from tagprelie import gradings
from tagprelie.gradings import BoundExceeded, GradingError, TreeClass, degree, enumerate_trees, grading_report
from tagprelie.trees import EMPTY, parse_tree


def test_degrees_under_each_scheme():
    t = "[=2[=2][]]"
    assert degree(t, "vertex_count") == 3
    assert degree(t, "edge_count") == 2
    assert degree(t, "doubled_vertex_count") == 5
    assert degree(EMPTY, "edge_count") == 0


def test_class_aliases():
    assert TreeClass.parse("T'") is TreeClass.DOUBLE_VERTEX_TAG
    assert TreeClass.parse("binary") is TreeClass.BINARY_PLANAR_UNLABELED
    with pytest.raises(ValueError):
        TreeClass.parse("nope")


def test_degree_zero_is_empty_only():
    assert enumerate_trees(0, "Tprime") == [EMPTY]


def test_bound_is_enforced():
    with pytest.raises(BoundExceeded):
        enumerate_trees(14, "Tprime", bound=12)


def test_membership_follows_the_enumeration():
    for d in range(0, 11):
        for t in enumerate_trees(d, "Tprime"):
            assert gradings.in_class(t, "Tprime")
            assert degree(t, "doubled_vertex_count") == d


def test_auxiliary_pattern():
    assert gradings.is_auxiliary(parse_tree("[[=2][]]"))
    assert not gradings.is_auxiliary(parse_tree("[=2[=2][=2]]"))
    assert not gradings.is_auxiliary(parse_tree("[[][]]"))


def test_double_vertex_adjunction_adds_degrees():
    T, S = "[=2[=2][=2[=2][=2]]]", "[[=2][]]"
    for site in ((), (0,), (1,), (1, 0), (1, 1)):
        out = gradings.adjoin_double_vertex(T, S, site)
        assert degree(out, "doubled_vertex_count") == degree(T, "doubled_vertex_count") + degree(S, "doubled_vertex_count")


def test_double_vertex_site_must_be_doubled():
    with pytest.raises(GradingError):
        gradings.adjoin_double_vertex("[[=2][]]", "[[=2][]]", ())


def test_closure_up_to_degree_ten():
    assert gradings.closure_violations(10) == []


def test_report_json():
    r = grading_report("single", "edge_count", 5)
    data = json.loads(json.dumps(r.to_json()))
    assert data["constant_offset"] == 0
    assert r.degree_zero_ambiguous
    assert not grading_report("single", "vertex_count", 5).degree_zero_ambiguous
