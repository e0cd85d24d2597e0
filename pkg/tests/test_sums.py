from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import trees
from tagprelie.sums import FormalSum, ModeMismatch, bilinear_extend, format_sum, from_term
from tagprelie.trees import Mode, Tree, node_count

coeffs = st.fractions(max_denominator=6).filter(lambda c: abs(c) < 50)
planar_sums = st.lists(st.tuples(trees(max_leaves=3), coeffs), max_size=4).map(FormalSum)


def test_like_terms_collect_and_cancel():
    x = FormalSum([("[[]]", 2), ("[[]]", -2), ("[]", Fraction(1, 3))])
    assert len(x) == 1 and x["[]"] == Fraction(1, 3)
    assert not (x - x)


def test_nonplanar_collapses_mirrors():
    x = FormalSum([("[a[b][c]]", 1), ("[a[c][b]]", 1)], Mode.NONPLANAR)
    assert len(x) == 1 and x["[a[b][c]]"] == 2


def test_mode_mismatch():
    with pytest.raises(ModeMismatch):
        from_term("[]") + from_term("[]", mode=Mode.NONPLANAR)


def test_json_roundtrip():
    x = FormalSum([("[[][]]", Fraction(-3, 4)), ("[]", 5)])
    assert FormalSum.from_json(x.to_json()) == x


def test_format():
    assert format_sum(FormalSum()) == "0"
    assert format_sum(FormalSum([("[]", 2)])) == "2·[]"


def _toy(t, s):
    # attach s as an extra child of the root; bilinear by construction
    return FormalSum([(Tree("", t.children + (s,)), node_count(s))])


op = bilinear_extend(_toy)


@given(planar_sums, planar_sums, planar_sums, coeffs)
def test_bilinearity(x, y, z, c):
    assert op(x + c * y, z) == op(x, z) + c * op(y, z)
    assert op(x, y + c * z) == op(x, y) + c * op(x, z)


@given(planar_sums, planar_sums)
def test_addition_group_laws(x, y):
    assert x + y == y + x
    assert (x + y) - y == x
    assert x + FormalSum.zero() == x
