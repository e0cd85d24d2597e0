from __future__ import annotations

import json

import pytest

from tagprelie import grammar
from tagprelie.grammar import (
    BudgetExceeded,
    Derivation,
    DerivationError,
    GrammarError,
    Step,
    TagGrammar,
    derive,
    enumerate_derived,
    is_lexicalized,
    substitute,
    validate_grammar,
)
from tagprelie.trees import parse_tree


def test_builtin_grammars_are_valid_and_lexicalized():
    for name in grammar.BUILTIN:
        g = grammar.load_grammar(name)
        assert validate_grammar(g) == []
        assert is_lexicalized(g) == []


def test_watched_has_derivation():
    g = grammar.watched_has()
    t = derive(g, Derivation(0, (Step("adjoin", (1,), 0),)))
    assert str(t) == "[S[NP!][VP[V[has]][VP[V[watched]][NP!]]]]"


def test_ftag_implicit_foot_and_features():
    g = grammar.ftag()
    assert g.implicit_feet == ((0, (1, 1, 1)),)
    d = Derivation(0, (Step("adjoin", (1,), 0),))
    with pytest.raises(DerivationError):
        derive(g, Derivation(0), feature_policy="require")
    t = derive(g, d, feature_policy="require")
    assert grammar.feature_mismatches(t) == []


def test_validation_catches_each_clause():
    g = TagGrammar.build(
        sigma={"a", "S"},
        n={"S", "X"},
        start="Q",
        initial=["[S[X][b][S*]]"],
        auxiliary=["[S[a]]", "[X[a][S*]]"],
    )
    messages = " | ".join(str(v) for v in validate_grammar(g))
    for needle in ("both terminals", "start symbol", "not marked for substitution", "neither terminal", "initial tree has a foot", "0 foot nodes", "differs from root label"):
        assert needle in messages


def test_not_lexicalized():
    g = TagGrammar.build(sigma={"a"}, n={"S", "NP"}, start="S", initial=["[S[NP!]]"])
    (v,) = is_lexicalized(g)
    assert v.kind == "initial" and v.index == 0


def test_substitution():
    out = substitute("[S[NP!][VP]]", (0,), "[NP[John]]")
    assert str(out) == "[S[NP[John]][VP]]"
    with pytest.raises(GrammarError):
        substitute("[S[NP!][VP]]", (0,), "[VP[ran]]")
    with pytest.raises(GrammarError):
        substitute("[S[NP!][VP]]", (1,), "[VP[ran]]")


def test_derivation_errors_name_the_step():
    g = grammar.watched_has()
    with pytest.raises(DerivationError) as e:
        derive(g, Derivation(0, (Step("adjoin", (0,), 0),)))
    assert e.value.step == 0
    na = TagGrammar.build(sigma={"a"}, n={"S"}, start="S", initial=["[S@na[a]]"], auxiliary=["[S[a][S*]]"])
    with pytest.raises(DerivationError, match="forbidden"):
        derive(na, Derivation(0, (Step("adjoin", (), 0),)))


def test_derivation_json_roundtrip():
    d = Derivation(0, (Step("adjoin", (1,), 0), Step("substitute", (0,), 0, None)))
    assert Derivation.from_json(json.dumps(d.to_json())) == d


def test_grammar_json_roundtrip():
    g = grammar.watched_has()
    assert TagGrammar.from_json(g.to_json()) == g


def test_enumeration_grows_and_respects_budget():
    g = TagGrammar.build(sigma={"a"}, n={"S"}, start="S", initial=["[S[a]]"], auxiliary=["[S[a][S*]]"])
    sizes = [len(enumerate_derived(g, k)) for k in range(4)]
    assert sizes == sorted(sizes) and sizes[0] == 1 and sizes[-1] > sizes[1]
    with pytest.raises(BudgetExceeded):
        enumerate_derived(g, 6, budget=3)


def test_obligatory_adjunction_consumed():
    g = TagGrammar.build(sigma={"a"}, n={"S"}, start="S", initial=["[S[S@oa[a]]]"], auxiliary=["[S[a][S*]]"])
    with pytest.raises(DerivationError, match="obligatory"):
        derive(g, Derivation(0))
    t = derive(g, Derivation(0, (Step("adjoin", (0,), 0),)))
    assert grammar.unresolved_required(t) == []
    assert "@oa" not in str(t)
    assert parse_tree(str(t)) == t
