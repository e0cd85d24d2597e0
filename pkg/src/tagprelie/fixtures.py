"""Regression harness over the published worked examples.

Each fixture recomputes one example and compares a JSON-able summary with
a golden value.  The goldens were first produced by this implementation
and then checked by hand against the published displays.  Where the two
disagree the golden keeps the published value, so the fixture reports the
disagreement instead of hiding it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from . import gradings, grammar, physics, prelie
from .sums import FormalSum, format_sum
from .trees import EMPTY, Mode, canonical_key, edge_count, leaf_count, node_count, parse_tree, serialize_tree, strip_markers

T5 = "[[][[][]]]"
CHERRY = "[[][]]"


@dataclass(frozen=True)
class Fixture:
    name: str
    about: str
    compute: Callable[[], Any]
    golden: Any


@dataclass
class FixtureResult:
    name: str
    about: str
    passed: bool
    expected: Any
    actual: Any
    error: str | None = None

    def to_json(self) -> dict:
        d = {"name": self.name, "about": self.about, "passed": self.passed, "expected": self.expected, "actual": self.actual}
        if self.error:
            d["error"] = self.error
        return d


def _sum_terms(x: FormalSum) -> dict[str, str]:
    return {k: str(c) for k, c in x.items()}


def _parse():
    return {t: [serialize_tree(parse_tree(t)), node_count(parse_tree(t))] for t in ("[]", "[a[b][c]]", T5)}


def _canonical():
    a, b = parse_tree("[[[][]][]]"), parse_tree(T5)
    return {
        "planar_equal": canonical_key(a, Mode.PLANAR) == canonical_key(b, Mode.PLANAR),
        "nonplanar_equal": canonical_key(a, Mode.NONPLANAR) == canonical_key(b, Mode.NONPLANAR),
    }


def _counts():
    return {t: [node_count(parse_tree(t)), leaf_count(parse_tree(t)), edge_count(parse_tree(t))] for t in (T5, CHERRY)}


def _adjoin_worked():
    return _sum_terms(prelie.adjoin_all(T5, CHERRY))


def _coefficient_sum():
    x = prelie.adjoin_all(T5, CHERRY)
    return {"sum": str(x.coefficient_sum()), "terms": len(x)}


def _graft_abc():
    return _sum_terms(prelie.graft("[a[b][c]]", "[b]"))


def _graft_empty():
    return {
        "T<empty": format_sum(prelie.graft("[a[b][c]]", EMPTY)),
        "empty<T": format_sum(prelie.graft(EMPTY, "[a[b][c]]")),
    }


def _restricted_sum():
    total = FormalSum.zero(Mode.NONPLANAR)
    for lab in "abc":
        total = total + prelie.graft_restricted("[a[b][c]]", "[b]", lab)
    return {"sum_equals_graft": total == prelie.graft("[a[b][c]]", "[b]"), "only_a": format_sum(prelie.graft_restricted("[a[b][c]]", "[b]", "a"))}


def _ident():
    d = prelie.single_node_diagnostics(T5)
    return {k: format_sum(d[k]) for k in ("T<dot", "dot<T", "[T,dot]")}


_A1, _A2, _A3 = CHERRY, T5, CHERRY
DISJOINT_TERM = "[[][[[][[][]]][]]]"
SHARED_TERM = "[[[][[][[][]]]][]]"


def _associator_terms(term: str) -> dict:
    op = prelie.adjoin_operator()
    left = op(op(_A1, _A2), _A3)
    right = op(_A1, op(_A2, _A3))
    return {"left_positive": left[term] > 0, "right": str(right[term]) if term == DISJOINT_TERM else right[term] > 0}


def _one_graph():
    return str(prelie.adjoin_at("[[][α[][]]]", [1], "[α[][α*]]", [1]))


def _grading(op: str, scheme: str, bound: int):
    r = gradings.grading_report(op, scheme, bound)
    return {"constant_offset": r.constant_offset, "degree_zero": r.degree_zero}


def _dims_t():
    return [len(gradings.enumerate_trees(d, "T")) for d in range(6)]


def _dims_tprime():
    dims = gradings.dimensions("Tprime", range(11))
    return {str(d): n for d, n in dims.items()}


def _tprime_8():
    return [str(t) for t in gradings.enumerate_trees(8, "Tprime")]


def _double_vertex():
    T = "[=2[=2][=2[=2][=2]]]"
    S = "[[=2][]]"
    out = gradings.adjoin_double_vertex(T, S, [1])
    return {
        "result": str(out),
        "degrees": [gradings.degree(x, "doubled_vertex_count") for x in (T, S, out)],
        "non_auxiliary_product": format_sum(gradings.adjoin_double_all(T, "[=2[=2][=2]]")),
    }


def _halfedge():
    T = parse_tree("[[][α[][]]]")
    S = parse_tree("[α[][α*]]")
    gT, gS = physics.tree_to_physics(T), physics.tree_to_physics(S)
    t1, t2 = physics.split_edge(gT, physics.SplitSpec(physics.edge_above(gT, [1])))
    result = physics.adjoin_physics(gT, physics.SplitSpec(physics.edge_above(gT, [1])), gS)
    return {
        "S_external": len(gS.external()),
        "T1_corollas": len(t1),
        "S_corollas": len(gS),
        "T2_corollas": len(t2),
        "T2": str(physics.physics_to_tree(t2)),
        "result_corollas": len(result),
        "result_flags": str(physics.physics_to_tree(result, contract=False)),
        "result_nodes": str(physics.physics_to_tree(result)),
    }


def _watched_has():
    g = grammar.watched_has()
    t = grammar.derive(g, grammar.Derivation(0, (grammar.Step("adjoin", (1,), 0),)))
    return {"derived": str(t), "drawn": str(strip_markers(t))}


def _ftag():
    g = grammar.ftag()
    t = grammar.derive(g, grammar.Derivation(0, (grammar.Step("adjoin", (1,), 0),)), feature_policy="require")
    gT = physics.tree_to_physics(g.initial[0])
    site = physics.edge_above(gT, [1])
    before = physics.feature_check(gT.parent_flag(site), gT.up_flag(site))
    joined = physics.adjoin_physics(gT, physics.SplitSpec(site), physics.tree_to_physics(g.auxiliary[0]))
    return {
        "derived": str(t),
        "site_before": before,
        "physics_result": str(physics.physics_to_tree(joined)),
        "mismatches_after": len(physics.audit(joined).feature_mismatches),
    }


def _edge_insert():
    out = physics.edge_insert(T5, [1], CHERRY)
    return {"result": str(out), "nodes": node_count(out)}


def _null_adjoin():
    g = physics.tree_to_physics("[S[VP@na[V][NP]]]")
    try:
        physics.split_edge(g, physics.SplitSpec(physics.edge_above(g, [0])))
        return "split"
    except physics.PhysicsError:
        return "refused"


FIXTURES: tuple[Fixture, ...] = (
    Fixture("parse", "bracket text round trip on the example trees", _parse, {"[]": ["[]", 1], "[a[b][c]]": ["[a[b][c]]", 3], T5: [T5, 5]}),
    Fixture("canonical", "planar vs nonplanar identification of mirrored trees", _canonical, {"planar_equal": False, "nonplanar_equal": True}),
    Fixture("counts", "node, leaf and edge counts of the adjunction example trees", _counts, {T5: [5, 3, 4], CHERRY: [3, 2, 2]}),
    Fixture(
        "adjoin-worked",
        "adjoining a cherry into the 5-node tree",
        _adjoin_worked,
        {"[[[][[][]]][]]": "1", "[[[][]][[][]]]": "2", "[[][[[][]][]]]": "3", "[[][[][[][]]]]": "4"},
    ),
    Fixture("coeffsum-worked", "coefficient sum n*l of the worked adjunction", _coefficient_sum, {"sum": "10", "terms": 4}),
    Fixture("graft-abc", "grafting b into a(b,c)", _graft_abc, {"[a[b[b]][c]]": "1", "[a[b][b][c]]": "1", "[a[b][c[b]]]": "1"}),
    Fixture("graft-empty", "grafting against the empty tree", _graft_empty, {"T<empty": "[a[b][c]]", "empty<T": "∅"}),
    Fixture("graft-restricted", "restricted grafting summed over labels", _restricted_sum, {"sum_equals_graft": True, "only_a": "[a[b][b][c]]"}),
    Fixture("ident", "insertions against the single-node tree", _ident, {"T<dot": f"5·{T5}", "dot<T": f"3·{T5}", "[T,dot]": f"2·{T5}"}),
    Fixture("associator-disjoint", "term with both insertions at distinct nodes of T1", lambda: _associator_terms(DISJOINT_TERM), {"left_positive": True, "right": "0"}),
    Fixture("associator-shared", "term with T3 inside the copy of T2", lambda: _associator_terms(SHARED_TERM), {"left_positive": True, "right": True}),
    Fixture("1graph", "labeled single-vertex adjunction at alpha", _one_graph, "[[][α[][α[][]]]]"),
    Fixture("grading-vertex", "vertex grading loses one vertex per adjunction", lambda: _grading("single", "vertex_count", 7), {"constant_offset": -1, "degree_zero": ["∅"]}),
    Fixture("grading-edge", "edge grading is preserved but degree 0 is two-dimensional", lambda: _grading("single", "edge_count", 7), {"constant_offset": 0, "degree_zero": ["∅", "[]"]}),
    Fixture("grading-double", "doubled vertex grading is preserved", lambda: _grading("double", "doubled_vertex_count", 10), {"constant_offset": 0, "degree_zero": ["∅"]}),
    Fixture("dims-T", "dimensions of the double-vertex space, degrees 0..5", _dims_t, [1, 1, 1, 1, 3, 5]),
    Fixture("dims-Tprime", "dimensions of the adjunction subspace, degrees 0..10", _dims_tprime, {"0": 1, "1": 0, "2": 1, "3": 0, "4": 2, "5": 0, "6": 1, "7": 0, "8": 6, "9": 0, "10": 2}),
    Fixture(
        "Tprime-8",
        "the six degree-8 generators",
        _tprime_8,
        ["[[=2[=2][=2]][]]", "[[=2[=2][]][=2]]", "[[=2[][=2]][=2]]", "[[=2][=2[=2][]]]", "[[=2][=2[][=2]]]", "[[][=2[=2][=2]]]"],
    ),
    Fixture(
        "double-vertex",
        "double-vertex adjunction at the doubled site",
        _double_vertex,
        {"result": "[=2[=2][=2[=2][=2[=2][=2]]]]", "degrees": [10, 4, 14], "non_auxiliary_product": "0"},
    ),
    Fixture(
        "halfedge",
        "adjunction as split and two compositions",
        _halfedge,
        {
            "S_external": 2,
            "T1_corollas": 2,
            "S_corollas": 3,
            "T2_corollas": 3,
            "T2": "[α[][]]",
            "result_corollas": 8,
            "result_flags": "[[][α[][α[α[][]]]]]",
            "result_nodes": "[[][α[][α[][]]]]",
        },
    ),
    Fixture(
        "watched-has",
        "adjoining 'has' at the VP of 'watched'",
        _watched_has,
        {"derived": "[S[NP!][VP[V[has]][VP[V[watched]][NP!]]]]", "drawn": "[S[NP][VP[V[has]][VP[V[watched]][NP]]]]"},
    ),
    Fixture(
        "ftag",
        "feature-driven adjunction for 'What do you think Elizabeth lost?'",
        _ftag,
        {
            "derived": "[S[C[What_i]][S{+WH}{+WH}[Aux[do]][S[NP[you]][VP[V[think]][S{-WH}{-WH}[NP[Elizabeth]][VP[V[lost]][NP[t_i]]]]]]]]",
            "site_before": "mismatch",
            "physics_result": "[S[C[What_i]][S{+WH}{+WH}[Aux[do]][S[NP[you]][VP[V[think]][S{-WH}{-WH}[NP[Elizabeth]][VP[V[lost]][NP[t_i]]]]]]]]",
            "mismatches_after": 0,
        },
    ),
    Fixture("edge-insert", "inserting a cherry into an edge", _edge_insert, {"result": "[[][[[][]][[][]]]]", "nodes": 9}),
    Fixture("null-adjoin", "a forbidden edge cannot be split", _null_adjoin, "refused"),
)


def fixture_names() -> list[str]:
    return [f.name for f in FIXTURES]


def run_fixtures(only: str | list[str] | None = None) -> list[FixtureResult]:
    """Run all fixtures, or those named in ``only`` (comma-separated or list)."""
    if isinstance(only, str):
        only = [s.strip() for s in only.split(",") if s.strip()]
    if only:
        unknown = set(only) - set(fixture_names())
        if unknown:
            raise KeyError(f"unknown fixture(s): {', '.join(sorted(unknown))}")
    results = []
    for fx in FIXTURES:
        if only and fx.name not in only:
            continue
        try:
            actual = fx.compute()
            results.append(FixtureResult(fx.name, fx.about, actual == fx.golden, fx.golden, actual))
        except Exception as e:  # report, never abort the run
            results.append(FixtureResult(fx.name, fx.about, False, fx.golden, None, f"{type(e).__name__}: {e}"))
    return results
