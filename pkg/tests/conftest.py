from __future__ import annotations

from hypothesis import strategies as st

from tagprelie.trees import Tree


def trees(labels: str = "", max_leaves: int = 6, max_arity: int = 3):
    """Small random trees; unlabeled unless ``labels`` is given."""
    label = st.sampled_from(list(labels)) if labels else st.just("")
    return st.recursive(
        st.builds(Tree, label),
        lambda kids: st.builds(Tree, label, st.lists(kids, min_size=1, max_size=max_arity).map(tuple)),
        max_leaves=max_leaves,
    )


def unary_binary(max_leaves: int = 4):
    return trees(max_leaves=max_leaves, max_arity=2)
