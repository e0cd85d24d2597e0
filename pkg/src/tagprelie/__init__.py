"""Tree adjunction and grafting as pre-Lie products on formal sums of trees."""

from .gradings import DegreeScheme, TreeClass, adjoin_double_vertex, degree, enumerate_trees, grading_report
from .grammar import Derivation, Step, TagGrammar, derive, enumerate_derived, is_lexicalized, substitute, validate_grammar
from .physics import PhysicsGraph, SplitSpec, adjoin_physics, compose, edge_insert, feature_check, physics_to_tree, split_edge, tree_to_physics
from .prelie import (
    AdjunctionConfig,
    adjoin_all,
    adjoin_at,
    associator,
    bracket,
    check_jacobi,
    check_prelie,
    graft,
    graft_restricted,
    vinberg_defect,
)
from .sums import FormalSum, add, bilinear_extend, coefficient_sum, from_term, scale, support
from .trees import EMPTY, Mode, Tree, canonical_key, edge_count, leaf_count, node_count, parse_tree, replace_at, serialize_tree, subtree_at

__version__ = "0.1.0"
