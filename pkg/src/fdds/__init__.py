"""Polynomial equations over finite discrete dynamical systems (FDDS).

Trees and forests with the levelwise product, FDDS with sum and direct
product, unroll forests, solvers for ``P(X) = B`` over all three, and a
decision procedure for injectivity with explicit collisions.
"""
from __future__ import annotations

from .core import (
    Component,
    Fdds,
    Polynomial,
    canonicalize,
    compare_cyclefirst,
    compare_treefirst,
    evaluate,
    fdds_product,
    fdds_subtract,
    fdds_sum,
    is_cancelable,
    is_dendron,
    parse_fdds,
    set_dive,
    set_size,
    to_dot,
)
from .errors import (
    ConstructionFailed,
    LimitExceeded,
    MalformedInput,
    MalformedPolynomial,
    NotPeriodic,
    NotSupportedNonInjective,
)
from .injectivity import alpha_beta, counterexample, counterexample_monomial, delta, is_injective
from .oracle import brute_forest_solve, brute_solve, enumerate_fdds, enumerate_trees
from .solver import SolveOutcome, evaluate_forest, find_min_divisible, solve_fdds, solve_forest, solve_unroll, verify
from .trees import (
    LEAF,
    Forest,
    Tree,
    canonical_code,
    clear_caches as _clear_tree_caches,
    cut,
    forest_product,
    forest_sum,
    gamma,
    kth_root,
    parse_forest,
    parse_tree,
    path,
    star,
    tree_compare,
    tree_divide,
    tree_power,
    tree_product,
)
from .unroll import default_cut_depth, min_unroll_tree_cut, reroll, unroll_cut, unroll_trees

__version__ = "0.1.0"


def clear_caches() -> None:
    """Drop every memo table (tree algebra, component products, unroll levels)."""
    from . import core, unroll

    _clear_tree_caches()
    core._COMPONENT_PRODUCT.clear()
    unroll._LEVELS.clear()
