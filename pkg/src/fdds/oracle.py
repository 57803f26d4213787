"""Exhaustive enumerators and brute-force solvers used as ground truth.

Enumeration builds canonical objects directly (child multisets are chosen in
non-increasing order of a fixed index), so no isomorphism filtering is
needed.  All sizes count nodes exactly; ``*_upto`` variants collect every
size from 0 (or 1) to the bound.
"""
from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterator, List, Optional, Sequence, Set, Tuple

from .core import Component, Fdds, Polynomial, evaluate
from .errors import LimitExceeded
from .trees import Forest, Tree

__all__ = [
    "MAX_NODES",
    "TREE_COUNTS",
    "FDDS_COUNTS",
    "COMPONENT_COUNTS",
    "enumerate_trees",
    "enumerate_trees_upto",
    "enumerate_forests",
    "enumerate_components",
    "enumerate_fdds",
    "enumerate_fdds_upto",
    "brute_solve",
    "brute_forest_solve",
    "random_tree",
    "random_forest",
    "random_fdds",
    "random_component",
]

MAX_NODES = 10
BRUTE_MAX_NODES = 9

# rooted unlabeled trees, functional digraphs and connected functional
# digraphs with 1..10 nodes (frozen reference counts)
TREE_COUNTS = (1, 1, 2, 4, 9, 20, 48, 115, 286, 719)
FDDS_COUNTS = (1, 3, 7, 19, 47, 130, 343, 951, 2615, 7318)
COMPONENT_COUNTS = (1, 2, 4, 9, 20, 51, 125, 329, 862, 2311)


def _guard(n: int, limit: int = MAX_NODES) -> None:
    if n > limit:
        raise LimitExceeded(f"{n} nodes exceeds the enumeration limit of {limit}")
    if n < 0:
        raise ValueError("node count must be non-negative")


@lru_cache(maxsize=None)
def _trees(n: int) -> Tuple[Tree, ...]:
    if n <= 0:
        return ()
    if n == 1:
        return (Tree.from_children(()),)
    return tuple(sorted(Tree.from_children(f) for f in _forests(n - 1)))


@lru_cache(maxsize=None)
def _forests(n: int) -> Tuple[Tuple[Tree, ...], ...]:
    """Child tuples (non-increasing) with ``n`` nodes in total."""
    pool = [t for s in range(1, n + 1) for t in _trees(s)]
    out = []

    def rec(remaining: int, hi: int, acc: List[Tree]):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for i in range(min(hi, len(pool) - 1), -1, -1):
            t = pool[i]
            if t.size <= remaining:
                acc.append(t)
                rec(remaining - t.size, i, acc)
                acc.pop()

    rec(n, len(pool) - 1, [])
    return tuple(out)


def enumerate_trees(max_nodes: int) -> List[Tree]:
    """All trees with exactly ``max_nodes`` nodes, ascending."""
    _guard(max_nodes)
    return list(_trees(max_nodes))


def enumerate_trees_upto(max_nodes: int) -> List[Tree]:
    _guard(max_nodes)
    return [t for n in range(1, max_nodes + 1) for t in _trees(n)]


def enumerate_forests(nodes: int, max_depth: Optional[int] = None) -> List[Forest]:
    """Forests with exactly ``nodes`` nodes (the child forests of ``nodes+1``-node trees)."""
    _guard(nodes + 1)
    out = [Forest(f) for f in _forests(nodes)] if nodes else [Forest()]
    if max_depth is not None:
        out = [f for f in out if f.depth <= max_depth]
    return out


def _compositions(n: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _components(n: int) -> Tuple[Component, ...]:
    seen = set()
    for p in range(1, n + 1):
        for comp in _compositions(n, p):
            stack = [()]
            for s in comp:
                stack = [seq + (t,) for seq in stack for t in _trees(s)]
            for seq in stack:
                seen.add(Component(seq))
    return tuple(sorted(seen))


def enumerate_components(nodes: int) -> List[Component]:
    _guard(nodes)
    return list(_components(nodes))


@lru_cache(maxsize=None)
def _fdds(n: int) -> Tuple[Fdds, ...]:
    if n == 0:
        return (Fdds(),)
    pool = [c for s in range(1, n + 1) for c in _components(s)]
    out = []

    def rec(remaining: int, hi: int, acc: List[Component]):
        if remaining == 0:
            out.append(Fdds(acc))
            return
        for i in range(hi, -1, -1):
            c = pool[i]
            if c.size <= remaining:
                acc.append(c)
                rec(remaining - c.size, i, acc)
                acc.pop()

    rec(n, len(pool) - 1, [])
    return tuple(sorted(out, key=lambda x: x.literal()))


def enumerate_fdds(max_nodes: int) -> List[Fdds]:
    """All FDDS with exactly ``max_nodes`` states, one per isomorphism class."""
    _guard(max_nodes)
    return list(_fdds(max_nodes))


def enumerate_fdds_upto(max_nodes: int, include_empty: bool = True) -> List[Fdds]:
    _guard(max_nodes)
    start = 0 if include_empty else 1
    return [x for n in range(start, max_nodes + 1) for x in _fdds(n)]


def _size_of_value(P: Polynomial, nodes: int) -> int:
    # node counts multiply under the direct product
    return sum(a.node_count * nodes ** k for k, a in P.terms)


def brute_solve(P: Polynomial, b: Fdds, max_nodes: int) -> Set[Fdds]:
    """Every ``X`` with at most ``max_nodes`` states and ``P(X) = b``."""
    _guard(max_nodes, BRUTE_MAX_NODES)
    target = b.node_count
    out = set()
    for n in range(0, max_nodes + 1):
        if _size_of_value(P, n) != target:
            continue
        for x in _fdds(n):
            if evaluate(P, x) == b:
                out.add(x)
    return out


def brute_forest_solve(P: Polynomial, b: Forest, max_depth: int, max_nodes: int) -> Set[Forest]:
    """Every forest ``X`` with bounded depth and node count and ``P(X) = b``."""
    from .solver import evaluate_forest

    _guard(max_nodes + 1, BRUTE_MAX_NODES + 1)
    out = set()
    for n in range(0, max_nodes + 1):
        for x in enumerate_forests(n, max_depth):
            if evaluate_forest(P, x) == b:
                out.add(x)
    return out


# --- random generators (not uniform; good enough to drive property tests) -----


def random_tree(rng: random.Random, nodes: int, max_depth: Optional[int] = None) -> Tree:
    """A random recursive tree with ``nodes`` nodes, optionally depth-capped.

    A depth cap of 0 only allows the single node.
    """
    if max_depth == 0:
        nodes = 1
    parent = [-1]
    depth = [0]
    for v in range(1, nodes):
        while True:
            u = rng.randrange(v)
            if max_depth is None or depth[u] < max_depth:
                break
        parent.append(u)
        depth.append(depth[u] + 1)
    kids: List[List[Tree]] = [[] for _ in range(nodes)]
    for v in range(nodes - 1, -1, -1):
        t = Tree.from_children(kids[v])
        if v == 0:
            return t
        kids[parent[v]].append(t)
    raise AssertionError("unreachable")


def random_forest(rng: random.Random, trees: int, max_nodes: int = 5, max_depth: Optional[int] = None) -> Forest:
    return Forest(random_tree(rng, rng.randint(1, max_nodes), max_depth) for _ in range(trees))


def random_fdds(rng: random.Random, nodes: int) -> Fdds:
    """The FDDS of a uniformly random self-map of ``range(nodes)``."""
    return Fdds.from_function([rng.randrange(nodes) for _ in range(nodes)]) if nodes else Fdds()


def random_component(rng: random.Random, nodes: int, period: Optional[int] = None) -> Component:
    p = period if period is not None else rng.randint(1, nodes)
    if p > nodes:
        raise ValueError("period larger than node count")
    sizes = [1] * p
    for _ in range(nodes - p):
        sizes[rng.randrange(p)] += 1
    return Component([random_tree(rng, s) for s in sizes])
