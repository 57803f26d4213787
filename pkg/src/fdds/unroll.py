"""Unroll trees of FDDS cut at a finite depth, and rolling them back up.

The unroll tree of a periodic state ``u`` has ``u`` as root and the
preimages of a node as its children.  For a component whose cyclic states
carry the in-trees ``T_0 .. T_{p-1}`` (``f`` sends state ``i`` to ``i+1``),
the children of state ``i`` are the children of ``T_i`` together with state
``i-1``, so the depth-``m`` cut is built from the depth-``m-1`` cuts.
"""
from __future__ import annotations

import threading
from typing import Dict, List, Optional, Tuple

from .core import Component, Fdds, Polynomial
from .errors import NotPeriodic
from .trees import LEAF, Forest, Tree, cut

__all__ = [
    "unroll_trees",
    "unroll_cut",
    "min_unroll_tree_cut",
    "default_cut_depth",
    "reroll",
]

# component -> list of levels; levels[m][i] is the depth-m cut above state i
_LEVELS: Dict[Component, List[Tuple[Tree, ...]]] = {}
_LOCK = threading.Lock()


def unroll_trees(c: Component, n: int) -> Tuple[Tree, ...]:
    """Cut unroll trees of the cyclic states of ``c``, in cycle order."""
    if n < 0:
        raise ValueError("cut depth must be non-negative")
    with _LOCK:
        levels = _LEVELS.get(c)
        if levels is None:
            levels = _LEVELS[c] = [(LEAF,) * c.cycle_length]
    p = c.cycle_length
    while len(levels) <= n:
        m = len(levels)
        prev = levels[-1]
        row = []
        for i, t in enumerate(c.trees):
            kids = [cut(ch, m - 1) for ch in t.children]
            kids.append(prev[i - 1])
            row.append(Tree.from_children(kids))
        levels.append(tuple(row))
    assert len(levels[n]) == p
    return levels[n]


def unroll_cut(x: Fdds, n: int) -> Forest:
    """One depth-``n`` tree per periodic state of ``x``."""
    counts: Dict[Tree, int] = {}
    for c, m in x.items():
        for t in unroll_trees(c, n):
            counts[t] = counts.get(t, 0) + m
    return Forest(counts)


def min_unroll_tree_cut(c: Component, n: Optional[int] = None) -> Tree:
    if n is None:
        n = c.depth + c.cycle_length
    return min(unroll_trees(c, n))


def default_cut_depth(P: Polynomial, b: Fdds) -> int:
    """``2 * alpha**2 + depth(b)``, alpha being the periodic state count of ``b``."""
    if not b:
        return 0
    alpha = b.periodic_count
    return 2 * alpha * alpha + b.depth


def reroll(t: Tree, p: int, d: int) -> Component:
    """Recover the period-``p`` component, transient depth at most ``d``, behind ``t``.

    ``t`` must be a cut unroll tree with ``depth(t) >= d + 2p``.  Walking down
    from the root, the only child reaching depth ``d`` or more is the previous
    cyclic state; the other children are the transient decorations.
    """
    if p < 1:
        raise ValueError("period must be positive")
    n = t.depth
    if n < d + 2 * p:
        raise ValueError(f"cut depth {n} is below the reroll bound {d + 2 * p}")
    decorations = []
    node = t
    for j in range(n - d):
        spine = [ch for ch in node.children if ch.depth >= d]
        if len(spine) != 1:
            raise NotPeriodic(f"{len(spine)} deep branches at spine depth {j}")
        nxt = spine[0]
        rest = list(node.children)
        rest.remove(nxt)
        decorations.append(Tree.from_children(rest))
        node = nxt
    for j in range(len(decorations) - p):
        if decorations[j] is not decorations[j + p]:
            raise NotPeriodic(f"decorations at spine depths {j} and {j + p} differ")
    comp = Component([decorations[j] for j in range(p - 1, -1, -1)])
    if t not in unroll_trees(comp, n):
        raise NotPeriodic("rebuilt component does not reproduce the tree")
    return comp
