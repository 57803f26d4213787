"""Solving ``P(X) = B`` over forests, over unrolls and over FDDS.

Forest equations are solved one depth layer at a time, from the deepest
populated depth of ``B`` downwards.  Because products take the minimum depth
of their factors, ``gamma(., d)`` is a semiring morphism, and the trees of
``X`` of depth exactly ``d`` only show up in depth-``d`` trees of ``B``.  On a
layer every tree has depth ``d``, where the order is compatible with the
product, so the unknown trees come out smallest first by exact division.

Every returned solution is checked by evaluating the polynomial again.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .core import Fdds, Polynomial, evaluate
from .errors import MalformedPolynomial, NotPeriodic, NotSupportedNonInjective
from .trees import Forest, Tree, kth_root, path, tree_divide, tree_product
from .unroll import default_cut_depth, reroll, unroll_cut

__all__ = [
    "SolveOutcome",
    "find_min_divisible",
    "evaluate_forest",
    "solve_forest",
    "solve_unroll",
    "solve_fdds",
    "verify",
]

log = logging.getLogger(__name__)

SOLUTION = "solution"
NO_SOLUTION = "no_solution"


@dataclass
class SolveOutcome:
    """Result of a solver call.

    ``trace`` records one ``(depth, index, accepted)`` entry per decision:
    ``index`` is None when the least tree of the layer was already known,
    otherwise it names the coefficient tried as divisor for a new tree.
    """

    status: str
    value: Optional[Union[Forest, Fdds]] = None
    trace: List[Tuple[int, Optional[int], bool]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == SOLUTION

    def __bool__(self) -> bool:
        return self.ok


def find_min_divisible(b: Forest, a1: Tree, k: int) -> Optional[Tuple[Tree, Tree]]:
    """Smallest tree of ``b`` of the form ``a1 * x**k``, with that ``x``."""
    for t, _ in b.items():
        for q in tree_divide(t, a1):
            x = kth_root(q, k)
            if x is not None:
                return t, x
    return None


def evaluate_forest(P: Polynomial, x: Forest) -> Forest:
    """``sum A_i x**k_i`` over forests; the constant term is added as is."""
    total = Forest()
    for k, a in P.terms:
        total = total + (a if k == 0 else a * x.power(k))
    return total


def _powers_add(powers: List[Forest], y: Tree, d: int) -> List[Forest]:
    """Powers ``0..K`` of ``S + y`` from the powers of ``S`` (binomial expansion)."""
    ypow = [Forest((path(d),))]
    for _ in range(1, len(powers)):
        ypow.append(ypow[-1] * y)
    out = []
    for r in range(len(powers)):
        acc = Forest()
        for s in range(r + 1):
            term = ypow[s] * powers[r - s] if s else powers[r]
            acc = acc + term.scale(comb(r, s))
        out.append(acc)
    return out


def _layer(
    terms: Sequence[Tuple[int, Forest]],
    W: Forest,
    R: Forest,
    d: int,
    trace: list,
) -> Optional[List[Tree]]:
    """New depth-``d`` trees ``Y`` with ``sum C_i ((W+Y)**k_i - W**k_i) = R``."""
    K = max(k for k, _ in terms)
    mins = [(k, c.min()) for k, c in terms]
    powers = [Forest((path(d),))]
    for _ in range(K):
        powers.append(powers[-1] * W)

    def contribution(old: List[Forest], new: List[Forest]) -> Forest:
        out = Forest()
        for k, c in terms:
            out = out + c * new[k].subtract(old[k])
        return out

    if W:
        w1 = W.min()
        threshold = min(tree_product(c, w1 ** k) for k, c in mins)
        present = R.min() >= threshold
    else:
        present = False
    if present:
        u = W.min()
        trace.append((d, None, True))
    else:
        # the smallest tree of X at this depth is new; it is the unique y
        # with min_i c_i y**k_i equal to min(R)
        target = R.min()
        u = None
        for i, (k, c) in enumerate(mins):
            found = find_min_divisible(R, c, k)
            ok = False
            if found is not None and found[0] is target:
                y = found[1]
                ok = min(tree_product(ci, y ** ki) for ki, ci in mins) is target
                if ok and W and not y < W.min():
                    ok = False
            trace.append((d, i, ok))
            if ok:
                u = y
                break
        if u is None:
            return None
        new = _powers_add(powers, u, d)
        R = R.subtract(contribution(powers, new))
        if R is None:
            return None
        powers = new
    found_trees = [] if present else [u]
    g = min(tree_product(c, u ** (k - 1)) if k > 1 else c for k, c in mins)
    while R:
        t = R.min()
        q = tree_divide(t, g)
        if not q:
            return None
        (y,) = q
        new = _powers_add(powers, y, d)
        R = R.subtract(contribution(powers, new))
        if R is None:
            return None
        powers = new
        found_trees.append(y)
    return found_trees


def solve_forest(P: Polynomial, b: Forest) -> SolveOutcome:
    """Unique forest ``X`` of depth at most the deepest coefficient with ``P(X) = b``."""
    P.require_nonconstant()
    trace: list = []
    const = P.constant
    rhs = b
    if const is not None:
        rhs = b.subtract(const)
        if rhs is None:
            return SolveOutcome(NO_SOLUTION, None, trace)
    terms = P.nonconstant()
    d_max = max(a.depth for _, a in terms)
    if not rhs:
        x = Forest()
        return _finish(P, x, b, trace)
    if rhs.depth > d_max:
        return SolveOutcome(NO_SOLUTION, None, trace)
    depths = sorted({t.depth for t in rhs.distinct()}, reverse=True)
    X = Forest()
    for d in depths:
        gamma_terms = [(k, a.gamma(d)) for k, a in terms]
        gamma_terms = [(k, a) for k, a in gamma_terms if a]
        T = Forest()
        for k, a in gamma_terms:
            if X:
                T = T + a * X.power(k)
        R = rhs.gamma(d).subtract(T)
        if R is None or R.depth > d:
            return SolveOutcome(NO_SOLUTION, None, trace)
        if not R:
            continue
        if not gamma_terms:
            return SolveOutcome(NO_SOLUTION, None, trace)
        layer_terms = [(k, a.cut(d)) for k, a in gamma_terms]
        ys = _layer(layer_terms, X.cut(d), R, d, trace)
        if ys is None:
            return SolveOutcome(NO_SOLUTION, None, trace)
        X = X + Forest(ys)
    return _finish(P, X, b, trace)


def _finish(P: Polynomial, x, b, trace) -> SolveOutcome:
    if isinstance(x, Forest):
        ok = evaluate_forest(P, x) == b
    else:
        ok = verify(P, x, b)
    return SolveOutcome(SOLUTION if ok else NO_SOLUTION, x if ok else None, trace)


def _cut_polynomial(P: Polynomial, n: int) -> Polynomial:
    return P.map(lambda a: unroll_cut(a, n))


def _divisors_upto(values, bound: int) -> List[int]:
    out = set()
    for v in values:
        for q in range(1, min(v, bound) + 1):
            if v % q == 0:
                out.add(q)
    return sorted(out)


def solve_unroll(P: Polynomial, b: Fdds, n: Optional[int] = None) -> SolveOutcome:
    """An FDDS ``X`` whose unroll solves ``P(X) = b`` between unrolls."""
    P.require_nonconstant()
    if n is None:
        n = default_cut_depth(P, b)
    target = unroll_cut(b, n)
    out = solve_forest(_cut_polynomial(P, n), target)
    if not out.ok:
        return SolveOutcome(NO_SOLUTION, None, out.trace)
    remaining = out.value
    alpha = b.periodic_count
    d = b.depth
    periods = [q for q in _divisors_upto(b.cycle_lengths(), alpha) if d + 2 * q <= n]
    comps = []
    while remaining:
        t = remaining.min()
        placed = False
        for q in periods:
            try:
                c = reroll(t, q, d)
            except NotPeriodic:
                continue
            rest = remaining.subtract(unroll_cut(Fdds({c: 1}), n))
            if rest is not None:
                comps.append(c)
                remaining = rest
                placed = True
                break
        if not placed:
            return SolveOutcome(NO_SOLUTION, None, out.trace)
    x = Fdds(comps)
    if unroll_cut(evaluate(P, x), n) != target:
        return SolveOutcome(NO_SOLUTION, None, out.trace)
    return SolveOutcome(SOLUTION, x, out.trace)


def verify(P: Polynomial, x: Fdds, b: Fdds) -> bool:
    return evaluate(P, x) == b


def solve_fdds(P: Polynomial, b: Fdds, bound: str = "reroll") -> SolveOutcome:
    """The unique ``X`` with ``P(X) = b``, for ``P`` with a cancelable non-constant coefficient.

    Components of ``X`` are found one at a time, by increasing cycle length:
    the shortest cycle ``p`` left in ``b - P(X found so far)`` is the period of
    a missing component, whose unroll tree is read off the unique forest
    solution of the equation restricted to cycle lengths dividing ``p``.

    ``bound`` picks the unroll cut depth of that forest equation: ``"reroll"``
    uses ``depth(b) + 2p``, the least depth at which re-rolling is exact,
    ``"unroll"`` uses ``2 alpha**2 + depth`` for the restricted right side.
    """
    P.require_nonconstant()
    if bound not in ("reroll", "unroll"):
        raise ValueError(f"unknown bound {bound!r}")
    nonconst = P.nonconstant()
    if not any(a.is_cancelable for _, a in nonconst):
        raise NotSupportedNonInjective("no non-constant coefficient contains a dendron")
    trace: list = []
    const = P.constant
    rhs = b if const is None else b.subtract(const)
    if rhs is None:
        return SolveOutcome(NO_SOLUTION, None, trace)
    Pp = Polynomial(nonconst)
    d = rhs.depth
    forest_solutions: Dict[int, Tuple[int, Optional[Forest]]] = {}
    found: List = []
    limit = len(rhs) + 1
    while True:
        x = Fdds(found)
        R = rhs.subtract(evaluate(Pp, x)) if found else rhs
        if R is None:
            return SolveOutcome(NO_SOLUTION, None, trace)
        if not R:
            return _finish(P, x, b, trace)
        if len(found) >= limit:
            return SolveOutcome(NO_SOLUTION, None, trace)
        p = min(R.cycle_lengths())
        if p not in forest_solutions:
            sub_rhs = rhs.set_dive(p)
            n = d + 2 * p if bound == "reroll" else max(default_cut_depth(Pp, sub_rhs), d + 2 * p)
            sub = Polynomial([(k, a.set_dive(p)) for k, a in nonconst])
            out = solve_forest(_cut_polynomial(sub, n), unroll_cut(sub_rhs, n))
            trace.extend(out.trace)
            forest_solutions[p] = (n, out.value if out.ok else None)
        n, y = forest_solutions[p]
        if y is None:
            return SolveOutcome(NO_SOLUTION, None, trace)
        left = y.subtract(unroll_cut(x.set_dive(p), n))
        if not left:
            return SolveOutcome(NO_SOLUTION, None, trace)
        try:
            comp = reroll(left.min(), p, d)
        except NotPeriodic:
            return SolveOutcome(NO_SOLUTION, None, trace)
        found.append(comp)
