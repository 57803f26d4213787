"""Injectivity of univariate FDDS polynomials and explicit collisions.

A polynomial is injective exactly when one of its non-constant coefficients
has a fixed point (contains a dendron).  Otherwise every coefficient
component has cycle length at least 2, and two permutation FDDS built from
the set of those cycle lengths collide under every power of ``X``.
"""
from __future__ import annotations

import logging
from itertools import combinations
from math import gcd, lcm, prod
from typing import Iterable, List, Optional, Sequence, Tuple

from .core import Fdds, Polynomial, evaluate
from .errors import ConstructionFailed

__all__ = [
    "delta",
    "alpha_beta",
    "counterexample_monomial",
    "is_injective",
    "counterexample",
]

log = logging.getLogger(__name__)


def _check_set(A: Iterable[int]) -> Tuple[int, ...]:
    A = tuple(sorted(set(A)))
    if not A:
        raise ValueError("the cycle-length set must not be empty")
    if any(a < 2 for a in A):
        raise ValueError("cycle lengths must be at least 2")
    return A


def delta(J: Iterable[int]) -> int:
    """``delta`` of a set, built by inserting its elements in ascending order."""
    d, L = 1, 1
    for a in sorted(set(J)):
        d *= gcd(a, L)
        L = lcm(L, a)
    return d


def alpha_beta(I: Iterable[int], A: Iterable[int]) -> Tuple[int, int]:
    I = frozenset(I)
    A = frozenset(A)
    if not I <= A:
        raise ValueError("I must be a subset of A")
    alpha = delta(A) * prod(A)
    beta = alpha + (-1) ** len(I) * delta(I) * prod(A - I)
    return alpha, beta


def _alpha_beta_variant(I: frozenset, A: frozenset) -> Tuple[int, int]:
    alpha = delta(I) * prod(A - I) + delta(A) * prod(A)
    beta = alpha + (-1) ** len(I) * delta(I) * prod(A - I)
    return alpha, beta


def _subsets(A: Sequence[int]):
    for r in range(len(A) + 1):
        for I in combinations(A, r):
            yield frozenset(I)


def _build(A: Sequence[int], coeffs) -> Tuple[Fdds, Fdds]:
    X: dict = {}
    Y: dict = {}
    for I in _subsets(A):
        a, b = coeffs(I, frozenset(A))
        if b < 0:
            raise ConstructionFailed(f"negative multiplicity for I={sorted(I)}")
        q = lcm(*I) if I else 1
        X[q] = X.get(q, 0) + a
        Y[q] = Y.get(q, 0) + b
    fx = Fdds()
    fy = Fdds()
    for q in sorted(X):
        fx = fx + Fdds.cycle(q, X[q])
        fy = fy + Fdds.cycle(q, Y[q])
    return fx, fy


def _monomial_holds(A: Sequence[int], k: int, X: Fdds, Y: Fdds) -> bool:
    if X == Y:
        return False
    Xk, Yk = X ** k, Y ** k
    return all(Fdds.cycle(b) * Xk == Fdds.cycle(b) * Yk for b in A)


def counterexample_monomial(A: Iterable[int], k: int) -> Tuple[Fdds, Fdds]:
    """Distinct permutation FDDS ``X, Y`` with ``C_b X**k = C_b Y**k`` for all ``b`` in ``A``."""
    A = _check_set(A)
    if k < 1:
        raise ValueError("k must be positive")
    X, Y = _build(A, alpha_beta)
    if _monomial_holds(A, k, X, Y):
        return X, Y
    log.warning("alpha/beta construction failed for A=%s k=%d; trying the variant", A, k)
    X, Y = _build(A, _alpha_beta_variant)
    if _monomial_holds(A, k, X, Y):
        log.warning("variant construction used for A=%s k=%d", A, k)
        return X, Y
    raise ConstructionFailed(f"no verified witness for A={list(A)}, k={k}")


def is_injective(P: Polynomial) -> bool:
    """True iff some non-constant coefficient contains a fixed point."""
    P.require_nonconstant()
    return any(a.is_cancelable for _, a in P.nonconstant())


def counterexample(P: Polynomial) -> Optional[Tuple[Fdds, Fdds]]:
    """Two distinct FDDS with the same image under ``P``, or None when ``P`` is injective."""
    if is_injective(P):
        return None
    A = sorted({c.cycle_length for _, a in P.nonconstant() for c in a.distinct()})
    ks = [k for k, _ in P.nonconstant()]
    X, Y = _build(A, alpha_beta)
    if not all(_monomial_holds(A, k, X, Y) for k in ks):
        log.warning("alpha/beta construction failed for A=%s; trying the variant", A)
        X, Y = _build(A, _alpha_beta_variant)
        if not all(_monomial_holds(A, k, X, Y) for k in ks):
            raise ConstructionFailed(f"no verified witness for A={A}")
        log.warning("variant construction used for A=%s", A)
    if X == Y or evaluate(P, X) != evaluate(P, Y):
        raise ConstructionFailed("witness does not collide under the full polynomial")
    return X, Y
