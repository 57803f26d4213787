"""Solve a polynomial equation P(X) = B over FDDS and read the trace."""
from __future__ import annotations

from fdds import Fdds, Polynomial, evaluate, is_injective, parse_fdds, solve_fdds, unroll_cut

C = Fdds.cycle

# P(X) = (D + C2) X^2 + C3 X + C1, where D is a fixed point with a tail.
# D is a dendron, hence cancelable, hence P is injective.
D = parse_fdds("1:[(())]")
P = Polynomial({2: D + C(2), 1: C(3), 0: C(1)})
print("P is injective:", is_injective(P))

secret = parse_fdds("2:[(()),()] + 1:[(()())]")
b = evaluate(P, secret)
print(f"B has {b.node_count} states and {len(b)} components")

out = solve_fdds(P, b)
print("status:", out.status)
print("recovered X:", out.value.literal())
print("matches the hidden X:", out.value == secret)
print("solver decisions (depth, coefficient tried or None if already known, accepted):")
for step in out.trace[:5]:
    print("   ", step)

# Perturb B by one state: there is no solution, and the solver says so.
broken = b + C(1)
print("perturbed B:", solve_fdds(P, broken).status)

# The unroll of a solution is a forest of infinite trees; here are its depth-3 cuts.
print("depth-3 unroll cut of X:")
print(unroll_cut(secret, 3).literal())
