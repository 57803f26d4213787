"""When no coefficient is cancelable, two different systems share an image."""
from __future__ import annotations

from fdds import Fdds, Polynomial, counterexample, counterexample_monomial, evaluate, is_injective

C = Fdds.cycle

# Multiplying by a bare 2-cycle forgets information.
X, Y = counterexample_monomial({2}, 1)
print("X =", X.literal())
print("Y =", Y.literal())
print("C2 X =", (C(2) * X).literal())
print("C2 Y =", (C(2) * Y).literal())

# A polynomial whose coefficients are all permutations is never injective.
P = Polynomial({1: C(2), 2: C(3) + C(6), 0: C(4)})
print("P injective:", is_injective(P))
X, Y = counterexample(P)
print("witness pair differs:", X != Y, "| images agree:", evaluate(P, X) == evaluate(P, Y))
print(f"sizes: |X| = {X.node_count}, |Y| = {Y.node_count}")
