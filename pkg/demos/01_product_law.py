"""A tour of the FDDS semiring: sums, products and how cycles combine."""
from __future__ import annotations

from math import gcd, lcm

from fdds import Fdds, parse_fdds

C = Fdds.cycle

# An FDDS can be written as an edge list (one "u f(u)" pair per line) ...
swap = parse_fdds("a b\nb a\n")
print("two states swapped:", swap.literal())

# ... or as a literal: period, then the in-tree hanging on each cycle state.
tailed = parse_fdds("3:[(()),(),()]")
print("3-cycle with a tail of two:", tailed.literal(), "with", tailed.node_count, "states")

# Sums are disjoint unions, products run both systems in lockstep.
print("sum:    ", (swap + tailed).literal())
print("product:", (swap * tailed).literal())

# Two cycles of lengths p and q multiply into gcd(p, q) cycles of length lcm(p, q).
for p, q in [(2, 3), (4, 6), (6, 6)]:
    prod = C(p) * C(q)
    print(f"C{p} x C{q} = {prod.literal():<24} gcd={gcd(p, q)} lcm={lcm(p, q)}")

# Products distribute over sums, so polynomials in X make sense.
x = parse_fdds("2:[(()),()] + 1:[()]")
lhs = tailed * (x + swap)
rhs = tailed * x + tailed * swap
print("distributivity holds:", lhs == rhs)
