"""Finite discrete dynamical systems as multisets of connected components.

A component is a cycle of length ``p`` whose ``i``-th state (``f`` maps state
``i`` to state ``i+1``) carries the in-tree of transient states hanging on
it.  The sequence of in-trees is stored at its least rotation, so two
components are isomorphic iff their ``(p, trees)`` tuples coincide.
"""
from __future__ import annotations

import re
from collections import Counter
from math import gcd
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import MalformedInput, MalformedPolynomial
from .trees import LEAF, Forest, Tree, parse_tree

__all__ = [
    "Component",
    "Fdds",
    "Polynomial",
    "least_rotation",
    "parse_fdds",
    "canonicalize",
    "fdds_sum",
    "fdds_product",
    "fdds_subtract",
    "set_dive",
    "set_size",
    "is_cancelable",
    "is_dendron",
    "compare_cyclefirst",
    "compare_treefirst",
    "evaluate",
    "to_dot",
]


def least_rotation(seq: Sequence) -> int:
    """Start index of the lexicographically least rotation (Booth, linear time)."""
    n = len(seq)
    if n == 0:
        return 0
    s = list(seq) * 2
    fail = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = fail[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k


class Component:
    """A connected FDDS: one cycle and the in-trees rooted on its states."""

    __slots__ = ("trees", "_hash", "_graph")

    def __init__(self, trees: Sequence[Tree]):
        trees = tuple(trees)
        if not trees:
            raise ValueError("a component needs at least one cyclic state")
        ranks = {t: r for r, t in enumerate(sorted(set(trees)))}
        start = least_rotation([ranks[t] for t in trees])
        self.trees = trees[start:] + trees[:start]
        self._hash = hash((len(self.trees),) + tuple(t.serial for t in self.trees))
        self._graph = None

    @classmethod
    def cycle(cls, p: int) -> "Component":
        return cls((LEAF,) * p)

    @property
    def cycle_length(self) -> int:
        return len(self.trees)

    @property
    def depth(self) -> int:
        return max(t.depth for t in self.trees)

    @property
    def size(self) -> int:
        return sum(t.size for t in self.trees)

    @property
    def is_dendron(self) -> bool:
        return len(self.trees) == 1

    def __eq__(self, other):
        if not isinstance(other, Component):
            return NotImplemented
        return self.trees == other.trees

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        if not isinstance(other, Component):
            return NotImplemented
        return (len(self.trees), self.trees) < (len(other.trees), other.trees)

    def literal(self) -> str:
        return f"{len(self.trees)}:[" + ",".join(t.code for t in self.trees) + "]"

    def __repr__(self):
        return f"Component({self.literal()!r})"

    def graph(self) -> Tuple[List[int], int]:
        """Explicit map ``f`` on ``0..size-1``; states ``0..p-1`` form the cycle."""
        if self._graph is None:
            p = len(self.trees)
            f = [(i + 1) % p for i in range(p)]
            stack = [(t, i) for i, t in enumerate(self.trees)]
            while stack:
                t, node = stack.pop()
                for c in t.children:
                    f.append(node)
                    stack.append((c, len(f) - 1))
            self._graph = (f, p)
        return self._graph


def _components_of(f: Sequence[int]) -> Counter:
    """Decompose an explicit functional graph into canonical components."""
    n = len(f)
    state = [0] * n
    on_cycle = [False] * n
    cycles = []
    for s in range(n):
        if state[s]:
            continue
        walk = []
        pos = {}
        v = s
        while state[v] == 0:
            state[v] = 1
            pos[v] = len(walk)
            walk.append(v)
            v = f[v]
        if state[v] == 1:
            cyc = walk[pos[v]:]
            for u in cyc:
                on_cycle[u] = True
            cycles.append(cyc)
        for u in walk:
            state[u] = 2
    preds: List[List[int]] = [[] for _ in range(n)]
    for v in range(n):
        if not on_cycle[v]:
            preds[f[v]].append(v)
    order = [v for v in range(n) if on_cycle[v]]
    i = 0
    while i < len(order):
        order.extend(preds[order[i]])
        i += 1
    tree: List[Optional[Tree]] = [None] * n
    for v in reversed(order):
        tree[v] = Tree.from_children([tree[u] for u in preds[v]])
    out: Counter = Counter()
    for cyc in cycles:
        out[Component([tree[v] for v in cyc])] += 1
    return out


_COMPONENT_PRODUCT: Dict[Tuple[Component, Component], Counter] = {}


def component_product(a: Component, b: Component) -> Counter:
    """Components of the direct product of two connected FDDS."""
    key = (a, b) if hash(a) <= hash(b) else (b, a)
    hit = _COMPONENT_PRODUCT.get(key)
    if hit is not None:
        return hit
    fa, _ = a.graph()
    fb, _ = b.graph()
    nb = len(fb)
    f = [fa[u] * nb + fb[v] for u in range(len(fa)) for v in range(nb)]
    res = _components_of(f)
    _COMPONENT_PRODUCT[key] = res
    return res


class Fdds:
    """An FDDS up to isomorphism: a multiset of components with multiplicities."""

    __slots__ = ("_counts", "_hash")

    def __init__(self, components: Union[Iterable[Component], Mapping[Component, int]] = ()):
        if isinstance(components, Mapping):
            counts = {c: int(m) for c, m in components.items() if m}
            if any(m < 0 for m in counts.values()):
                raise ValueError("negative multiplicity")
        else:
            counts = dict(Counter(components))
        self._counts = counts
        self._hash = None

    @classmethod
    def _wrap(cls, counts: Dict[Component, int]) -> "Fdds":
        x = object.__new__(cls)
        x._counts = counts
        x._hash = None
        return x

    @classmethod
    def from_function(cls, f: Sequence[int]) -> "Fdds":
        n = len(f)
        if any(not 0 <= v < n for v in f):
            raise ValueError("f must map range(n) into itself")
        return cls._wrap(dict(_components_of(list(f))))

    @classmethod
    def cycle(cls, p: int, count: int = 1) -> "Fdds":
        return cls({Component.cycle(p): count})

    @classmethod
    def one(cls) -> "Fdds":
        return cls.cycle(1)

    def items(self) -> Iterator[Tuple[Component, int]]:
        for c in sorted(self._counts):
            yield c, self._counts[c]

    def components(self) -> Iterator[Component]:
        for c, m in self.items():
            for _ in range(m):
                yield c

    def count(self, c: Component) -> int:
        return self._counts.get(c, 0)

    def distinct(self):
        return self._counts.keys()

    def __len__(self) -> int:
        return sum(self._counts.values())

    def __bool__(self) -> bool:
        return bool(self._counts)

    @property
    def node_count(self) -> int:
        return sum(c.size * m for c, m in self._counts.items())

    @property
    def periodic_count(self) -> int:
        return sum(c.cycle_length * m for c, m in self._counts.items())

    @property
    def depth(self) -> int:
        return max((c.depth for c in self._counts), default=0)

    def cycle_lengths(self) -> List[int]:
        return sorted({c.cycle_length for c in self._counts})

    def __add__(self, other: "Fdds") -> "Fdds":
        if not isinstance(other, Fdds):
            return NotImplemented
        counts = dict(self._counts)
        for c, m in other._counts.items():
            counts[c] = counts.get(c, 0) + m
        return Fdds._wrap(counts)

    def __mul__(self, other: "Fdds") -> "Fdds":
        if not isinstance(other, Fdds):
            return NotImplemented
        counts: Dict[Component, int] = {}
        for a, m in self._counts.items():
            for b, n in other._counts.items():
                for c, k in component_product(a, b).items():
                    counts[c] = counts.get(c, 0) + m * n * k
        return Fdds._wrap(counts)

    def __pow__(self, k: int) -> "Fdds":
        if k < 0:
            raise ValueError("negative exponent")
        r = Fdds.one()
        for _ in range(k):
            r = r * self
        return r

    def scale(self, k: int) -> "Fdds":
        if k < 0:
            raise ValueError("negative multiplicity")
        return Fdds._wrap({c: m * k for c, m in self._counts.items()} if k else {})

    def subtract(self, other: "Fdds") -> Optional["Fdds"]:
        counts = dict(self._counts)
        for c, m in other._counts.items():
            have = counts.get(c, 0)
            if have < m:
                return None
            if have == m:
                del counts[c]
            else:
                counts[c] = have - m
        return Fdds._wrap(counts)

    def set_dive(self, p: int) -> "Fdds":
        return Fdds._wrap({c: m for c, m in self._counts.items() if p % c.cycle_length == 0})

    def set_size(self, p: int) -> "Fdds":
        return Fdds._wrap({c: m for c, m in self._counts.items() if c.cycle_length == p})

    @property
    def is_cancelable(self) -> bool:
        return any(c.is_dendron for c in self._counts)

    def __eq__(self, other):
        if not isinstance(other, Fdds):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def literal(self) -> str:
        if not self._counts:
            return "0"
        return " + ".join(
            (f"{m}*" if m > 1 else "") + c.literal() for c, m in self.items()
        )

    def to_function(self) -> List[int]:
        """An explicit map realizing this FDDS (components laid out consecutively)."""
        f: List[int] = []
        for c in self.components():
            g, _ = c.graph()
            base = len(f)
            f.extend(base + v for v in g)
        return f

    def __repr__(self):
        return f"Fdds({self.literal()!r})"

    def __str__(self):
        return self.literal()


# --- parsing ------------------------------------------------------------------

_LITERAL = re.compile(r"^\s*(?:\d+\s*\*\s*)?\d+\s*:\s*\[")
_TERM = re.compile(r"^\s*(?:(\d+)\s*\*\s*)?(\d+)\s*:\s*\[(.*)\]\s*$", re.S)


def _strip_comments(text: str) -> List[Tuple[int, str]]:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((lineno, body))
    return lines


def _parse_literal(lines: List[Tuple[int, str]]) -> Fdds:
    counts: Dict[Component, int] = {}
    for lineno, body in lines:
        if body == "0":
            continue
        for part in body.split("+"):
            if not part.strip():
                continue
            m = _TERM.match(part)
            if not m:
                raise MalformedInput(f"bad component literal {part.strip()!r}", lineno, part.strip())
            mult = int(m.group(1)) if m.group(1) else 1
            p = int(m.group(2))
            codes = [c for c in m.group(3).split(",") if c.strip()]
            if p < 1 or len(codes) != p:
                raise MalformedInput(
                    f"component {part.strip()!r} declares cycle length {p} but lists {len(codes)} trees",
                    lineno,
                    part.strip(),
                )
            comp = Component([parse_tree(c, line=lineno) for c in codes])
            counts[comp] = counts.get(comp, 0) + mult
    return Fdds._wrap({c: m for c, m in counts.items() if m})


def _parse_edges(lines: List[Tuple[int, str]]) -> Fdds:
    index: Dict[str, int] = {}
    target: Dict[str, Tuple[str, int]] = {}
    for lineno, body in lines:
        tokens = body.split()
        if len(tokens) != 2:
            raise MalformedInput(f"expected 'u v', got {body!r}", lineno, body)
        u, v = tokens
        if u in target:
            raise MalformedInput(f"vertex {u!r} has out-degree greater than 1", lineno, u)
        target[u] = (v, lineno)
        index.setdefault(u, len(index))
    f = [0] * len(index)
    for u, (v, lineno) in target.items():
        if v not in index:
            raise MalformedInput(f"vertex {v!r} has no outgoing edge", lineno, v)
        f[index[u]] = index[v]
    return Fdds.from_function(f)


def parse_fdds(text: str) -> Fdds:
    """Parse an edge list (``u v`` meaning ``f(u) = v``) or a component literal.

    Component literals look like ``2*1:[()] + 3:[(),(()),()]``; ``0`` is the
    empty FDDS.  ``#`` starts a comment in both formats.
    """
    lines = _strip_comments(text)
    if not lines:
        return Fdds()
    if _LITERAL.match(lines[0][1]) or lines[0][1] == "0":
        return _parse_literal(lines)
    return _parse_edges(lines)


def canonicalize(x: Fdds) -> Fdds:
    """Return the canonical form; values are canonical on construction, so this re-derives it."""
    return Fdds._wrap({Component(c.trees): m for c, m in x._counts.items()})


# --- operations ---------------------------------------------------------------


def fdds_sum(a: Fdds, b: Fdds) -> Fdds:
    return a + b


def fdds_product(a: Fdds, b: Fdds) -> Fdds:
    return a * b


def fdds_subtract(b: Fdds, a: Fdds) -> Optional[Fdds]:
    return b.subtract(a)


def set_dive(x: Fdds, p: int) -> Fdds:
    if p < 1:
        raise ValueError("p must be positive")
    return x.set_dive(p)


def set_size(x: Fdds, p: int) -> Fdds:
    if p < 1:
        raise ValueError("p must be positive")
    return x.set_size(p)


def is_cancelable(a: Fdds) -> bool:
    return a.is_cancelable


def is_dendron(c: Component) -> bool:
    return c.is_dendron


def _order_depth(c1: Component, c2: Component) -> int:
    # deep enough for the cut to determine a component of either period
    return max(c1.depth, c2.depth) + 2 * max(c1.cycle_length, c2.cycle_length)


def compare_cyclefirst(c1: Component, c2: Component) -> int:
    """Order by cycle length, then by smallest unroll tree."""
    from .unroll import min_unroll_tree_cut

    if c1.cycle_length != c2.cycle_length:
        return -1 if c1.cycle_length < c2.cycle_length else 1
    n = _order_depth(c1, c2)
    t1, t2 = min_unroll_tree_cut(c1, n), min_unroll_tree_cut(c2, n)
    return (t1 > t2) - (t1 < t2)


def compare_treefirst(c1: Component, c2: Component) -> int:
    """Order by smallest unroll tree, then by cycle length."""
    from .unroll import min_unroll_tree_cut

    n = _order_depth(c1, c2)
    t1, t2 = min_unroll_tree_cut(c1, n), min_unroll_tree_cut(c2, n)
    if t1 is not t2:
        return -1 if t1 < t2 else 1
    return (c1.cycle_length > c2.cycle_length) - (c1.cycle_length < c2.cycle_length)


# --- polynomials --------------------------------------------------------------

Carrier = Union[Fdds, Forest]


class Polynomial:
    """A univariate polynomial: strictly increasing exponents, no zero coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Union[Mapping[int, Carrier], Iterable[Tuple[int, Carrier]]]):
        pairs = list(terms.items()) if isinstance(terms, Mapping) else list(terms)
        seen = set()
        kept = []
        for k, a in pairs:
            if k < 0:
                raise ValueError("exponents must be non-negative")
            if k in seen:
                raise ValueError(f"duplicate exponent {k}")
            seen.add(k)
            if len(a):
                kept.append((int(k), a))
        kept.sort(key=lambda term: term[0])
        self.terms: Tuple[Tuple[int, Carrier], ...] = tuple(kept)

    @property
    def constant(self) -> Optional[Carrier]:
        if self.terms and self.terms[0][0] == 0:
            return self.terms[0][1]
        return None

    def nonconstant(self) -> List[Tuple[int, Carrier]]:
        return [(k, a) for k, a in self.terms if k > 0]

    def without_constant(self) -> "Polynomial":
        return Polynomial(self.nonconstant())

    @property
    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else -1

    def map(self, fn) -> "Polynomial":
        return Polynomial([(k, fn(a)) for k, a in self.terms])

    def require_nonconstant(self) -> None:
        if not self.nonconstant():
            raise MalformedPolynomial("polynomial has no non-constant term")

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        body = " + ".join(
            f"({a.literal() if isinstance(a, Fdds) else a!r})" + (f"X^{k}" if k else "")
            for k, a in self.terms
        )
        return f"Polynomial({body or '0'})"


def evaluate(P: Polynomial, x: Fdds) -> Fdds:
    """``sum A_i x**k_i`` over FDDS, with ``x**0`` the fixed point."""
    total = Fdds()
    power = Fdds.one()
    e = 0
    for k, a in P.terms:
        while e < k:
            power = power * x
            e += 1
        total = total + a * power
    return total


# --- DOT ----------------------------------------------------------------------


def to_dot(x: Fdds, name: str = "fdds") -> str:
    """Graphviz source: periodic states bold on their cycle, transient edges plain."""
    out = [f"digraph {name} {{", '  node [shape=circle, label="", width=0.2];']
    k = 0
    for ci, (comp, mult) in enumerate(x.items()):
        f, p = comp.graph()
        for copy in range(mult):
            prefix = f"c{ci}_{copy}_"
            out.append(f"  subgraph cluster_{k} {{")
            out.append(f'    label="{comp.literal()}"; style=dotted;')
            for v in range(p):
                out.append(f'    {prefix}{v} [style=filled, fillcolor="#ffd27f"];')
            for v in range(len(f)):
                style = ' [color="#d04000", penwidth=2]' if v < p else ""
                out.append(f"    {prefix}{v} -> {prefix}{f[v]}{style};")
            out.append("  }")
            k += 1
    out.append("}")
    return "\n".join(out) + "\n"
