"""Finite rooted unordered trees, forests and their levelwise semiring.

Trees are hash-consed: two isomorphic trees are always the same Python
object, so ``is`` is the isomorphism test and trees can be used as dict keys
directly.  Children are stored in non-increasing order.

The total order compares the non-increasing child sequences
lexicographically (children compared recursively), a proper prefix being the
smaller sequence.  On canonical codes this is plain lexicographic order with
``')' < '('``.  Two facts about it are used throughout:

* a deeper tree is always larger, so the single node is the minimum;
* for ``t`` of depth ``d``, ``cut(t1, d) <= cut(t2, d)`` iff ``t1*t <= t2*t``.

Recursive algorithms (product, cut, division, roots) run on an explicit
stack so that unroll cuts thousands of levels deep do not hit the
interpreter's recursion limit.
"""
from __future__ import annotations

import itertools
import threading
import weakref
from collections import Counter
from math import comb
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

from .errors import MalformedInput

__all__ = [
    "Tree",
    "Forest",
    "LEAF",
    "path",
    "star",
    "parse_tree",
    "parse_forest",
    "canonical_code",
    "tree_compare",
    "tree_product",
    "tree_power",
    "cut",
    "gamma",
    "forest_sum",
    "forest_product",
    "tree_divide",
    "kth_root",
    "clear_caches",
]


def _run(gen):
    """Drive a generator-based recursion without growing the C stack.

    A generator yields a sub-generator to "call" it and receives its return
    value back through ``send``.
    """
    stack = [gen]
    value = None
    while stack:
        try:
            sub = stack[-1].send(value)
        except StopIteration as stop:
            stack.pop()
            value = stop.value
        else:
            stack.append(sub)
            value = None
    return value


def _cmp(a: "Tree", b: "Tree") -> int:
    # Lexicographic on child sequences: the first differing child pair
    # decides, so the recursion is a tail call and becomes a loop.
    while a is not b:
        ca, cb = a.children, b.children
        for x, y in zip(ca, cb):
            if x is not y:
                a, b = x, y
                break
        else:
            return (len(ca) > len(cb)) - (len(ca) < len(cb))
    return 0


class Tree:
    """An interned finite rooted unordered tree.

    Build trees with :meth:`Tree.from_children`, :func:`parse_tree`,
    :func:`path` or :func:`star`; never call the constructor directly.
    """

    __slots__ = ("children", "depth", "size", "serial", "_code", "__weakref__")

    _table: "weakref.WeakValueDictionary[Tuple[int, ...], Tree]" = weakref.WeakValueDictionary()
    _serials = itertools.count()
    _lock = threading.Lock()

    children: Tuple["Tree", ...]
    depth: int
    size: int
    serial: int

    @classmethod
    def from_children(cls, children: Iterable["Tree"] = ()) -> "Tree":
        kids = tuple(sorted(children, reverse=True))
        key = tuple(c.serial for c in kids)
        tree = cls._table.get(key)
        if tree is not None:
            return tree
        with cls._lock:
            tree = cls._table.get(key)
            if tree is None:
                tree = object.__new__(cls)
                tree.children = kids
                tree.depth = 1 + kids[0].depth if kids else 0
                tree.size = 1 + sum(c.size for c in kids)
                tree.serial = next(cls._serials)
                tree._code = None
                cls._table[key] = tree
        return tree

    @property
    def code(self) -> str:
        if self._code is None:
            self._code = _emit(self)
        return self._code

    @property
    def is_path(self) -> bool:
        return self.size == self.depth + 1

    def __lt__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return _cmp(self, other) < 0

    def __le__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return _cmp(self, other) <= 0

    def __gt__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return _cmp(self, other) > 0

    def __ge__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return _cmp(self, other) >= 0

    def __mul__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return tree_product(self, other)

    def __pow__(self, k: int):
        return tree_power(self, k)

    def __reduce__(self):
        return (parse_tree, (self.code,))

    def __repr__(self):
        if self.size <= 40:
            return f"Tree({self.code!r})"
        return f"Tree(<depth={self.depth} size={self.size}>)"

    def __str__(self):
        return self.code


def _emit(t: Tree) -> str:
    out = []
    stack: list = [t]
    while stack:
        item = stack.pop()
        if item is None:
            out.append(")")
            continue
        out.append("(")
        stack.append(None)
        stack.extend(reversed(item.children))
    return "".join(out)


LEAF = Tree.from_children(())


def parse_tree(text: str, line: Optional[int] = None) -> Tree:
    """Parse a balanced-parenthesis literal such as ``"(()())"``."""
    word = "".join(text.split())
    if not word:
        raise MalformedInput("empty tree literal", line=line, token=text)
    stack: list = []
    result = None
    for pos, ch in enumerate(word):
        if result is not None:
            raise MalformedInput(f"trailing characters after tree literal {word!r}", line, word[pos:])
        if ch == "(":
            stack.append([])
        elif ch == ")":
            if not stack:
                raise MalformedInput(f"unbalanced ')' in {word!r}", line, word)
            node = Tree.from_children(stack.pop())
            if stack:
                stack[-1].append(node)
            else:
                result = node
        else:
            raise MalformedInput(f"unexpected character {ch!r} in tree literal", line, word)
    if result is None:
        raise MalformedInput(f"unbalanced '(' in {word!r}", line, word)
    return result


def path(depth: int) -> Tree:
    """The path with ``depth`` edges; identity for trees of depth <= ``depth``."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    t = LEAF
    for _ in range(depth):
        t = Tree.from_children((t,))
    return t


def star(leaves: int) -> Tree:
    """A root with ``leaves`` leaf children."""
    return Tree.from_children([LEAF] * leaves)


def canonical_code(t: Tree) -> str:
    return t.code


def tree_compare(t1: Tree, t2: Tree) -> int:
    """Return -1, 0 or 1; 0 exactly when the trees are isomorphic."""
    return _cmp(t1, t2)


# --- memo tables --------------------------------------------------------------

_PRODUCT: Dict[Tuple[int, int], Tree] = {}
_CUT: Dict[Tuple[int, int], Tree] = {}
_DIVIDE: Dict[Tuple[int, int], Optional[Tree]] = {}
_ROOT: Dict[Tuple[int, int], Optional[Tree]] = {}


def clear_caches() -> None:
    """Drop memoized products, cuts, quotients and roots."""
    for table in (_PRODUCT, _CUT, _DIVIDE, _ROOT):
        table.clear()


# --- cut ----------------------------------------------------------------------


def _cut_gen(t: Tree, k: int):
    kids = []
    for c in t.children:
        r = _cut_fast(c, k - 1)
        if r is None:
            r = yield _cut_gen(c, k - 1)
        kids.append(r)
    res = Tree.from_children(kids)
    _CUT[(t.serial, k)] = res
    return res


def _cut_fast(t: Tree, k: int) -> Optional[Tree]:
    if k >= t.depth:
        return t
    if k == 0:
        return LEAF
    return _CUT.get((t.serial, k))


def cut(t: Tree, k: int) -> Tree:
    """Restrict ``t`` to its vertices of depth at most ``k``."""
    if k < 0:
        raise ValueError("cut depth must be non-negative")
    r = _cut_fast(t, k)
    if r is None:
        r = _run(_cut_gen(t, k))
    return r


# --- product ------------------------------------------------------------------


def _product_fast(a: Tree, b: Tree) -> Optional[Tree]:
    if not a.children or not b.children:
        return LEAF
    if a.is_path:
        return cut(b, a.depth)
    if b.is_path:
        return cut(a, b.depth)
    key = (a.serial, b.serial) if a.serial <= b.serial else (b.serial, a.serial)
    return _PRODUCT.get(key)


def _product_gen(a: Tree, b: Tree):
    kids = []
    for x in a.children:
        for y in b.children:
            r = _product_fast(x, y)
            if r is None:
                r = yield _product_gen(x, y)
            kids.append(r)
    res = Tree.from_children(kids)
    key = (a.serial, b.serial) if a.serial <= b.serial else (b.serial, a.serial)
    _PRODUCT[key] = res
    return res


def tree_product(a: Tree, b: Tree) -> Tree:
    """Levelwise product: equal-depth vertex pairs, depth ``min(depth a, depth b)``."""
    r = _product_fast(a, b)
    if r is None:
        r = _run(_product_gen(a, b))
    return r


def tree_power(t: Tree, k: int) -> Tree:
    """``t**k``; ``t**0`` is the path of depth ``depth(t)``."""
    if k < 0:
        raise ValueError("exponent must be non-negative")
    if k == 0:
        return path(t.depth)
    r = t
    for _ in range(k - 1):
        r = tree_product(r, t)
    return r


# --- division and roots -------------------------------------------------------


def _max_cut(trees: Iterable[Tree], d: int) -> Tree:
    return max(cut(c, d) for c in trees)


def _divide_gen(t: Tree, a: Tree):
    # t and a have the same depth D >= 1 and a is not a path.  Peel the
    # quotient's children from the largest down: the largest remaining child
    # of t is always (largest child of a cut at its depth) * (largest
    # remaining quotient child).
    key = (t.serial, a.serial)
    target = t.children
    remaining = Counter(target)
    factors = a.children
    quotient = []
    idx = 0
    result = None
    while True:
        while idx < len(target) and remaining[target[idx]] == 0:
            idx += 1
        if idx == len(target):
            result = Tree.from_children(quotient)
            break
        m = target[idx]
        lead = _max_cut(factors, m.depth)
        if lead.depth != m.depth:
            break
        n = _divide_fast(m, lead)
        if n is _MISSING:
            n = yield _divide_gen(m, lead)
        if n is None:
            break
        ok = True
        for c in factors:
            p = tree_product(c, n)
            if remaining[p] == 0:
                ok = False
                break
            remaining[p] -= 1
        if not ok:
            break
        quotient.append(n)
    _DIVIDE[key] = result
    return result


_MISSING = object()


def _divide_fast(t: Tree, a: Tree):
    if t.depth == 0:
        return LEAF
    if a.is_path:
        return t
    return _DIVIDE.get((t.serial, a.serial), _MISSING)


def tree_divide(t: Tree, a: Tree) -> frozenset:
    """All ``x`` with ``depth(x) == depth(t)`` and ``a * x == t``.

    The result has at most one element; an empty set means ``t`` is not
    divisible by ``a`` at this depth.
    """
    if a.depth < t.depth:
        return frozenset()
    a = cut(a, t.depth)
    q = _divide_fast(t, a)
    if q is _MISSING:
        q = _run(_divide_gen(t, a))
    if q is None or tree_product(a, q) is not t:
        return frozenset()
    return frozenset((q,))


def _divide_exact(t: Tree, a: Tree) -> Optional[Tree]:
    found = tree_divide(t, a)
    return next(iter(found)) if found else None


def _root_fast(t: Tree, k: int):
    if k == 1 or t.depth == 0 or t.is_path:
        return t
    return _ROOT.get((t.serial, k), _MISSING)


def _root_gen(t: Tree, k: int):
    # Children of x**k are the k-fold products of children of x.  Peel the
    # children of x from the largest down; at each step the largest
    # remaining child of t is n * max(C, n)**(k-1), where n is the next child
    # of x and C the largest already-found child cut to depth(n).
    target = t.children
    remaining = Counter(target)
    unit = path(t.depth - 1)
    # powers[e] = (found children)**e as a multiset
    powers = [Counter({unit: 1})] + [Counter() for _ in range(k - 1)]
    found = []
    idx = 0
    result = None
    while True:
        while idx < len(target) and remaining[target[idx]] == 0:
            idx += 1
        if idx == len(target):
            result = Tree.from_children(found)
            break
        m = target[idx]
        d = m.depth
        n = None
        if found:
            big = _max_cut(found, d)
            if big.depth == d:
                q = _divide_exact(m, tree_power(big, k - 1))
                if q is not None and q <= big:
                    n = q
        if n is None:
            r = _root_fast(m, k)
            if r is _MISSING:
                r = yield _root_gen(m, k)
            if r is not None and (not found or r > _max_cut(found, d)):
                n = r
        if n is None:
            break
        # remove (S + n)**k - S**k, S = found so far
        npow = [unit, n]
        for _ in range(2, k + 1):
            npow.append(tree_product(npow[-1], n))
        ok = True
        for j in range(1, k + 1):
            mult = comb(k, j)
            for s, cnt in powers[k - j].items():
                p = tree_product(npow[j], s)
                need = mult * cnt
                if remaining[p] < need:
                    ok = False
                    break
                remaining[p] -= need
            if not ok:
                break
        if not ok:
            break
        new_powers = [Counter({unit: 1})]
        for e in range(1, k):
            acc: Counter = Counter()
            for j in range(0, e + 1):
                mult = comb(e, j)
                for s, cnt in powers[e - j].items():
                    acc[tree_product(npow[j], s)] += mult * cnt
            new_powers.append(acc)
        powers = new_powers
        found.append(n)
    _ROOT[(t.serial, k)] = result
    return result


def kth_root(t: Tree, k: int) -> Optional[Tree]:
    """The tree ``x`` with ``x**k == t`` and ``depth(x) == depth(t)``, or None."""
    if k < 1:
        raise ValueError("k must be positive")
    r = _root_fast(t, k)
    if r is _MISSING:
        r = _run(_root_gen(t, k))
    if r is None or tree_power(r, k) is not t:
        return None
    return r


# --- forests ------------------------------------------------------------------


class Forest:
    """An immutable multiset of trees."""

    __slots__ = ("_counts", "_hash")

    def __init__(self, trees: Union[Iterable[Tree], Mapping[Tree, int]] = ()):
        if isinstance(trees, Mapping):
            counts = {t: int(m) for t, m in trees.items() if m}
            if any(m < 0 for m in counts.values()):
                raise ValueError("negative multiplicity")
        else:
            counts = dict(Counter(trees))
        self._counts = counts
        self._hash = None

    @classmethod
    def _wrap(cls, counts: Dict[Tree, int]) -> "Forest":
        f = object.__new__(cls)
        f._counts = counts
        f._hash = None
        return f

    def items(self) -> Iterator[Tuple[Tree, int]]:
        """(tree, multiplicity) pairs in ascending tree order."""
        for t in sorted(self._counts):
            yield t, self._counts[t]

    def count(self, t: Tree) -> int:
        return self._counts.get(t, 0)

    def distinct(self):
        return self._counts.keys()

    def __iter__(self) -> Iterator[Tree]:
        for t, m in self.items():
            for _ in range(m):
                yield t

    def __len__(self) -> int:
        return sum(self._counts.values())

    def __bool__(self) -> bool:
        return bool(self._counts)

    def __contains__(self, t) -> bool:
        return t in self._counts

    @property
    def depth(self) -> int:
        """Largest tree depth, -1 for the empty forest."""
        return max((t.depth for t in self._counts), default=-1)

    @property
    def size(self) -> int:
        return sum(t.size * m for t, m in self._counts.items())

    def min(self) -> Tree:
        return min(self._counts)

    def max(self) -> Tree:
        return max(self._counts)

    def __add__(self, other: "Forest") -> "Forest":
        if not isinstance(other, Forest):
            return NotImplemented
        counts = dict(self._counts)
        for t, m in other._counts.items():
            counts[t] = counts.get(t, 0) + m
        return Forest._wrap(counts)

    def __mul__(self, other):
        if isinstance(other, Tree):
            other = Forest((other,))
        if not isinstance(other, Forest):
            return NotImplemented
        counts: Dict[Tree, int] = {}
        for a, m in self._counts.items():
            for b, n in other._counts.items():
                p = tree_product(a, b)
                counts[p] = counts.get(p, 0) + m * n
        return Forest._wrap(counts)

    __rmul__ = __mul__

    def scale(self, k: int) -> "Forest":
        if k < 0:
            raise ValueError("negative multiplicity")
        if k == 0:
            return Forest()
        return Forest._wrap({t: m * k for t, m in self._counts.items()})

    def power(self, k: int, depth: Optional[int] = None) -> "Forest":
        """``self**k``; the zeroth power is the path of ``depth`` (default: own depth)."""
        if k == 0:
            return Forest((path(self.depth if depth is None else depth),))
        r = self
        for _ in range(k - 1):
            r = r * self
        return r

    def subtract(self, other: "Forest") -> Optional["Forest"]:
        """Multiset difference, or None when ``other`` is not contained in ``self``."""
        counts = dict(self._counts)
        for t, m in other._counts.items():
            have = counts.get(t, 0)
            if have < m:
                return None
            if have == m:
                del counts[t]
            else:
                counts[t] = have - m
        return Forest._wrap(counts)

    def gamma(self, d: int) -> "Forest":
        """Sub-multiset of trees with depth at least ``d``."""
        return Forest._wrap({t: m for t, m in self._counts.items() if t.depth >= d})

    def cut(self, k: int) -> "Forest":
        counts: Dict[Tree, int] = {}
        for t, m in self._counts.items():
            c = cut(t, k)
            counts[c] = counts.get(c, 0) + m
        return Forest._wrap(counts)

    def __eq__(self, other):
        if not isinstance(other, Forest):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def literal(self) -> str:
        """One canonical tree literal per line, ascending."""
        return "\n".join(t.code for t in self)

    def __repr__(self):
        parts = []
        for t, m in self.items():
            r = t.code if t.size <= 40 else f"<depth={t.depth} size={t.size}>"
            parts.append(f"{m}*{r}" if m > 1 else r)
        return "Forest([" + ", ".join(parts) + "])"


def parse_forest(text: str) -> Forest:
    """Parse a forest file: one tree literal per line, ``#`` comments."""
    trees = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            trees.append(parse_tree(body, line=lineno))
    return Forest(trees)


def forest_sum(f1: Forest, f2: Forest) -> Forest:
    return f1 + f2


def forest_product(f1: Forest, f2: Forest) -> Forest:
    return f1 * f2


def gamma(f: Forest, d: int) -> Forest:
    if d < 0:
        raise ValueError("depth must be non-negative")
    return f.gamma(d)
