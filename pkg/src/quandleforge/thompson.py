"""Thompson's group F as reduced tree-pair diagrams.

A binary tree is either ``LEAF`` (the empty tuple) or a 2-tuple ``(left, right)``.
A :class:`TreePair` ``(domain, range)`` sends the i-th dyadic interval of the
domain subdivision affinely onto the i-th interval of the range subdivision.

``multiply(p, r)`` is composition with the right factor acting first, i.e. the
function ``p o r``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache, reduce as _fold

LEAF: tuple = ()


def node(left, right):
    return (left, right)


def is_leaf(t) -> bool:
    return t == LEAF


@lru_cache(maxsize=None)
def leaf_count(t) -> int:
    if is_leaf(t):
        return 1
    return leaf_count(t[0]) + leaf_count(t[1])


def render_tree(t) -> str:
    if is_leaf(t):
        return "."
    return f"({render_tree(t[0])},{render_tree(t[1])})"


def parse_tree(text: str):
    text = "".join(text.split())
    pos = 0

    def walk():
        nonlocal pos
        if pos >= len(text):
            raise ValueError("unexpected end of tree string")
        ch = text[pos]
        if ch == ".":
            pos += 1
            return LEAF
        if ch != "(":
            raise ValueError(f"unexpected {ch!r} at offset {pos}")
        pos += 1
        left = walk()
        if pos >= len(text) or text[pos] != ",":
            raise ValueError(f"expected ',' at offset {pos}")
        pos += 1
        right = walk()
        if pos >= len(text) or text[pos] != ")":
            raise ValueError(f"expected ')' at offset {pos}")
        pos += 1
        return (left, right)

    t = walk()
    if pos != len(text):
        raise ValueError(f"trailing input at offset {pos}")
    return t


def tree_union(s, t):
    """Smallest tree containing both ``s`` and ``t`` as rooted subtrees."""
    if is_leaf(s):
        return t
    if is_leaf(t):
        return s
    return (tree_union(s[0], t[0]), tree_union(s[1], t[1]))


def _hanging(t, big, out):
    # subtrees of `big` sitting below each leaf of `t` (t must be a prefix of big)
    if is_leaf(t):
        out.append(big)
    else:
        _hanging(t[0], big[0], out)
        _hanging(t[1], big[1], out)


def _graft(t, subs, it):
    if is_leaf(t):
        return subs[next(it)]
    left = _graft(t[0], subs, it)
    return (left, _graft(t[1], subs, it))


def graft(t, subs):
    """Replace the leaves of ``t``, left to right, by the trees in ``subs``."""
    if len(subs) != leaf_count(t):
        raise ValueError("need one subtree per leaf")
    return _graft(t, subs, iter(range(len(subs))))


def _exposed_carets(t, start, out):
    # returns leaf count; records index i whenever leaves i, i+1 form a caret
    if is_leaf(t):
        return 1
    if is_leaf(t[0]) and is_leaf(t[1]):
        out.add(start)
        return 2
    n = _exposed_carets(t[0], start, out)
    return n + _exposed_carets(t[1], start + n, out)


def exposed_carets(t) -> set:
    out: set = set()
    _exposed_carets(t, 0, out)
    return out


def _collapse(t, start, idxs):
    if is_leaf(t):
        return t, 1
    if is_leaf(t[0]) and is_leaf(t[1]) and start in idxs:
        return LEAF, 2
    left, n = _collapse(t[0], start, idxs)
    right, m = _collapse(t[1], start + n, idxs)
    return (left, right), n + m


def _reduce_trees(d, r):
    while True:
        common = exposed_carets(d) & exposed_carets(r)
        if not common:
            return d, r
        d = _collapse(d, 0, common)[0]
        r = _collapse(r, 0, common)[0]


@dataclass(frozen=True)
class TreePair:
    """An element of F. Construct through :func:`make_pair` to get reduced form."""

    domain: tuple
    range: tuple

    def __str__(self) -> str:
        return f"{render_tree(self.domain)} -> {render_tree(self.range)}"

    def __mul__(self, other: "TreePair") -> "TreePair":
        return multiply(self, other)

    def __invert__(self) -> "TreePair":
        return invert(self)

    def __pow__(self, k: int) -> "TreePair":
        return power(self, k)

    @property
    def size(self) -> int:
        return leaf_count(self.domain)

    def to_json(self) -> dict:
        return {"domain": render_tree(self.domain), "range": render_tree(self.range)}

    @classmethod
    def from_json(cls, obj: dict) -> "TreePair":
        return make_pair(parse_tree(obj["domain"]), parse_tree(obj["range"]))

    @classmethod
    def parse(cls, text: str) -> "TreePair":
        dom, sep, rng = text.partition("->")
        if not sep:
            raise ValueError("tree pair must look like 'domain -> range'")
        return make_pair(parse_tree(dom), parse_tree(rng))


def make_pair(domain, range_) -> TreePair:
    if leaf_count(domain) != leaf_count(range_):
        raise ValueError(
            f"leaf-count mismatch: {leaf_count(domain)} vs {leaf_count(range_)}"
        )
    return TreePair(*_reduce_trees(domain, range_))


def reduce(p: TreePair) -> TreePair:
    return make_pair(p.domain, p.range)


IDENTITY = TreePair(LEAF, LEAF)


def multiply(p: TreePair, r: TreePair) -> TreePair:
    """``p o r``: apply ``r`` first, then ``p``."""
    middle = tree_union(r.range, p.domain)
    below_r: list = []
    _hanging(r.range, middle, below_r)
    below_p: list = []
    _hanging(p.domain, middle, below_p)
    return make_pair(graft(r.domain, below_r), graft(p.range, below_p))


def invert(p: TreePair) -> TreePair:
    return TreePair(p.range, p.domain)


def equals(p: TreePair, r: TreePair) -> bool:
    return p == r


def power(p: TreePair, k: int) -> TreePair:
    if k < 0:
        p, k = invert(p), -k
    out = IDENTITY
    for _ in range(k):
        out = multiply(out, p)
    return out


def product(*factors: TreePair) -> TreePair:
    return _fold(multiply, factors, IDENTITY)


def conj(g: TreePair, h: TreePair) -> TreePair:
    """g h g^-1."""
    return multiply(multiply(g, h), invert(g))


def commutator(g: TreePair, h: TreePair) -> TreePair:
    """g h g^-1 h^-1."""
    return multiply(conj(g, h), invert(h))


def shift(p: TreePair) -> TreePair:
    """Identity on [0, 1/2], a half-size copy of ``p`` on [1/2, 1]."""
    return make_pair((LEAF, p.domain), (LEAF, p.range))


_X0 = TreePair((LEAF, (LEAF, LEAF)), ((LEAF, LEAF), LEAF))
_X1 = shift(_X0)


def generator(i: int) -> TreePair:
    """x0 or x1.

    x0 = (.,(.,.)) -> ((.,.),.)
    x1 = (.,(.,(.,.))) -> (.,((.,.),.))   (x0 grafted right of an identity caret)
    """
    if i == 0:
        return _X0
    if i == 1:
        return _X1
    raise ValueError("F has generators 0 and 1 only")


def _edge_depth(t, side: int) -> int:
    d = 0
    while not is_leaf(t):
        t = t[side]
        d += 1
    return d


def abelianize(p: TreePair) -> tuple[int, int]:
    """(log2 slope at 0, log2 slope at 1)."""
    return (
        _edge_depth(p.domain, 0) - _edge_depth(p.range, 0),
        _edge_depth(p.domain, 1) - _edge_depth(p.range, 1),
    )


def evaluate_word(word, letters: dict) -> TreePair:
    """Multiply out ``word``, a sequence of (letter, exponent) pairs, left to right."""
    out = IDENTITY
    for letter, exp in word:
        out = multiply(out, power(letters[letter], exp))
    return out


def random_word(rng: random.Random, max_length: int, alphabet=(0, 1)) -> list:
    length = rng.randint(0, max_length)
    return [(rng.choice(alphabet), rng.choice((1, -1))) for _ in range(length)]


def random_element(rng: random.Random, max_length: int = 6) -> TreePair:
    word = random_word(rng, max_length)
    return evaluate_word(word, {0: _X0, 1: _X1})
