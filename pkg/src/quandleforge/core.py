"""Finite quandles, standard constructions, and the free quandle on a few generators.

Anything with ``op(x, y)`` (x |> y) and ``op_inv(x, y)`` (the z with x |> z == y)
counts as a quandle model for :mod:`quandleforge.terms`.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import config


class QuandleAxiomError(ValueError):
    pass


class UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        # smaller representative wins so the blocks come out deterministic
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True

    def blocks(self) -> list:
        groups: dict = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return sorted((sorted(b) for b in groups.values()), key=lambda b: b[0])


def _check_table(table) -> list:
    n = len(table)
    if n == 0:
        raise ValueError("empty table")
    rows = []
    for x, row in enumerate(table):
        row = list(row)
        if len(row) != n:
            raise ValueError(f"table is not square: row {x} has {len(row)} entries")
        for y, v in enumerate(row):
            if not isinstance(v, int) or not 0 <= v < n:
                raise ValueError(f"entry ({x},{y}) = {v!r} out of range")
        rows.append(tuple(row))
    return rows


def quandle_violation(table) -> str | None:
    """First failed axiom as a readable string, or None if ``table`` is a quandle."""
    rows = _check_table(table)
    n = len(rows)
    for x in range(n):
        if rows[x][x] != x:
            return f"idempotence fails at x={x}: {x}|>{x} = {rows[x][x]}"
    for x in range(n):
        if len(set(rows[x])) != n:
            return f"left multiplication by {x} is not a bijection"
    for x, y, z in itertools.product(range(n), repeat=3):
        lhs = rows[x][rows[y][z]]
        rhs = rows[rows[x][y]][rows[x][z]]
        if lhs != rhs:
            return f"self-distributivity fails at (x,y,z)=({x},{y},{z}): {lhs} != {rhs}"
    return None


def is_quandle(table) -> bool:
    return quandle_violation(table) is None


class FiniteQuandle:
    """Quandle on {0, ..., n-1}; ``table[x][y]`` is x |> y."""

    def __init__(self, table, check: bool = True):
        rows = _check_table(table)
        if check:
            bad = quandle_violation(rows)
            if bad:
                raise QuandleAxiomError(bad)
        self.table = tuple(rows)
        self.n = len(rows)
        self._inv = tuple(_invert_perm(r) for r in rows)

    def __len__(self) -> int:
        return self.n

    def elements(self) -> range:
        return range(self.n)

    def op(self, x: int, y: int) -> int:
        return self.table[x][y]

    def op_inv(self, x: int, y: int) -> int:
        return self._inv[x][y]

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteQuandle) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"FiniteQuandle({[list(r) for r in self.table]})"

    def to_json(self) -> list:
        return [list(r) for r in self.table]

    def to_text(self) -> str:
        return "\n".join([str(self.n)] + [" ".join(map(str, r)) for r in self.table])


def _invert_perm(row) -> tuple:
    inv = [0] * len(row)
    for i, v in enumerate(row):
        inv[v] = i
    return tuple(inv)


def left_div(Q: FiniteQuandle, x: int, y: int) -> int:
    return Q.op_inv(x, y)


def parse_table(text: str) -> FiniteQuandle:
    """Accepts a JSON array of arrays, or ``n`` followed by n rows of n integers."""
    stripped = text.strip()
    if stripped.startswith("["):
        return FiniteQuandle(json.loads(stripped))
    nums = [int(tok) for tok in stripped.split()]
    if not nums:
        raise ValueError("empty table file")
    n = nums[0]
    if len(nums) != 1 + n * n:
        raise ValueError(f"expected {n * n} entries after the order, got {len(nums) - 1}")
    return FiniteQuandle([nums[1 + i * n : 1 + (i + 1) * n] for i in range(n)])


def trivial_quandle(n: int) -> FiniteQuandle:
    if n < 1:
        raise ValueError("order must be at least 1")
    return FiniteQuandle([list(range(n)) for _ in range(n)], check=False)


def dihedral_quandle(n: int) -> FiniteQuandle:
    if n < 1:
        raise ValueError("order must be at least 1")
    return FiniteQuandle([[(2 * x - y) % n for y in range(n)] for x in range(n)], check=False)


def orbits(Q: FiniteQuandle) -> list:
    uf = UnionFind(range(Q.n))
    for x in range(Q.n):
        for y in range(Q.n):
            uf.union(y, Q.op(x, y))
    return uf.blocks()


def endomorphisms(Q: FiniteQuandle) -> list:
    """All self-maps f with f(x |> y) = f(x) |> f(y), as tuples, in lexicographic order."""
    return homomorphisms(Q, Q)


def homomorphisms(Q: FiniteQuandle, R: FiniteQuandle) -> list:
    n = Q.n
    # check each pair as soon as x, y and x|>y are all assigned
    checks: list = [[] for _ in range(n)]
    for x in range(n):
        for y in range(n):
            z = Q.op(x, y)
            checks[max(x, y, z)].append((x, y, z))
    out = []
    f = [0] * n

    def extend(k):
        if k == n:
            out.append(tuple(f))
            return
        for v in range(R.n):
            f[k] = v
            if all(R.op(f[x], f[y]) == f[z] for x, y, z in checks[k]):
                extend(k + 1)

    extend(0)
    return out


def relabel(table: Sequence[Sequence[int]], perm: Sequence[int]) -> tuple:
    """Transport the structure along x -> perm[x]."""
    n = len(table)
    new = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            new[perm[x]][perm[y]] = perm[table[x][y]]
    return tuple(tuple(r) for r in new)


def canonical_table(table) -> tuple:
    n = len(table)
    return min(relabel(table, p) for p in itertools.permutations(range(n)))


def _labelled_quandles(n: int):
    """Backtracking over rows that are permutations fixing the diagonal."""
    rows: list = [None] * n
    perms = [
        [p for p in itertools.permutations(range(n)) if p[x] == x] for x in range(n)
    ]

    def consistent(k):
        # every triple whose three rows x, y, x|>y are all chosen
        for x in range(k + 1):
            rx = rows[x]
            for y in range(k + 1):
                ry = rows[y]
                rxy = rows[rx[y]] if rx[y] <= k else None
                if rxy is None:
                    continue
                if x != k and y != k and rx[y] != k:
                    continue
                for z in range(n):
                    if rx[ry[z]] != rxy[rx[z]]:
                        return False
        return True

    def extend(k):
        if k == n:
            yield tuple(rows)
            return
        for p in perms[k]:
            rows[k] = p
            if consistent(k):
                yield from extend(k + 1)
        rows[k] = None

    yield from extend(0)


def enumerate_quandles(n: int, cap: int | None = None) -> list:
    """One quandle per isomorphism class of order n, sorted by canonical table."""
    limit = config.order_cap() if cap is None else cap
    if n < 1:
        raise ValueError("order must be at least 1")
    if n > limit:
        raise ValueError(f"order {n} exceeds the enumeration cap {limit}")
    classes = {canonical_table(t) for t in _labelled_quandles(n)}
    return [FiniteQuandle(t, check=False) for t in sorted(classes)]


# -- conjugation quandles --------------------------------------------------


class ConjugationQuandle:
    """A group viewed as a quandle under x |> y = x y x^-1."""

    def __init__(self, multiply: Callable, invert: Callable):
        self.multiply = multiply
        self.invert = invert

    def op(self, x, y):
        return self.multiply(self.multiply(x, y), self.invert(x))

    def op_inv(self, x, y):
        return self.multiply(self.multiply(self.invert(x), y), x)


# -- free quandles -----------------------------------------------------------


def reduce_word(word: Iterable[tuple]) -> tuple:
    """Free reduction of a word of (generator, +-1) letters."""
    out: list = []
    for g, e in word:
        if out and out[-1] == (g, -e):
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def invert_word(word: Sequence[tuple]) -> tuple:
    return tuple((g, -e) for g, e in reversed(word))


@dataclass(frozen=True)
class FreeQuandleElem:
    """The conjugate w g w^-1 in the free group; ``word`` never ends in g^(+-1)."""

    word: tuple
    generator: int

    def __str__(self) -> str:
        letters = "".join(f"x{g}" + ("" if e == 1 else "'") for g, e in self.word)
        return f"[{letters or 'e'}] x{self.generator}"


def free_quandle_canonical(word: Iterable[tuple], generator: int) -> FreeQuandleElem:
    w = list(reduce_word(word))
    while w and w[-1][0] == generator:
        w.pop()
    return FreeQuandleElem(tuple(w), generator)


class FreeQuandle:
    def __init__(self, rank: int = 2):
        self.rank = rank

    def gen(self, i: int) -> FreeQuandleElem:
        if not 0 <= i < self.rank:
            raise ValueError(f"generator index {i} out of range")
        return FreeQuandleElem((), i)

    def op(self, x: FreeQuandleElem, y: FreeQuandleElem) -> FreeQuandleElem:
        # (w g w^-1) v h v^-1 (w g w^-1)^-1 = (w g w^-1 v) h (...)^-1
        prefix = x.word + ((x.generator, 1),) + invert_word(x.word) + y.word
        return free_quandle_canonical(prefix, y.generator)

    def op_inv(self, x: FreeQuandleElem, y: FreeQuandleElem) -> FreeQuandleElem:
        prefix = x.word + ((x.generator, -1),) + invert_word(x.word) + y.word
        return free_quandle_canonical(prefix, y.generator)
