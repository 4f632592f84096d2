"""Quandle terms, the ``.qdl`` presentation format, and what can be computed from them.

Term syntax::

    term := atom | atom OP term        OP in {'|>', '<|'}
    atom := IDENT | '(' term ')'

Both operators are right-associative with equal precedence.  A chain mixing
them without parentheses is rejected.  ``x <| y`` is the left inverse: the z
with ``x |> z == y``.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field

from . import config
from .core import UnionFind
from .laurent import ONE, Q, Q_INV, ZERO, LaurentMatrix

TRI = "|>"
TRI_INV = "<|"


@dataclass(frozen=True)
class Gen:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Op:
    left: "Term"
    kind: str
    right: "Term"

    def __str__(self) -> str:
        return render(self)


Term = Gen | Op


def tri(x: Term, y: Term) -> Op:
    return Op(x, TRI, y)


def tri_inv(x: Term, y: Term) -> Op:
    return Op(x, TRI_INV, y)


def render(t: Term) -> str:
    if isinstance(t, Gen):
        return t.name

    def side(s):
        return s.name if isinstance(s, Gen) else f"({render(s)})"

    return f"{side(t.left)} {t.kind} {side(t.right)}"


def rightmost_leaf(t: Term) -> str:
    while isinstance(t, Op):
        t = t.right
    return t.name


def leaves(t: Term) -> set:
    if isinstance(t, Gen):
        return {t.name}
    return leaves(t.left) | leaves(t.right)


def depth(t: Term) -> int:
    if isinstance(t, Gen):
        return 0
    return 1 + max(depth(t.left), depth(t.right))


# -- parsing --------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = "", line: int | None = None):
        self.message = message
        self.pos = pos
        self.text = text
        self.line = line
        where = f"line {line}, column {pos + 1}" if line else f"column {pos + 1}"
        super().__init__(f"{message} ({where})")


_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\|>|<\|)|(?P<punct>[()]))")


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, pos):
        raise ParseError(msg, pos, self.text)

    def term(self) -> Term:
        atoms = [self.atom()]
        ops = []
        while self.peek()[0] == "op":
            kind, value, pos = self.take()
            if ops and value != ops[0]:
                self.fail(f"mixed operators {ops[0]} and {value} require parentheses", pos)
            ops.append(value)
            atoms.append(self.atom())
        out = atoms[-1]
        for a, op in zip(reversed(atoms[:-1]), reversed(ops)):
            out = Op(a, op, out)
        return out

    def atom(self) -> Term:
        kind, value, pos = self.take()
        if kind == "ident":
            return Gen(value)
        if kind == "punct" and value == "(":
            inner = self.term()
            kind, value, pos = self.take()
            if value != ")":
                self.fail("expected ')'", pos)
            return inner
        self.fail("expected a generator or '('" if kind != "end" else "unexpected end of term", pos)


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    kind, value, pos = p.peek()
    if kind != "end":
        p.fail(f"unexpected {value!r}", pos)
    return t


# -- presentations ------------------------------------------------------------


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    name: str
    generators: tuple
    relations: tuple = field(default_factory=tuple)

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise PresentationError(f"duplicate generator in {gens}")
        rels = tuple((l, r) for l, r in self.relations)
        for l, r in rels:
            missing = (leaves(l) | leaves(r)) - set(gens)
            if missing:
                raise PresentationError(
                    f"undeclared generator(s) {', '.join(sorted(missing))} in relation {render(l)} = {render(r)}"
                )
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relations", rels)

    def to_dsl(self) -> str:
        lines = [f"quandle {self.name}", "gens " + ", ".join(self.generators)]
        lines += [f"rel {render(l)} = {render(r)}" for l, r in self.relations]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "generators": list(self.generators),
            "relations": [[render(l), render(r)] for l, r in self.relations],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Presentation":
        return cls(
            obj["name"],
            tuple(obj["generators"]),
            tuple((parse_term(l), parse_term(r)) for l, r in obj["relations"]),
        )


def _parse_side(text: str, offset: int, raw: str, lineno: int) -> Term:
    try:
        return parse_term(text)
    except ParseError as e:
        raise ParseError(e.message, offset + e.pos, raw, lineno) from None


def parse_presentation(text: str) -> Presentation:
    name = None
    gens = None
    rels = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        offset = len(line) - len(line.lstrip())
        keyword, _, rest = line.strip().partition(" ")
        body_at = offset + len(keyword) + 1
        if keyword == "quandle":
            if name is not None:
                raise ParseError("second 'quandle' line", offset, raw, lineno)
            name = rest.strip()
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ParseError(f"bad presentation name {name!r}", body_at, raw, lineno)
        elif keyword == "gens":
            if gens is not None:
                raise ParseError("second 'gens' line", offset, raw, lineno)
            gens = [g.strip() for g in rest.split(",")] if rest.strip() else []
            for g in gens:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", g):
                    raise ParseError(f"bad generator name {g!r}", body_at, raw, lineno)
        elif keyword == "rel":
            if gens is None:
                raise ParseError("'rel' before 'gens'", offset, raw, lineno)
            lhs, eq, rhs = rest.partition("=")
            if not eq or "=" in rhs:
                raise ParseError("relation needs exactly one '='", body_at, raw, lineno)
            left = _parse_side(lhs, body_at, raw, lineno)
            right = _parse_side(rhs, body_at + len(lhs) + 1, raw, lineno)
            missing = (leaves(left) | leaves(right)) - set(gens)
            if missing:
                raise ParseError(f"undeclared generator(s) {', '.join(sorted(missing))}", body_at, raw, lineno)
            rels.append((left, right))
        else:
            raise ParseError(f"unknown keyword {keyword!r}", offset, raw, lineno)
    if gens is None:
        raise ParseError("missing 'gens' line", 0, text, 1)
    return Presentation(name or "Q", tuple(gens), tuple(rels))


THOMPSON_QDL = """\
quandle P
gens a, b
rel a |> (a |> b) = b |> (a |> b)
rel a |> (a |> (a |> b)) = b |> (a |> (a |> b))
"""


def thompson_presentation() -> Presentation:
    """Two generators, two relations."""
    return parse_presentation(THOMPSON_QDL)


def truncated_thompson_presentation(n: int) -> Presentation:
    """Generators p0..pn with p_j |> p_k = p_{k+1} for j < k < n."""
    gens = tuple(f"p{i}" for i in range(n + 1))
    rels = tuple(
        (tri(Gen(f"p{j}"), Gen(f"p{k}")), Gen(f"p{k + 1}"))
        for k in range(1, n)
        for j in range(k)
    )
    return Presentation(f"P_upto_{n}", gens, rels)


# -- evaluation -----------------------------------------------------------------


class UnassignedGenerator(KeyError):
    pass


def eval_term(t: Term, assignment: dict, model):
    if isinstance(t, Gen):
        try:
            return assignment[t.name]
        except KeyError:
            raise UnassignedGenerator(t.name) from None
    x = eval_term(t.left, assignment, model)
    y = eval_term(t.right, assignment, model)
    return model.op(x, y) if t.kind == TRI else model.op_inv(x, y)


def check_hom(pres: Presentation, model, assignment: dict) -> bool:
    missing = set(pres.generators) - set(assignment)
    if missing:
        raise UnassignedGenerator(", ".join(sorted(missing)))
    return all(
        eval_term(l, assignment, model) == eval_term(r, assignment, model)
        for l, r in pres.relations
    )


def homs(pres: Presentation, Q, order_cap: int | None = None, gens_cap: int | None = None):
    """Yield every assignment generators -> Q that respects the relations."""
    order_cap = config.order_cap() if order_cap is None else order_cap
    gens_cap = config.gens_cap() if gens_cap is None else gens_cap
    if len(Q) > order_cap:
        raise ValueError(f"model order {len(Q)} exceeds cap {order_cap}")
    if len(pres.generators) > gens_cap:
        raise ValueError(f"{len(pres.generators)} generators exceed cap {gens_cap}")
    for values in itertools.product(range(len(Q)), repeat=len(pres.generators)):
        assignment = dict(zip(pres.generators, values))
        if check_hom(pres, Q, assignment):
            yield assignment


def hom_count(pres: Presentation, Q, order_cap: int | None = None, gens_cap: int | None = None) -> int:
    return sum(1 for _ in homs(pres, Q, order_cap, gens_cap))


def orbit_partition(pres: Presentation) -> list:
    # a morphism into a trivial quandle sends every term to its rightmost leaf
    index = {g: i for i, g in enumerate(pres.generators)}
    uf = UnionFind(range(len(pres.generators)))
    for l, r in pres.relations:
        uf.union(index[rightmost_leaf(l)], index[rightmost_leaf(r)])
    return [[pres.generators[i] for i in block] for block in uf.blocks()]


def orbit_count(pres: Presentation) -> tuple[int, list]:
    blocks = orbit_partition(pres)
    return len(blocks), blocks


def abelianization_rank(pres: Presentation) -> int:
    return len(orbit_partition(pres))


# -- HNN extensions -------------------------------------------------------------


@dataclass(frozen=True)
class HnnData:
    base: Presentation
    stable_letter: str
    tau_pairs: tuple = ()

    def __post_init__(self):
        if self.stable_letter in self.base.generators:
            raise PresentationError(f"stable letter {self.stable_letter!r} collides with a generator")
        for u, v in self.tau_pairs:
            stray = (leaves(u) | leaves(v)) - set(self.base.generators)
            if stray:
                raise PresentationError(f"tau uses unknown generator(s) {', '.join(sorted(stray))}")


def hnn_extend(data: HnnData) -> Presentation:
    """Adds ``t |> u = tau(u)`` for the listed generators u of the subquandle.

    Left multiplication by t is an automorphism, so the generator relations
    already force the relation on everything they generate.
    """
    t = Gen(data.stable_letter)
    base = data.base
    new_rels = tuple((tri(t, u), v) for u, v in data.tau_pairs)
    return Presentation(
        f"{base.name}_hnn",
        base.generators + (data.stable_letter,),
        base.relations + new_rels,
    )


def parse_tau(text: str) -> tuple:
    """``"a->b, b->a|>b"`` into term pairs."""
    pairs = []
    for chunk in text.split(","):
        if not chunk.strip():
            continue
        src, sep, dst = chunk.partition("->")
        if not sep:
            raise ValueError(f"tau entry {chunk.strip()!r} needs '->'")
        pairs.append((parse_term(src), parse_term(dst)))
    return tuple(pairs)


# -- Alexander linearization ------------------------------------------------------


def linearize(t: Term, index: dict) -> list:
    if isinstance(t, Gen):
        vec = [ZERO] * len(index)
        vec[index[t.name]] = ONE
        return vec
    s = linearize(t.left, index)
    r = linearize(t.right, index)
    step = Q if t.kind == TRI else Q_INV
    return [(ONE - step) * x + step * y for x, y in zip(s, r)]


def alexander_matrix(pres: Presentation) -> LaurentMatrix:
    """One row per relation: linearize(lhs) - linearize(rhs), with x |> y -> (1-q)x + qy."""
    index = {g: i for i, g in enumerate(pres.generators)}
    rows = []
    for l, r in pres.relations:
        rows.append(tuple(a - b for a, b in zip(linearize(l, index), linearize(r, index))))
    return LaurentMatrix(tuple(rows), len(pres.generators), pres.generators)


def presentation_json(pres: Presentation) -> str:
    return json.dumps(pres.to_json())
