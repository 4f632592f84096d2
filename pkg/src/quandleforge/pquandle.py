"""Thompson's quandle P realized inside F.

Elements exist only by construction from p(0), p(1) and the quandle
operations; equality is equality of reduced tree pairs.  x |> y is the
conjugation x y x^-1.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from functools import lru_cache

from . import config, thompson
from .terms import Gen, Op, Term, TRI, eval_term
from .thompson import TreePair, abelianize, conj, invert, shift

ORBIT_A = "A"
ORBIT_B = "B"


class CalibrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class PElem:
    value: TreePair
    orbit_tag: str

    def __eq__(self, other) -> bool:
        return isinstance(other, PElem) and self.value == other.value

    def __hash__(self) -> int:
        return hash(self.value)

    def __str__(self) -> str:
        return f"p-elem{{orbit={self.orbit_tag}, tree=<{self.value}>}}"

    def to_json(self) -> dict:
        return {"orbit": self.orbit_tag, **self.value.to_json()}


@dataclass(frozen=True)
class Calibration:
    a: TreePair
    b: TreePair
    sign: int


def first_relation(a: TreePair, b: TreePair) -> bool:
    ab = conj(a, b)
    return conj(a, ab) == conj(b, ab)


def second_relation(a: TreePair, b: TreePair) -> bool:
    aab = conj(a, conj(a, b))
    return conj(a, aab) == conj(b, aab)


def f_relators_hold() -> bool:
    """[AB^-1, A^-1 B A] = 1 and [AB^-1, A^-2 B A^2] = 1 for A = x0, B = x1."""
    A, B = thompson.generator(0), thompson.generator(1)
    Ai = invert(A)
    left = A * invert(B)
    one = thompson.commutator(left, Ai * B * A)
    two = thompson.commutator(left, Ai * Ai * B * A * A)
    return one == thompson.IDENTITY and two == thompson.IDENTITY


def calibrate() -> Calibration:
    """Choose (a, b) = (x0, x1) or (x0^-1, x1^-1), whichever satisfies a|>(a|>b) = b|>(a|>b)."""
    if not f_relators_hold():
        raise CalibrationError("standard relators of F do not hold; tree-pair arithmetic is broken")
    x0, x1 = thompson.generator(0), thompson.generator(1)
    working = [
        Calibration(a, b, sign)
        for sign, (a, b) in ((1, (x0, x1)), (-1, (invert(x0), invert(x1))))
        if first_relation(a, b)
    ]
    if not working:
        raise CalibrationError("neither orientation of the generators satisfies the first relation")
    return working[0]


class ThompsonQuandle:
    """The model: generators p(n), operations, eps and the orbit map."""

    def __init__(self, calibration: Calibration | None = None, cap: int | None = None):
        self.calibration = calibration or calibrate()
        self.cap = config.p_cap() if cap is None else cap
        a, b = self.calibration.a, self.calibration.b
        self._memo = {0: PElem(a, ORBIT_A), 1: PElem(b, ORBIT_B)}
        self._lock = threading.Lock()
        self._abel = {ORBIT_A: abelianize(a), ORBIT_B: abelianize(b)}

    def p(self, n: int) -> PElem:
        if n < 0:
            raise ValueError("generator index must be nonnegative")
        if n > self.cap:
            raise ValueError(f"p({n}) exceeds the generator cap {self.cap}")
        hit = self._memo.get(n)
        if hit is not None:
            return hit
        with self._lock:
            top = max(self._memo)
            for k in range(top + 1, n + 1):
                # fully built before it becomes visible to readers
                self._memo[k] = self.op(self._memo[k - 2], self._memo[k - 1])
        return self._memo[n]

    def generators(self, n: int) -> list:
        return [self.p(k) for k in range(n + 1)]

    def op(self, x: PElem, y: PElem) -> PElem:
        return PElem(conj(x.value, y.value), y.orbit_tag)

    def op_inv(self, x: PElem, y: PElem) -> PElem:
        return PElem(conj(invert(x.value), y.value), y.orbit_tag)

    def eps(self, x: PElem) -> PElem:
        # shift commutes with inversion, so it serves either calibration sign
        return PElem(shift(x.value), ORBIT_B)

    def orbit(self, x: PElem) -> str:
        ab = abelianize(x.value)
        for tag, ref in self._abel.items():
            if ab == ref:
                if tag != x.orbit_tag:
                    raise ValueError(f"orbit tag {x.orbit_tag} disagrees with abelianization {ab}")
                return tag
        raise ValueError(f"abelianization {ab} matches neither orbit")

    def iso_g(self, t: Term) -> PElem:
        """Evaluate a term over {a, b} with a -> p(0), b -> p(1)."""
        return eval_term(t, {"a": self.p(0), "b": self.p(1)}, self)

    def random_element(self, rng: random.Random, gens: int = 5, steps: int = 4) -> PElem:
        """A random element built from p(0..gens) by ``steps`` operations."""
        x = self.p(rng.randint(0, gens))
        for _ in range(steps):
            y = self.p(rng.randint(0, gens))
            if rng.random() < 0.5:
                x, y = y, x
            x = self.op(x, y) if rng.random() < 0.75 else self.op_inv(x, y)
        return x

    def to_json(self) -> dict:
        return {"sign": self.calibration.sign, "a": self.calibration.a.to_json(), "b": self.calibration.b.to_json()}


@lru_cache(maxsize=1)
def default_model() -> ThompsonQuandle:
    return ThompsonQuandle()


def iso_f(n: int, cap: int | None = None) -> Term:
    """q_0 = a, q_1 = b, q_n = q_{n-2} |> q_{n-1}.  Subterms are shared."""
    limit = config.p_cap() if cap is None else cap
    if n < 0 or n > limit:
        raise ValueError(f"index {n} outside 0..{limit}")
    terms = [Gen("a"), Gen("b")]
    for k in range(2, n + 1):
        terms.append(Op(terms[k - 2], TRI, terms[k - 1]))
    return terms[n]


@dataclass
class RelationReport:
    checked: int
    failure: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None


def verify_relations(N: int, model: ThompsonQuandle | None = None) -> RelationReport:
    """p(j) |> p(k) == p(k+1) for all 0 <= j < k <= N."""
    model = model or default_model()
    checked = 0
    for k in range(1, N + 1):
        target = model.p(k + 1)
        for j in range(k):
            checked += 1
            if model.op(model.p(j), model.p(k)) != target:
                return RelationReport(checked, (j, k))
    return RelationReport(checked)
