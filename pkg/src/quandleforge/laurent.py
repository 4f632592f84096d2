"""Exact arithmetic over Z[q, q^-1] and module presentations over it.

Polynomials are sparse maps exponent -> nonzero integer.  Matrices present
modules by rows: the module is generated by the column labels subject to one
relation per row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class LaurentPoly:
    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        clean = {}
        for e, c in (coeffs or {}).items():
            if c:
                clean[int(e)] = int(c)
        self._coeffs = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, c: int, e: int) -> "LaurentPoly":
        return cls({e: c})

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def terms(self):
        return self._coeffs.items()

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def min_exp(self) -> int:
        return next(iter(self._coeffs))

    def max_exp(self) -> int:
        return next(reversed(self._coeffs))

    def is_unit(self) -> bool:
        """Units of Z[q^{+-1}] are exactly +-q^k."""
        return len(self._coeffs) == 1 and abs(next(iter(self._coeffs.values()))) == 1

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._coeffs.items()))
        return self._hash

    def __add__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        out: dict = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            inv = self.unit_inverse()
            return inv ** (-k)
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def unit_inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit")
        (e, c), = self._coeffs.items()
        return LaurentPoly({-e: c})

    def exact_div(self, d: "LaurentPoly") -> "LaurentPoly | None":
        """``u`` with ``u * d == self``, or None if no such ring element exists."""
        d = _coerce(d)
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return ZERO
        # long division on shifted ordinary polynomials, highest degree first
        shift = d.min_exp()
        rem = {e: Fraction(c) for e, c in self._coeffs.items()}
        lead_e, lead_c = d.max_exp(), d._coeffs[d.max_exp()]
        quot: dict = {}
        while rem:
            top = max(rem)
            if top - lead_e < self.min_exp() - shift:
                return None
            qc = rem[top] / lead_c
            if qc.denominator != 1:
                return None
            qe = top - lead_e
            quot[qe] = int(qc)
            for e, c in d._coeffs.items():
                v = rem.get(e + qe, 0) - qc * c
                if v:
                    rem[e + qe] = v
                else:
                    rem.pop(e + qe, None)
        return LaurentPoly(quot)

    def normalized(self) -> "LaurentPoly":
        """Associate with lowest exponent 0 and positive lowest coefficient."""
        if self.is_zero():
            return self
        e = self.min_exp()
        sign = 1 if self._coeffs[e] > 0 else -1
        return LaurentPoly({k - e: sign * c for k, c in self._coeffs.items()})

    def is_associate(self, other: "LaurentPoly") -> bool:
        return self.normalized() == _coerce(other).normalized()

    def evaluate(self, c, modulus: int | None = None):
        """Substitute q -> c.  Over Q (Fraction) by default, over Z/modulus if given."""
        if modulus is not None:
            c = int(c) % modulus
            try:
                c_inv = pow(c, -1, modulus)
            except ValueError:
                raise ValueError(f"{c} is not invertible mod {modulus}") from None
            total = 0
            for e, k in self._coeffs.items():
                base = c if e >= 0 else c_inv
                total += k * pow(base, abs(e), modulus)
            return total % modulus
        c = Fraction(c)
        if c == 0:
            raise ValueError("q must be sent to an invertible value")
        total = Fraction(0)
        for e, k in self._coeffs.items():
            total += k * c**e
        return total.numerator if total.denominator == 1 else total

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for e, c in self._coeffs.items():
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "q" if e == 1 else f"q^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def to_json(self) -> dict:
        return {str(e): c for e, c in self._coeffs.items()}

    @classmethod
    def from_json(cls, obj: Mapping[str, int]) -> "LaurentPoly":
        return cls({int(e): c for e, c in obj.items()})


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot treat {x!r} as a Laurent polynomial")


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
Q = LaurentPoly.monomial(1, 1)
Q_INV = LaurentPoly.monomial(1, -1)


def poly_add(p: LaurentPoly, r: LaurentPoly) -> LaurentPoly:
    return p + r


def poly_mul(p: LaurentPoly, r: LaurentPoly) -> LaurentPoly:
    return p * r


def poly_eval(p: LaurentPoly, c, modulus: int | None = None):
    return p.evaluate(c, modulus)


# -- matrices -----------------------------------------------------------------


@dataclass(frozen=True)
class LaurentMatrix:
    rows: tuple
    ncols: int
    column_labels: tuple = ()

    def __post_init__(self):
        rows = tuple(tuple(_coerce(x) for x in row) for row in self.rows)
        for row in rows:
            if len(row) != self.ncols:
                raise ValueError(f"row has {len(row)} entries, expected {self.ncols}")
        labels = tuple(self.column_labels) or tuple(f"e{i}" for i in range(self.ncols))
        if len(labels) != self.ncols:
            raise ValueError("one label per column required")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "column_labels", labels)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def specialize(self, c, modulus: int | None = None) -> list:
        return [[x.evaluate(c, modulus) for x in row] for row in self.rows]

    def permute_rows(self, order: Sequence[int]) -> "LaurentMatrix":
        return LaurentMatrix(tuple(self.rows[i] for i in order), self.ncols, self.column_labels)

    def permute_columns(self, order: Sequence[int]) -> "LaurentMatrix":
        rows = tuple(tuple(row[j] for j in order) for row in self.rows)
        return LaurentMatrix(rows, self.ncols, tuple(self.column_labels[j] for j in order))

    def to_json(self) -> dict:
        return {
            "ncols": self.ncols,
            "column_labels": list(self.column_labels),
            "rows": [[x.to_json() for x in row] for row in self.rows],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LaurentMatrix":
        rows = tuple(tuple(LaurentPoly.from_json(x) for x in row) for row in obj["rows"])
        return cls(rows, obj["ncols"], tuple(obj["column_labels"]))

    def __str__(self) -> str:
        if not self.rows:
            return f"[] ({self.ncols} columns: {', '.join(self.column_labels)})"
        cells = [[str(x) for x in row] for row in self.rows]
        width = max(len(c) for row in cells for c in row)
        head = "  ".join(lab.rjust(width) for lab in self.column_labels)
        body = "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)
        return f"{head}\n{body}"


def matrix(rows: Iterable[Iterable], labels: Sequence[str] | None = None, ncols: int | None = None) -> LaurentMatrix:
    rows = tuple(tuple(r) for r in rows)
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(rows[0])
    return LaurentMatrix(rows, ncols, tuple(labels or ()))


@dataclass(frozen=True)
class Step:
    """One elementary move.

    kinds:
      drop_zero_row   (row,)
      drop_multiple   (row, kept_row, multiplier)  row == multiplier * kept_row
      row_add         (target, source, c)          row[target] += c * row[source]
      col_add         (target, source, c)          col[target] += c * col[source]
    Row indices refer to the matrix as it stood when the step was applied.
    """

    kind: str
    args: tuple

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "args": [a.to_json() if isinstance(a, LaurentPoly) else a for a in self.args],
        }

    def __str__(self) -> str:
        return f"{self.kind}{tuple(str(a) if isinstance(a, LaurentPoly) else a for a in self.args)}"


def _drop_redundant_rows(rows: list, steps: list) -> list:
    changed = True
    while changed:
        changed = False
        for i, row in enumerate(rows):
            if all(x.is_zero() for x in row):
                steps.append(Step("drop_zero_row", (i,)))
                del rows[i]
                changed = True
                break
            for j, other in enumerate(rows):
                if j == i:
                    continue
                u = _row_quotient(row, other)
                if u is not None:
                    steps.append(Step("drop_multiple", (i, j, u)))
                    del rows[i]
                    changed = True
                    break
            if changed:
                break
    return rows


def _row_quotient(row, other):
    """u with row == u * other, if it exists."""
    pivot = next((k for k, x in enumerate(other) if x), None)
    if pivot is None:
        return None
    u = row[pivot].exact_div(other[pivot])
    if u is None:
        return None
    if all(a == u * b for a, b in zip(row, other)):
        return u
    return None


def _row_add(rows, target, source, c, steps):
    rows[target] = [a + c * b for a, b in zip(rows[target], rows[source])]
    steps.append(Step("row_add", (target, source, c)))


def _col_add(rows, target, source, c, steps):
    for row in rows:
        row[target] = row[target] + c * row[source]
    steps.append(Step("col_add", (target, source, c)))


def _find_pivot(rows, done_rows, done_cols):
    """Entry that divides everything else in its row and column, units first."""
    best = None
    for i, row in enumerate(rows):
        if i in done_rows:
            continue
        for j, x in enumerate(row):
            if j in done_cols or x.is_zero():
                continue
            divides_row = all(y.exact_div(x) is not None for y in row)
            divides_col = all(r[j].exact_div(x) is not None for r in rows)
            if not (divides_row and divides_col):
                continue
            rank = (0 if x.is_unit() else 1, len(x.coeffs), i, j)
            if best is None or rank < best[0]:
                best = (rank, i, j)
    return None if best is None else best[1:]


def matrix_reduce(m: LaurentMatrix) -> tuple[LaurentMatrix, list]:
    """Reduce ``m`` by moves that never change the presented module.

    The result has the same columns (relabelled when a column operation changes
    the basis).  Rows killed to a single entry stay in the output.  Pivots are
    entries dividing their whole row and column; unit pivots are preferred.
    """
    steps: list = []
    rows = [list(r) for r in m.rows]
    labels = list(m.column_labels)
    rows = _drop_redundant_rows(rows, steps)

    done_rows: set = set()
    done_cols: set = set()
    while True:
        found = _find_pivot(rows, done_rows, done_cols)
        if found is None:
            break
        i, j = found
        x = rows[i][j]
        for k in range(m.ncols):
            if k != j and rows[i][k]:
                c = -rows[i][k].exact_div(x)
                _col_add(rows, k, j, c, steps)
                labels[j] = _relabel(labels[j], labels[k], -c)
        for r in range(len(rows)):
            if r != i and rows[r][j]:
                _row_add(rows, r, i, -rows[r][j].exact_div(x), steps)
        done_rows.add(i)
        done_cols.add(j)
        _drop_cleared_rows(rows, steps, done_rows)
    return LaurentMatrix(tuple(tuple(r) for r in rows), m.ncols, tuple(labels)), steps


def _drop_cleared_rows(rows, steps, done_rows):
    # rows cleared to zero by row operations carry no relation
    for i in range(len(rows) - 1, -1, -1):
        if all(x.is_zero() for x in rows[i]):
            steps.append(Step("drop_zero_row", (i,)))
            del rows[i]
            shifted = {d - 1 if d > i else d for d in done_rows if d != i}
            done_rows.clear()
            done_rows.update(shifted)


def _relabel(kept: str, other: str, c: LaurentPoly) -> str:
    # col_add(k, j, -c) changes basis e_j -> e_j + c e_k
    if c == ONE:
        return f"{kept}+{other}"
    if c == -ONE:
        return f"{kept}-{other}"
    return f"{kept}+({c})*{other}"


def column_transform(ncols: int, steps: Sequence[Step], c, modulus: int | None = None) -> list:
    """The invertible matrix C (specialized at q=c) with output = R * input * C."""
    C = [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    for step in steps:
        if step.kind == "col_add":
            target, source, coef = step.args
            v = coef.evaluate(c, modulus)
            for row in C:
                row[target] += v * row[source]
    return C


@dataclass
class ModuleDescription:
    free_rank: int
    torsion_factors: list = field(default_factory=list)
    residual: LaurentMatrix | None = None

    def to_json(self) -> dict:
        return {
            "free_rank": self.free_rank,
            "torsion_factors": [t.to_json() for t in self.torsion_factors],
            "torsion_display": [str(t) for t in self.torsion_factors],
            "residual": None if self.residual is None else self.residual.to_json(),
        }

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z[q^{+-1}]" + (f"^{self.free_rank}" if self.free_rank > 1 else ""))
        for t in self.torsion_factors:
            parts.append(f"Z[q^{{+-1}}]/({t})")
        if self.residual is not None:
            parts.append(f"coker(residual {self.residual.nrows}x{self.residual.ncols})")
        return " + ".join(parts) if parts else "0"


def describe_module(m: LaurentMatrix) -> ModuleDescription:
    reduced, _ = matrix_reduce(m)
    pivots: dict = {}
    leftover = []
    for row in reduced.rows:
        support = [j for j, x in enumerate(row) if x]
        if len(support) == 1 and support[0] not in pivots:
            pivots[support[0]] = row[support[0]]
        else:
            leftover.append(row)

    torsion = [pivots[j].normalized() for j in sorted(pivots) if not pivots[j].is_unit()]
    if not leftover:
        return ModuleDescription(reduced.ncols - len(pivots), torsion, None)

    involved = sorted({j for row in leftover for j, x in enumerate(row) if x} - set(pivots))
    free = [j for j in range(reduced.ncols) if j not in pivots and j not in involved]
    residual = LaurentMatrix(
        tuple(tuple(row[j] for j in involved) for row in leftover),
        len(involved),
        tuple(reduced.column_labels[j] for j in involved),
    )
    return ModuleDescription(len(free), torsion, residual)
