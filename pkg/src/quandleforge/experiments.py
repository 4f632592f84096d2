"""Verification drivers.  Each returns a :class:`Report`; none of them raise on failure."""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import thompson
from .core import (
    ConjugationQuandle,
    FiniteQuandle,
    FreeQuandle,
    dihedral_quandle,
    endomorphisms,
    enumerate_quandles,
    is_quandle,
    trivial_quandle,
)
from .laurent import ONE, LaurentPoly, describe_module, matrix_reduce
from .pquandle import (
    ORBIT_A,
    ORBIT_B,
    ThompsonQuandle,
    calibrate,
    default_model,
    f_relators_hold,
    first_relation,
    iso_f,
    second_relation,
    verify_relations,
)
from .terms import (
    HnnData,
    alexander_matrix,
    check_hom,
    hnn_extend,
    hom_count,
    homs,
    orbit_count,
    parse_tau,
    render,
    thompson_presentation,
    truncated_thompson_presentation,
)

DEFAULT_SEED = 20231


@dataclass
class Report:
    name: str
    params: dict
    passed: bool
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)
    note: str = ""
    wall_time: float = 0.0

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, default=str)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name} {json.dumps(self.params, sort_keys=True)} ({self.wall_time:.2f}s)"


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.wall_time = time.perf_counter() - start
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def small_models(max_order: int = 4) -> list:
    """Every quandle of order <= max_order up to isomorphism."""
    return [Q for n in range(1, max_order + 1) for Q in enumerate_quandles(n)]


def _power(f, k, x):
    for _ in range(k):
        x = f[x]
    return x


def universal_pairs(Q: FiniteQuandle) -> list:
    """All (delta, q0) with delta an endomorphism and delta^2(x) = q0 |> delta(x)."""
    out = []
    for delta in endomorphisms(Q):
        for q0 in range(Q.n):
            if all(delta[delta[x]] == Q.op(q0, delta[x]) for x in range(Q.n)):
                out.append((delta, q0))
    return out


@_timed
def check_universal_pairs(Q: FiniteQuandle, depth: int = 6) -> Report:
    pres = thompson_presentation()
    pairs = universal_pairs(Q)
    params = {"table": Q.to_json(), "depth": depth}
    for delta, q0 in pairs:
        seq = [_power(delta, k, q0) for k in range(depth + 2)]
        if not check_hom(pres, Q, {"a": seq[0], "b": seq[1]}):
            return Report("universal_pairs", params, False, {"delta": delta, "q0": q0, "failed": "presentation"})
        for k in range(1, depth + 1):
            for j in range(k):
                if Q.op(seq[j], seq[k]) != seq[k + 1]:
                    return Report(
                        "universal_pairs", params, False,
                        {"delta": delta, "q0": q0, "failed": f"R_{j},{k}"},
                    )
    return Report("universal_pairs", params, True, details={"pairs": len(pairs)})


def q_sequence(Q, x, y, N: int) -> list:
    seq = [x, y]
    for n in range(2, N + 2):
        seq.append(Q.op(seq[n - 2], seq[n - 1]))
    return seq


@_timed
def check_qseq_relations(Q: FiniteQuandle, N: int = 6) -> Report:
    pres = thompson_presentation()
    params = {"table": Q.to_json(), "N": N}
    count = 0
    for hom in homs(pres, Q):
        count += 1
        seq = q_sequence(Q, hom["a"], hom["b"], N)
        for k in range(1, N + 1):
            for j in range(k):
                if Q.op(seq[j], seq[k]) != seq[k + 1]:
                    return Report("qseq_relations", params, False, {"a": hom["a"], "b": hom["b"], "j": j, "k": k})
    return Report("qseq_relations", params, True, details={"homs": count})


def thompson_hnn_data() -> HnnData:
    return HnnData(thompson_presentation(), "t", parse_tau("a->b, b->a|>b"))


HNN_NOTE = (
    "equal hom counts into every model is a necessary condition for the "
    "isomorphism P*tau = P, not a proof of it"
)


@_timed
def hnn_census(cap: int = 4) -> Report:
    base = thompson_presentation()
    ext = hnn_extend(thompson_hnn_data())
    counts = []
    for Q in small_models(cap):
        lhs, rhs = hom_count(base, Q), hom_count(ext, Q)
        counts.append([Q.n, lhs, rhs])
        if lhs != rhs:
            return Report("hnn_census", {"cap": cap}, False, {"table": Q.to_json(), "base": lhs, "hnn": rhs}, note=HNN_NOTE)
    return Report("hnn_census", {"cap": cap}, True, details={"counts": counts}, note=HNN_NOTE)


def _rank(rows) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def rational_rank(rows) -> int:
    return _rank(rows) if rows else 0


@_timed
def alexander_pipeline() -> Report:
    pres = thompson_presentation()
    mat = alexander_matrix(pres)
    rows = [[str(x) for x in row] for row in mat.rows]
    first, second = mat.rows
    pivot = next(i for i, x in enumerate(first) if x)
    u = second[pivot].exact_div(first[pivot])
    multiple = u is not None and all(b == u * a for a, b in zip(first, second))
    reduced, steps = matrix_reduce(mat)
    desc = describe_module(mat)
    q1_rank = rational_rank(mat.specialize(1))
    expected_rank = len(pres.generators) - orbit_count(pres)[0]
    checks = {
        "second_row_multiple_of_first": multiple,
        "free_rank_1": desc.free_rank == 1,
        "torsion_1_minus_q": len(desc.torsion_factors) == 1
        and desc.torsion_factors[0].is_associate(ONE - LaurentPoly.monomial(1, 1)),
        "no_residual": desc.residual is None,
        "q1_rank": q1_rank == expected_rank,
    }
    details = {
        "rows": rows,
        "multiplier": None if u is None else str(u),
        "reduced": [[str(x) for x in r] for r in reduced.rows],
        "basis": list(reduced.column_labels),
        "steps": [str(s) for s in steps],
        "module": str(desc),
        "q1_rank": q1_rank,
        "checks": checks,
    }
    ok = all(checks.values())
    return Report("alexander_pipeline", {}, ok, None if ok else {"failed": [k for k, v in checks.items() if not v]}, details)


@_timed
def distinctness_probe(N: int = 20, model: ThompsonQuandle | None = None) -> Report:
    model = model or default_model()
    gens = model.generators(N)
    for i, j in itertools.combinations(range(N + 1), 2):
        if gens[i] == gens[j]:
            return Report("distinctness_probe", {"N": N}, False, {"i": i, "j": j})
    a = model.orbit(gens[0])
    b = model.orbit(gens[1]) if N >= 1 else None
    ok = N < 1 or a != b
    return Report(
        "distinctness_probe", {"N": N}, ok, None if ok else {"orbit_p0": a, "orbit_p1": b},
        {"orbit_p0": a, "orbit_p1": b, "max_leaves": max(g.value.size for g in gens)},
    )


@_timed
def relations_check(N: int = 10) -> Report:
    rep = verify_relations(N)
    fail = None if rep.ok else {"j": rep.failure[0], "k": rep.failure[1]}
    return Report("relations", {"N": N}, rep.ok, fail, {"checked": rep.checked})


@_timed
def iso_roundtrip(n_max: int = 12) -> Report:
    model = default_model()
    for n in range(n_max + 1):
        if model.iso_g(iso_f(n)) != model.p(n):
            return Report("iso_roundtrip", {"n_max": n_max}, False, {"n": n})
    return Report("iso_roundtrip", {"n_max": n_max}, True, details={"q4": render(iso_f(4))})


@_timed
def orbit_census(max_order: int = 5) -> Report:
    pres = thompson_presentation()
    count, blocks = orbit_count(pres)
    trunc_count, trunc_blocks = orbit_count(truncated_thompson_presentation(5))
    homs_trivial = {n: hom_count(pres, trivial_quandle(n)) for n in range(1, max_order + 1)}
    model = default_model()
    tags = {model.orbit(model.p(n)) for n in range(11)}
    checks = {
        "orbit_count_2": count == 2,
        "truncated_orbit_count_2": trunc_count == 2,
        "trivial_homs_n_squared": all(v == n * n for n, v in homs_trivial.items()),
        "model_orbits_A_B": tags == {ORBIT_A, ORBIT_B},
    }
    ok = all(checks.values())
    return Report(
        "orbit_census", {"max_order": max_order}, ok,
        None if ok else {"failed": [k for k, v in checks.items() if not v]},
        {"blocks": blocks, "truncated_blocks": trunc_blocks, "trivial_homs": homs_trivial, "checks": checks},
    )


def _all_words(max_len: int, letters=("a", "b")) -> list:
    alphabet = [(g, e) for g in letters for e in (1, -1)]
    words = []
    for n in range(max_len + 1):
        for w in itertools.product(alphabet, repeat=n):
            if all(w[i] != (w[i + 1][0], -w[i + 1][1]) for i in range(n - 1)):
                words.append(w)
    return words


@_timed
def centralizer_probe(max_len: int = 4) -> Report:
    """Every freely reduced word of length <= max_len that commutes with a equals a power of a."""
    model = default_model()
    a, b = model.calibration.a, model.calibration.b
    letters = {"a": a, "b": b}
    powers = {thompson.power(a, k): k for k in range(-max_len, max_len + 1)}
    centralizing = 0
    for w in _all_words(max_len):
        g = thompson.evaluate_word(w, letters)
        if thompson.conj(g, a) == a:
            centralizing += 1
            if g not in powers:
                return Report("centralizer_probe", {"max_len": max_len}, False, {"word": [list(x) for x in w]})
    return Report("centralizer_probe", {"max_len": max_len}, True, details={"centralizing_words": centralizing})


@_timed
def free_quandle_diagram(max_len: int = 4) -> Report:
    """FQ(2) -> P -> F agrees with FQ(2) -> F(2) -> F on conjugates w g w^-1."""
    model = default_model()
    fq = FreeQuandle(2)
    base = {0: model.p(0), 1: model.p(1)}
    letters = {0: model.calibration.a, 1: model.calibration.b}
    checked = 0
    for w in _all_words(max_len, letters=(0, 1)):
        for g in (0, 1):
            x = fq.gen(g)
            p = base[g]
            # w g w^-1 = w_1 |>(+-) (w_2 |>(+-) ... g)
            for letter, e in reversed(w):
                x = fq.op(fq.gen(letter), x) if e == 1 else fq.op_inv(fq.gen(letter), x)
                p = model.op(base[letter], p) if e == 1 else model.op_inv(base[letter], p)
            via_free_group = thompson.conj(thompson.evaluate_word(x.word, letters), letters[x.generator])
            checked += 1
            if p.value != via_free_group:
                return Report("free_quandle_diagram", {"max_len": max_len}, False, {"word": [list(l) for l in w], "generator": g})
    return Report("free_quandle_diagram", {"max_len": max_len}, True, details={"checked": checked})


@_timed
def f_calibration(samples: int = 100, seed: int = DEFAULT_SEED) -> Report:
    rng = random.Random(seed)
    params = {"samples": samples, "seed": seed}
    if not f_relators_hold():
        return Report("f_calibration", params, False, {"failed": "F relators"})
    cal = calibrate()
    x0, x1 = thompson.generator(0), thompson.generator(1)
    wrong = (x0, x1) if cal.sign == -1 else (thompson.invert(x0), thompson.invert(x1))
    checks = {
        "exactly_one_sign": not first_relation(*wrong),
        "second_relation": second_relation(cal.a, cal.b),
        "generator1_is_shift": thompson.generator(1) == thompson.shift(x0),
    }
    for i in range(samples):
        p = thompson.random_element(rng)
        if thompson.shift(thompson.shift(p)) != thompson.conj(cal.a, thompson.shift(p)):
            return Report("f_calibration", params, False, {"sample": i, "element": p.to_json()})
    model = default_model()
    checks["eps_on_generators"] = all(model.eps(model.p(n)) == model.p(n + 1) for n in range(11))
    ok = all(checks.values())
    return Report(
        "f_calibration", params, ok, None if ok else {"failed": [k for k, v in checks.items() if not v]},
        {"sign": cal.sign, "checks": checks},
    )


@_timed
def eps_probe(samples: int = 100, seed: int = DEFAULT_SEED) -> Report:
    """eps^2(x) = p0 |> eps(x) and injectivity of eps on op-generated elements."""
    model = default_model()
    rng = random.Random(seed)
    params = {"samples": samples, "seed": seed}
    seen: dict = {}
    p0 = model.p(0)
    for i in range(samples):
        x = model.random_element(rng)
        ex = model.eps(x)
        if model.eps(ex) != model.op(p0, ex):
            return Report("eps_probe", params, False, {"sample": i})
        if ex in seen and seen[ex] != x:
            return Report("eps_probe", params, False, {"sample": i, "failed": "injectivity"})
        seen[ex] = x
    return Report("eps_probe", params, True, details={"distinct_inputs": len(seen)})


@_timed
def axiom_suite(max_order: int = 4, samples: int = 200, seed: int = DEFAULT_SEED) -> Report:
    params = {"max_order": max_order, "samples": samples, "seed": seed}
    models = small_models(max_order)
    for Q in models:
        if not is_quandle(Q.table):
            return Report("axioms", params, False, {"table": Q.to_json()})
    rng = random.Random(seed)
    G = ConjugationQuandle(thompson.multiply, thompson.invert)
    for i in range(samples):
        x, y, z = (thompson.random_element(rng) for _ in range(3))
        if (
            G.op(x, G.op(y, z)) != G.op(G.op(x, y), G.op(x, z))
            or G.op(x, x) != x
            or G.op_inv(x, G.op(x, y)) != y
        ):
            return Report("axioms", params, False, {"sample": i, "x": x.to_json(), "y": y.to_json(), "z": z.to_json()})
    model = default_model()
    for i in range(samples // 4):
        x, y, z = (model.random_element(rng, steps=2) for _ in range(3))
        if (
            model.op(x, model.op(y, z)) != model.op(model.op(x, y), model.op(x, z))
            or model.op(x, x) != x
            or model.op_inv(x, model.op(x, y)) != y
            or model.orbit(model.op(x, y)) != model.orbit(y)
        ):
            return Report("axioms", params, False, {"p_sample": i})
    return Report("axioms", params, True, details={"finite_models": len(models)})


SUITES = {
    "univ": lambda: [check_universal_pairs(Q) for Q in small_models(4) + [trivial_quandle(5), dihedral_quandle(5)]]
    + [eps_probe()],
    "fingen": lambda: [relations_check(10), iso_roundtrip(12)] + [check_qseq_relations(Q, 6) for Q in small_models(4)],
    "hnn": lambda: [hnn_census(4)],
    "alexander": lambda: [alexander_pipeline()],
    "orbits": lambda: [orbit_census(5), distinctness_probe(20)],
    "embedding": lambda: [distinctness_probe(20), centralizer_probe(4), free_quandle_diagram(4)],
    "calibration": lambda: [f_calibration()],
    "axioms": lambda: [axiom_suite()],
}

SUITE_NAMES = ("all",) + tuple(SUITES)


def run_suite(name: str = "all") -> list:
    if name == "all":
        return [r for key in SUITES for r in SUITES[key]()]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return SUITES[name]()
