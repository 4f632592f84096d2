"""Exit criteria.  Tolerances: exact equality everywhere; the time limits below."""

import subprocess
import sys
import time

from quandleforge import thompson as F
from quandleforge import experiments as X
from quandleforge.core import dihedral_quandle, enumerate_quandles, is_quandle, trivial_quandle
from quandleforge.pquandle import ORBIT_A, ORBIT_B, default_model, iso_f
from quandleforge.terms import hom_count, orbit_count, thompson_presentation


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def test_1_relations(criterion):
    reports, dt = timed(lambda: X.run_suite("fingen"))
    rel = next(r for r in reports if r.name == "relations")
    ok = rel.passed and rel.details["checked"] == 55 and dt < 10
    criterion(1, "p(j) |> p(k) = p(k+1), 0 <= j < k <= 10", ok, f"{rel.details['checked']} identities, {dt:.2f}s < 10s")


def test_2_orbits(criterion):
    pres = thompson_presentation()
    count = orbit_count(pres)[0]
    homs = [hom_count(pres, trivial_quandle(n)) for n in range(1, 6)]
    ok = count == 2 and homs == [n * n for n in range(1, 6)]
    criterion(2, "two orbits; n^2 homs into trivial(n), n <= 5", ok, f"orbits={count} homs={homs}")


def test_3_universal_property(criterion):
    models = X.small_models(4) + [trivial_quandle(5), dihedral_quandle(5)]
    reports, dt = timed(lambda: [X.check_universal_pairs(Q) for Q in models])
    failures = [r.counterexample for r in reports if not r.passed]
    ok = not failures and dt < 60
    criterion(3, "universal pairs on all models of order <= 4 plus trivial(5), dihedral(5)", ok,
              f"{len(models)} models, {sum(r.details.get('pairs', 0) for r in reports)} pairs, {dt:.2f}s < 60s")


def test_4_finite_presentation(criterion):
    model = default_model()
    roundtrip = all(model.iso_g(iso_f(n)) == model.p(n) for n in range(13))
    qseq = [X.check_qseq_relations(Q, 6) for Q in X.small_models(4)]
    ok = roundtrip and all(r.passed for r in qseq)
    criterion(4, "iso_g(iso_f(n)) = p(n), n <= 12; q-sequence relations, order <= 4, N = 6", ok,
              f"roundtrip={roundtrip}, {sum(r.passed for r in qseq)}/{len(qseq)} models")


def test_5_hnn(criterion):
    r = X.hnn_census(4)
    ok = r.passed and len(r.details["counts"]) == 12 and "necessary condition" in r.note
    criterion(5, "hom counts of P and its HNN extension agree, order <= 4 (necessary condition)", ok,
              f"{len(r.details.get('counts', []))} models")


def test_6_embedding(criterion):
    model = default_model()
    distinct = X.distinctness_probe(20)
    sample = [model.p(n) for n in range(21)] + [model.op(model.p(0), model.p(n)) for n in range(5)]
    tags = {model.orbit(x) for x in sample}
    central = X.centralizer_probe(4)
    ok = distinct.passed and tags == {ORBIT_A, ORBIT_B} and central.passed
    criterion(6, "p(0..20) distinct; two orbit values; centralizer probe", ok,
              f"orbit values={sorted(tags)}, centralizing words={central.details.get('centralizing_words')}")


def test_7_alexander(criterion):
    r, dt = timed(X.alexander_pipeline)
    checks = r.details["checks"]
    ok = r.passed and dt < 1 and all(checks.values())
    criterion(7, "Alexander module = Z[q^+-1] + Z[q^+-1]/(1-q)", ok, f"{r.details['module']}, {dt:.3f}s < 1s")


def test_8_calibration(criterion):
    A, B = F.generator(0), F.generator(1)
    Ai = F.invert(A)
    relators = (
        F.commutator(A * F.invert(B), Ai * B * A) == F.IDENTITY
        and F.commutator(A * F.invert(B), Ai * Ai * B * A * A) == F.IDENTITY
    )
    r = X.f_calibration(samples=100, seed=X.DEFAULT_SEED)
    ok = relators and r.passed
    criterion(8, "F relators trivial; shift^2(p) = a shift(p) a^-1 on 100 seeded samples", ok,
              f"sign={r.details.get('sign')}")


def test_9_axioms(criterion):
    tables = [Q for n in range(1, 5) for Q in enumerate_quandles(n)]
    r = X.axiom_suite(max_order=4, samples=200, seed=X.DEFAULT_SEED)
    ok = all(is_quandle(Q.table) for Q in tables) and r.passed
    criterion(9, "axioms on enumerated quandles (order <= 4) and 200 conjugation triples", ok, f"{len(tables)} tables")


def test_10_full_verify(criterion):
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "quandleforge", "verify", "--suite", "all"],
                          capture_output=True, text=True, timeout=180)
    dt = time.perf_counter() - start
    ok = proc.returncode == 0 and dt < 120 and "FAIL" not in proc.stdout
    criterion(10, "verify --suite all exits 0 in under 2 minutes", ok, f"exit={proc.returncode}, {dt:.2f}s")
