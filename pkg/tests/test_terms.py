import itertools

import pytest
from hypothesis import given, settings, strategies as st

from quandleforge.core import dihedral_quandle, enumerate_quandles, trivial_quandle
from quandleforge.laurent import ONE, Q, ZERO
from quandleforge.terms import (
    Gen,
    HnnData,
    Op,
    ParseError,
    Presentation,
    PresentationError,
    TRI,
    TRI_INV,
    UnassignedGenerator,
    abelianization_rank,
    alexander_matrix,
    check_hom,
    eval_term,
    hnn_extend,
    hom_count,
    orbit_count,
    parse_presentation,
    parse_tau,
    parse_term,
    render,
    rightmost_leaf,
    thompson_presentation,
    tri,
    truncated_thompson_presentation,
)

from oracles import rank_over_q

a, b, c = Gen("a"), Gen("b"), Gen("c")
P = thompson_presentation()


def test_parse_examples():
    assert parse_term("a |> (a |> b)") == Op(a, TRI, Op(a, TRI, b))
    assert parse_term("a |> b |> c") == Op(a, TRI, Op(b, TRI, c))
    assert parse_term("a <| b <| c") == Op(a, TRI_INV, Op(b, TRI_INV, c))
    assert parse_term("((a))") == a


def test_mixed_operators_rejected():
    with pytest.raises(ParseError, match="mixed operators") as info:
        parse_term("a |> b <| c")
    assert info.value.pos == 7
    assert parse_term("a |> (b <| c)") == Op(a, TRI, Op(b, TRI_INV, c))


@pytest.mark.parametrize("text", ["", "a |>", "(a |> b", "a b", "a |> )", "a $ b"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_term(text)


names = st.sampled_from(["a", "b", "c", "x1"]).map(Gen)
terms = st.recursive(
    names,
    lambda sub: st.tuples(sub, st.sampled_from((TRI, TRI_INV)), sub).map(lambda t: Op(*t)),
    max_leaves=20,
)


@given(terms)
def test_render_round_trip(t):
    assert parse_term(render(t)) == t


def test_render_shape():
    assert render(parse_term("(a |> b) |> (b |> (a |> b))")) == "(a |> b) |> (b |> (a |> b))"
    assert rightmost_leaf(parse_term("(a |> c) |> (c <| b)")) == "b"


def test_eval_examples():
    T = trivial_quandle(3)
    assert eval_term(parse_term("a |> b"), {"a": 0, "b": 2}, T) == 2
    D = dihedral_quandle(3)
    assert eval_term(parse_term("a |> (a |> b)"), {"a": 0, "b": 1}, D) == 1
    for Qm in [D, dihedral_quandle(5)] + enumerate_quandles(3):
        for x, y in itertools.product(range(Qm.n), repeat=2):
            assert eval_term(parse_term("a <| (a |> b)"), {"a": x, "b": y}, Qm) == y
    with pytest.raises(UnassignedGenerator):
        eval_term(parse_term("a |> z"), {"a": 0}, D)


models = st.sampled_from([dihedral_quandle(3), dihedral_quandle(4), dihedral_quandle(5)] + enumerate_quandles(4))


@settings(max_examples=100, deadline=None)
@given(terms, terms, terms, models, st.randoms(use_true_random=False))
def test_eval_respects_self_distributivity(x, y, z, Qm, rnd):
    assignment = {g: rnd.randrange(Qm.n) for g in ("a", "b", "c", "x1")}
    lhs = Op(x, TRI, Op(y, TRI, z))
    rhs = Op(Op(x, TRI, y), TRI, Op(x, TRI, z))
    assert eval_term(lhs, assignment, Qm) == eval_term(rhs, assignment, Qm)


def test_check_hom_examples():
    for s, t in itertools.product(range(4), repeat=2):
        assert check_hom(P, trivial_quandle(4), {"a": s, "b": t})
    D = dihedral_quandle(3)
    assert not check_hom(P, D, {"a": 0, "b": 1})
    assert check_hom(P, D, {"a": 2, "b": 2})


def _brute_dihedral3_count():
    def op(x, y):
        return (2 * x - y) % 3

    n = 0
    for x, y in itertools.product(range(3), repeat=2):
        ab = op(x, y)
        aab = op(x, ab)
        if op(x, ab) == op(y, ab) and op(x, aab) == op(y, aab):
            n += 1
    return n


def test_hom_count_examples():
    assert hom_count(P, trivial_quandle(3)) == 9
    assert hom_count(P, dihedral_quandle(3)) == _brute_dihedral3_count() == 3
    free3 = Presentation("F3", ("a", "b", "c"))
    assert hom_count(P, trivial_quandle(1)) == 1 == hom_count(free3, trivial_quandle(1))


def test_hom_count_caps():
    with pytest.raises(ValueError):
        hom_count(P, trivial_quandle(6))
    with pytest.raises(ValueError):
        hom_count(truncated_thompson_presentation(5), trivial_quandle(2))


def test_orbit_count_examples():
    assert orbit_count(P) == (2, [["a"], ["b"]])
    assert orbit_count(truncated_thompson_presentation(5)) == (2, [["p0"], ["p1", "p2", "p3", "p4", "p5"]])
    assert orbit_count(Presentation("F3", ("a", "b", "c")))[0] == 3


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_trivial_hom_count_is_n_to_orbits(n):
    assert hom_count(P, trivial_quandle(n)) == n ** orbit_count(P)[0] == n * n


def test_hnn_example():
    data = HnnData(P, "t", parse_tau("a->b, b->a|>b"))
    ext = hnn_extend(data)
    assert ext.generators == ("a", "b", "t")
    assert ext.relations[:2] == P.relations
    assert ext.relations[2:] == ((tri(Gen("t"), a), b), (tri(Gen("t"), b), tri(a, b)))
    assert orbit_count(ext) == (2, [["a", "b"], ["t"]])


def test_hnn_empty_tau_and_collision():
    ext = hnn_extend(HnnData(P, "t"))
    assert ext.relations == P.relations and ext.generators == ("a", "b", "t")
    with pytest.raises(PresentationError):
        HnnData(P, "a")
    with pytest.raises(PresentationError):
        HnnData(P, "t", parse_tau("a->z"))


@pytest.mark.parametrize("Qm", enumerate_quandles(3) + [dihedral_quandle(4), trivial_quandle(2)])
def test_hnn_free_letter_multiplies_counts(Qm):
    ext = hnn_extend(HnnData(P, "t"))
    assert hom_count(ext, Qm) == len(Qm) * hom_count(P, Qm)


def test_alexander_rows():
    m = alexander_matrix(P)
    assert m.rows == ((ONE - Q, Q - ONE), (ONE - Q, Q - ONE))
    single = Presentation("R", ("a", "b"), ((parse_term("a |> b"), b),))
    assert alexander_matrix(single).rows == ((ONE - Q, Q - ONE),)
    trivial_rel = Presentation("R", ("a", "b"), ((parse_term("a |> b"), parse_term("a |> b")),))
    assert alexander_matrix(trivial_rel).rows == ((ZERO, ZERO),)


def test_alexander_inverse_operation():
    # a <| b linearizes with q^-1; so a |> (a <| b) = b gives a zero row
    pres = Presentation("R", ("a", "b"), ((parse_term("a |> (a <| b)"), b),))
    assert alexander_matrix(pres).rows == ((ZERO, ZERO),)


random_presentations = st.lists(st.tuples(terms, terms), max_size=4).map(
    lambda rels: Presentation("R", ("a", "b", "c", "x1"), tuple(rels))
)


@given(random_presentations)
def test_alexander_at_q1_gives_rightmost_differences(pres):
    m = alexander_matrix(pres)
    idx = {g: i for i, g in enumerate(pres.generators)}
    spec = m.specialize(1)
    for row, (l, r) in zip(spec, pres.relations):
        expected = [0] * 4
        expected[idx[rightmost_leaf(l)]] += 1
        expected[idx[rightmost_leaf(r)]] -= 1
        assert row == expected
    assert (rank_over_q(spec) if spec else 0) == len(pres.generators) - abelianization_rank(pres)


def test_abelianization_rank():
    assert abelianization_rank(P) == 2
    assert abelianization_rank(Presentation("F", ("a", "b", "c", "d"))) == 4
    assert rank_over_q(alexander_matrix(P).specialize(1)) == 0


def test_dsl_round_trip_and_errors():
    assert parse_presentation(P.to_dsl()) == P
    assert Presentation.from_json(P.to_json()) == P
    text = "# comment\nquandle X  # trailing\ngens a, b\n\nrel a |> b = b\n"
    assert parse_presentation(text).relations == ((parse_term("a |> b"), b),)
    with pytest.raises(ParseError, match="line 2"):
        parse_presentation("gens a\nrel a |> c = a")
    with pytest.raises(ParseError, match="line 2, column 12"):
        parse_presentation("gens a, b\nrel a |> b <| a = b")
    with pytest.raises(ParseError):
        parse_presentation("quandle X\nrel a = a")
    with pytest.raises(PresentationError):
        Presentation("X", ("a", "a"))
