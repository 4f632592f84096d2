import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quandleforge import thompson as F
from quandleforge.thompson import IDENTITY, LEAF, TreePair, make_pair

from oracles import SAMPLE_POINTS, pl_eval, pl_slopes

x0, x1 = F.generator(0), F.generator(1)


def sample(seed, count=100, max_length=6):
    rng = random.Random(seed)
    return [F.random_element(rng, max_length) for _ in range(count)]


@st.composite
def elements(draw, max_length=6):
    word = draw(st.lists(st.tuples(st.sampled_from((0, 1)), st.sampled_from((1, -1))), max_size=max_length))
    return F.evaluate_word(word, {0: x0, 1: x1})


@st.composite
def trees(draw, max_leaves=8):
    n = draw(st.integers(1, max_leaves))

    def build(k):
        if k == 1:
            return LEAF
        split = draw(st.integers(1, k - 1))
        return (build(split), build(k - split))

    return build(n)


def test_identity_from_equal_trees():
    t = ((LEAF, LEAF), (LEAF, (LEAF, LEAF)))
    assert make_pair(t, t) == IDENTITY


def test_generators_are_reduced_and_fixed():
    assert F.reduce(x0) == x0
    assert x0.size == 3 and F.leaf_count(x0.range) == 3
    assert x1 == F.shift(x0)
    assert x0 != x1
    assert str(x0) == "(.,(.,.)) -> ((.,.),.)"


def test_leaf_count_mismatch_rejected():
    with pytest.raises(ValueError):
        make_pair((LEAF, LEAF), LEAF)


@given(trees(), trees())
def test_reduce_idempotent(d, r):
    # pad the smaller tree so leaf counts match
    n, m = F.leaf_count(d), F.leaf_count(r)
    while n < m:
        d, n = (d, LEAF), n + 1
    while m < n:
        r, m = (LEAF, r), m + 1
    p = make_pair(d, r)
    assert F.reduce(p) == p
    assert pl_eval(p, "3/7") == pl_eval(TreePair(d, r), "3/7")


def test_reduce_is_order_independent():
    # expand the same element in two different ways; both reduce to it
    p = x0 * x1
    d, r = p.domain, p.range
    k = F.leaf_count(d)
    subs_a = [(LEAF, LEAF) if i % 2 else LEAF for i in range(k)]
    subs_b = [((LEAF, LEAF), LEAF) if i == k - 1 else LEAF for i in range(k)]
    for subs in (subs_a, subs_b):
        assert make_pair(F.graft(d, subs), F.graft(r, subs)) == p


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_multiply_matches_function_composition(seed):
    for p, r in zip(sample(seed, 30), sample(seed + 100, 30)):
        pr = F.multiply(p, r)
        for x in SAMPLE_POINTS:
            assert pl_eval(pr, x) == pl_eval(p, pl_eval(r, x))


def test_invert_is_functional_inverse():
    for p in sample(7, 30):
        for x in SAMPLE_POINTS:
            assert pl_eval(F.invert(p), pl_eval(p, x)) == x


def test_inverse_and_identity():
    assert x0 * F.invert(x0) == IDENTITY
    assert F.invert(F.invert(x1)) == x1
    assert x0 * IDENTITY == x0 == IDENTITY * x0


def test_standard_relators():
    A, B = x0, x1
    Ai = F.invert(A)
    assert F.commutator(A * F.invert(B), Ai * B * A) == IDENTITY
    assert F.commutator(A * F.invert(B), Ai * Ai * B * A * A) == IDENTITY


def test_nonabelian():
    assert not F.equals(x0 * x1, x1 * x0)


@settings(max_examples=60, deadline=None)
@given(elements(), elements(), elements())
def test_group_axioms(p, r, s):
    assert (p * r) * s == p * (r * s)
    assert p * F.invert(p) == IDENTITY
    assert F.invert(F.invert(p)) == p


@settings(max_examples=60, deadline=None)
@given(elements(), elements(), elements())
def test_equality_is_a_congruence(p, r, s):
    rebuilt = make_pair(F.graft(p.domain, [(LEAF, LEAF)] * p.size), F.graft(p.range, [(LEAF, LEAF)] * p.size))
    assert rebuilt == p
    assert rebuilt * r == p * r and s * rebuilt == s * p


def test_shift_identity_and_injective():
    assert F.shift(IDENTITY) == IDENTITY
    for p in sample(11):
        if p == IDENTITY:
            continue
        s = F.shift(p)
        assert s.domain[0] == LEAF and s.range[0] == LEAF
        assert make_pair(s.domain[1], s.range[1]) == p


def test_shift_is_homomorphism():
    for p, r in zip(sample(12), sample(13)):
        assert F.shift(p * r) == F.shift(p) * F.shift(r)


def test_shift_squared_is_conjugation_by_a():
    a = F.invert(x0)
    for p in sample(14):
        assert F.shift(F.shift(p)) == F.conj(a, F.shift(p))


def test_abelianize_values_against_slopes():
    assert F.abelianize(IDENTITY) == (0, 0)
    for p in sample(15, 40):
        s0, s1 = pl_slopes(p)
        e0, e1 = F.abelianize(p)
        assert (s0, s1) == (Fraction(2) ** e0, Fraction(2) ** e1)


def test_abelianize_is_homomorphism_and_independent():
    for p, r in zip(sample(16), sample(17)):
        a, b, c = F.abelianize(p), F.abelianize(r), F.abelianize(p * r)
        assert c == (a[0] + b[0], a[1] + b[1])
    (a0, a1), (b0, b1) = F.abelianize(x0), F.abelianize(x1)
    assert a0 * b1 - a1 * b0 != 0


def test_tree_serialization_round_trip():
    for p in sample(18, 20):
        assert TreePair.parse(str(p)) == p
        assert TreePair.from_json(p.to_json()) == p
    with pytest.raises(ValueError):
        F.parse_tree("(.,.")
