import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import determinant_from_bracket, jones_like, mirror_poly

from tubeknots import braid as B
from tubeknots.errors import FlipOnFourBraid, NotFound, PatternMismatch

W = B.BraidWord.parse
D = B.PlatDiagram.parse
TREFOIL_WORD = "[1| s1^-1 s1 s3 s2 s3^-2 s2^-1 s3^-1 s3 s2^-1 s3^-1 s3 s1 |1]"
NAMES = list(B.KNOWN)


@st.composite
def diagrams(draw, max_len=10):
    n = draw(st.integers(0, max_len))
    letters = draw(st.lists(st.tuples(st.integers(1, 3), st.sampled_from([1, -1])), min_size=n, max_size=n))
    w = B.BraidWord(tuple(B.Generator(i, e) for i, e in letters))
    return B.PlatDiagram(draw(st.sampled_from([1, 2])), w, draw(st.sampled_from([1, 2])))


def test_inverse_example():
    assert B.inverse(W("s1 s2 s3^-2")) == W("s3^2 s2^-1 s1^-1")


@given(diagrams())
@settings(deadline=None, max_examples=100)
def test_involutions(d):
    w = d.word
    assert B.reverse(B.reverse(w)) == w
    assert B.inverse(B.inverse(w)) == w
    if w.is_3braid():
        assert B.flip(B.flip(w)) == w


def test_flip_example_and_error():
    assert B.flip(W("s1^-2")) == W("s2^-2")
    with pytest.raises(FlipOnFourBraid):
        B.flip(W("s3"))
    assert B.word_transforms(W("s1 s2"), "reverse") == W("s2 s1")


def test_move_examples():
    assert B.apply_move(D("[1| s1 |1]"), B.Move("A1", 0)) == D("[1| s3 |1]")
    assert B.apply_move(D("[1| s2 s2^-1 |1]"), B.Move("B2", 0)) == B.PlatDiagram(1, B.BraidWord(), 1)
    d = D("[1| s1 s2 s3^-1 |2]")
    assert B.apply_move(d, B.Move("A2")) == B.PlatDiagram(2, B.reverse(d.word), 1)
    with pytest.raises(PatternMismatch):
        B.apply_move(D("[1| s2 |1]"), B.Move("A1", 0))


def test_normal_form_examples():
    d = D(TREFOIL_WORD)
    c = B.conway_normal_form(d)
    assert c.crossings == 3
    assert B.classify_plat(d) in (B.classify_plat(B.KNOWN["3_1"].diagram()), B.LinkType.prime(B.canonical_fraction(3, -1)))
    assert B.classify_plat(d).determinant == 3
    assert B.conway_normal_form(D("[1| s2 s2^-1 |1]")).entries == ()
    # C(2,-2) in the alternating-sign convention
    c22 = B.conway(2, 2)
    assert c22.exponents == (2, -2)
    assert B.conway_normal_form(c22.diagram()) == c22


def test_trefoil_word_chirality():
    # bracket oracle: this word is the mirror of C(3) under our sign convention
    d = D(TREFOIL_WORD)
    assert jones_like(d) == mirror_poly(jones_like(B.KNOWN["3_1"].diagram()))
    assert str(B.classify_plat(d)) == "3/-1"


def test_fraction_examples():
    assert B.two_bridge_fraction(B.conway(3)) == B.TwoBridgeFraction(3, 1)
    assert B.two_bridge_fraction(B.conway(2, 2)) == B.TwoBridgeFraction(5, 2)
    assert B.classify_plat(B.conway(1).diagram()).is_unknot


def test_empty_closures():
    e = B.BraidWord()
    kinds = {B.classify_plat(B.PlatDiagram(1, e, 1)).kind, B.classify_plat(B.PlatDiagram(1, e, 2)).kind}
    assert kinds == {"unknot", "unlink"}


@pytest.mark.parametrize("name", NAMES)
def test_determinant_oracles(name):
    d = B.KNOWN[name].diagram()
    lt = B.classify_plat(d)
    assert B.determinant_oracle(d) == determinant_from_bracket(d) == lt.determinant


def test_determinant_small_cases():
    assert B.determinant_oracle(B.KNOWN["3_1"].diagram()) == 3
    assert B.determinant_oracle(B.KNOWN["unknot"].diagram()) == 1
    assert B.determinant_oracle(B.KNOWN["hopf"].diagram()) == 2
    e = B.BraidWord()
    unlink = next(B.PlatDiagram(1, e, j) for j in (1, 2) if B.components(B.PlatDiagram(1, e, j)) == 2)
    assert B.determinant_oracle(unlink) == 0


@given(diagrams(8), st.randoms(use_true_random=False))
@settings(deadline=None, max_examples=150)
def test_moves_preserve_class(d, rnd):
    lt = B.classify_plat(d)
    for _ in range(5):
        m = rnd.choice(B.legal_moves(d, include_inverse=True))
        d2 = B.apply_move(d, m)
        assert B.classify_plat(d2) == lt
        assert B.determinant_oracle(d2) == lt.determinant
        d = d2 if d2.crossings <= 14 else d


@given(diagrams(7))
@settings(deadline=None, max_examples=80)
def test_classify_matches_bracket(d):
    lt = B.classify_plat(d)
    assert determinant_from_bracket(d) == lt.determinant
    if B.components(d) == 1:
        c = B.conway_normal_form(d)
        ref = c.diagram() if c.entries else B.KNOWN["unknot"].diagram()
        assert jones_like(d) == jones_like(ref)


@given(diagrams(10))
@settings(deadline=None, max_examples=100)
def test_normal_form_properties(d):
    c = B.conway_normal_form(d)
    assert c.crossings <= d.crossings
    assert all(e != 0 for e in c.entries)
    nf = c.diagram()
    assert not [m for m in B.legal_moves(nf) if m.name.startswith("B")]


@pytest.mark.parametrize("name", ["3_1", "4_1", "5_2", "7_6"])
def test_fraction_invariant_under_A_moves(name):
    d = B.KNOWN[name].diagram()
    f = B.two_bridge_fraction(B.conway_normal_form(d))
    for mv in ("A2", "A3", "A4"):
        try:
            d2 = B.apply_move(d, B.Move(mv))
        except PatternMismatch:
            continue
        assert B.two_bridge_fraction(B.conway_normal_form(d2)) == f


def test_trefoil_pins():
    c = B.KNOWN["3_1"]
    mirror = B.conway(-3)
    hits = {w: [bool(list(B.unknotting_insertions(f.diagram(), W(w)))) for f in (c, mirror)] for w in ("s1", "s1^-1", "s1^-2")}
    assert all(any(v) for v in hits.values())
    assert hits["s1^-2"] == [True, True]
    assert B.unknotting_word(c) in (W("s1^-2"), W("s1^-1 s1^-1"))


def test_7_6_and_6_2_3_pins():
    assert list(B.unknotting_insertions(B.KNOWN["7_6"].diagram(), W("s1^-2")))
    assert list(B.unknotting_insertions(B.KNOWN["6^2_3"].diagram(), W("s2^-1 s1^-1")))


def test_7_6_flipped_insertion():
    flipped = B.apply_move(B.KNOWN["7_6"].diagram(), B.Move("A3"))
    hits = list(B.unknotting_insertions(flipped, W("s2^-2")))
    assert (4, "w0") in hits
    assert B.classify_plat(B.insert_word(flipped, 4, W("s2^-2"))).is_unknot


def test_trefoil_every_position():
    d = B.KNOWN["3_1"].diagram()
    w = W("s1^-2")
    for pos in range(1, len(d.word)):
        assert any(B.classify_plat(B.insert_word(d, pos, B.variant(w, v))).is_unknot for v in B.VARIANTS)


@pytest.mark.parametrize("name", NAMES[1:])
def test_scrambled_insertions(name):
    rng = random.Random(sum(map(ord, name)))
    d0 = B.KNOWN[name].diagram()
    for _ in range(10):
        d = B.scramble(d0, 50, rng)
        assert B.classify_plat(d) == B.classify_plat(d0)
        w0 = B.unknotting_word(B.conway_normal_form(d))
        assert len(w0) <= B.CROSSING_NUMBER[name]
        pos, v = B.find_unknotting_insertion(d, w0)
        assert B.classify_plat(B.insert_word(d, pos, B.variant(w0, v))).is_unknot


def test_not_found():
    # the empty word changes nothing, so no insertion can unknot
    with pytest.raises(NotFound):
        B.find_unknotting_insertion(B.KNOWN["3_1"].diagram(), B.BraidWord())


def test_artin_action():
    assert B.braid_equal(W("s1 s2 s1"), W("s2 s1 s2"))
    assert B.braid_equal(W("s1 s3"), W("s3 s1"))
    assert not B.braid_equal(W("s1"), W("s1^-1"))
