import io
import random

import pytest
from conftest import census
from hypothesis import given, settings
from hypothesis import strategies as st

from tubeknots import diagram
from tubeknots.errors import IllegalMove, NotClosed, NotFourSection, OddLength, OutOfTube, SelfIntersecting
from tubeknots.lattice import (
    POS,
    BfacfMove,
    apply_bfacf,
    canonical_vertices,
    count_2sections,
    from_edges,
    is_hidden_2section,
    legal_moves,
    parse_polygon,
    read_polygons,
    section_sizes,
    sections,
    two_section_indices,
    validate_polygon,
    write_polygons,
)


def v(x, lab):
    y, z = POS[lab]
    return (x, y, z)


SQUARE0 = [v(0, "a"), v(0, "b"), v(0, "d"), v(0, "c")]
SQUARE1 = [v(0, "a"), v(1, "a"), v(1, "b"), v(0, "b")]
polys = st.sampled_from(census(10))


def test_labels_chart():
    assert POS == {"a": (0, 0), "b": (0, 1), "c": (1, 0), "d": (1, 1), "e": (2, 0), "f": (2, 1)}


def test_span0_square():
    p = validate_polygon(SQUARE0)
    assert (p.n, p.span) == (4, 0)


def test_span1_square():
    p = validate_polygon(SQUARE1)
    assert (p.n, p.span) == (4, 1)


def test_errors():
    with pytest.raises(SelfIntersecting):
        validate_polygon([v(0, "a"), v(0, "b"), v(0, "a"), v(0, "b")])
    with pytest.raises(NotClosed):
        validate_polygon([v(0, "a"), v(0, "b"), v(0, "d"), v(1, "d")])
    with pytest.raises(OutOfTube):
        validate_polygon([(0, 2, 0), (0, 3, 0), (0, 3, 1), (0, 2, 1)])
    with pytest.raises((OddLength, NotClosed)):
        validate_polygon([v(0, "a"), v(0, "b"), v(0, "d")])


def test_sections_examples():
    assert [len(s) for s in sections(validate_polygon(SQUARE1))] == [2]
    assert sections(validate_polygon(SQUARE0)) == []


def test_count_2sections_examples():
    assert count_2sections(validate_polygon(SQUARE1)) == 1
    assert count_2sections(validate_polygon(SQUARE0)) == 0


def _hidden_example():
    # lanes a, b along x = 0..2, hinge path a-c-d-b at x = 0 bumped to x = 1 by a +2 move
    base = validate_polygon([v(0, "a"), v(1, "a"), v(2, "a"), v(2, "b"), v(1, "b"), v(0, "b"), v(0, "d"), v(0, "c")])
    m = BfacfMove("plus2", (v(0, "c"), v(0, "d")), "+x")
    return apply_bfacf(base, m)


def test_hidden_2section_true():
    p = _hidden_example()
    assert section_sizes(p)[0] == 4
    assert is_hidden_2section(p, 1)


def test_straight_4section_not_hidden():
    # four lanes straight through x = 0..3; hinge edges only at the ends
    vs = [v(x, "a") for x in range(4)] + [v(3, "b")] + [v(x, "b") for x in range(2, -1, -1)]
    vs += [v(0, "d")] + [v(x, "d") for x in range(1, 4)] + [v(3, "c")] + [v(x, "c") for x in range(2, -1, -1)]
    p = validate_polygon(vs)
    assert section_sizes(p) == [4, 4, 4]
    assert not is_hidden_2section(p, 2)


def test_hidden_on_2section_raises():
    with pytest.raises(NotFourSection):
        is_hidden_2section(validate_polygon(SQUARE1), 1)


def test_plus2_on_square():
    p = validate_polygon(SQUARE0)
    q = apply_bfacf(p, BfacfMove("plus2", (v(0, "a"), v(0, "b")), "+x"))
    assert (q.n, q.span) == (6, 1)
    assert count_2sections(q) == 1


def test_minus2_without_u_raises():
    p = validate_polygon(SQUARE1)
    with pytest.raises(IllegalMove):
        apply_bfacf(p, BfacfMove("minus2", (v(0, "a"), v(0, "b")), "+y"))


@given(polys)
@settings(deadline=None, max_examples=200)
def test_length_bookkeeping(p):
    hinge = sum(len(p.hinge(k)) for k in range(p.span + 1))
    sizes = section_sizes(p)
    assert p.n == sum(sizes) + hinge
    assert p.n % 2 == 0
    assert all(s in (2, 4, 6) for s in sizes)
    assert count_2sections(p) == len(two_section_indices(p)) == sizes.count(2)


@given(polys, st.integers(0, 5), st.integers(0, 100), st.booleans())
@settings(deadline=None, max_examples=200)
def test_canonical_idempotent_and_translation_invariant(p, dx, rot, rev):
    vs = [(x + dx, y, z) for x, y, z in p.vertices]
    k = rot % len(vs)
    vs = vs[k:] + vs[:k]
    if rev:
        vs.reverse()
    assert validate_polygon(vs) == p
    assert canonical_vertices(p.vertices) == p.vertices


@given(polys)
@settings(deadline=None, max_examples=100)
def test_from_edges_roundtrip(p):
    assert from_edges(p.edge_set) == p


def _undo(q, m):
    """Apply m.inverse() to q, allowing for the x-translation canonicalisation may have done."""
    out = []
    for dx in (-1, 0, 1):
        try:
            out.append(apply_bfacf(q, m.inverse().shifted(dx)))
        except IllegalMove:
            pass
    return out


@given(polys, st.randoms(use_true_random=False))
@settings(deadline=None, max_examples=150)
def test_move_inverse(p, rnd):
    m = rnd.choice(legal_moves(p))
    q = apply_bfacf(p, m)
    assert q.n - p.n in (-2, 0, 2)
    assert p in _undo(q, m)


def test_bfacf_preserves_classification():
    rng = random.Random(7)
    for p in rng.sample(census(12), 20):
        q = p
        for _ in range(20):
            q2 = apply_bfacf(q, rng.choice(legal_moves(q)))
            if q2.n <= 20:
                q = q2
            assert diagram.classify_polygon(q).is_unknot


def test_text_roundtrip():
    ps = list(census(8))
    buf = io.StringIO()
    write_polygons(buf, ps)
    buf.seek(0)
    assert list(read_polygons(buf)) == ps
    assert parse_polygon(ps[3].to_text()) == ps[3]
