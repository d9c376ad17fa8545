import functools
import json
import random

import pytest
from conftest import census
from hypothesis import given, settings
from hypothesis import strategies as st

from tubeknots import blocks, braid, diagram
from tubeknots.errors import Has2Sections, No2Section, Not2Section, PatternMismatch, TypeMismatch
from tubeknots.lattice import POS, count_2sections, polygon_from_parts, section_sizes, two_section_indices

W = braid.BraidWord.parse
GENS = [braid.Generator(i, e) for i in (1, 2) for e in (1, -1)]
TREFOIL = braid.classify_plat(braid.KNOWN["3_1"].diagram())


def _se(a, b):
    a, b = POS[a], POS[b]
    return (min(a, b), max(a, b))


CAP = frozenset({_se("b", "a"), _se("a", "c"), _se("c", "e"), _se("d", "f")})


def close(b):
    t0 = blocks.standard_boundary()
    return polygon_from_parts([CAP] + list(b.hinges) + [CAP], [t0] + list(b.sections) + [t0])


@functools.lru_cache(maxsize=None)
def no2():
    return tuple(p for p in census(12) if count_2sections(p) == 0 and p.span >= 1)


@functools.lru_cache(maxsize=None)
def with4():
    return tuple(p for p in census(12) if 4 in section_sizes(p))


# ------------------------------------------------------------- braid blocks


@pytest.mark.parametrize("g", GENS, ids=str)
def test_elementary_block_word(g):
    b = blocks.elementary_braid_block(g)
    assert b.span == 3
    assert b.left == b.right == blocks.standard_boundary()
    assert braid.braid_equal(blocks.block_word(b), braid.BraidWord((g,)))


def test_inverse_pair_is_trivial():
    for g in GENS:
        b = blocks.elementary_braid_block(g).then(blocks.elementary_braid_block(g.inverse()))
        assert braid.braid_equal(blocks.block_word(b), braid.BraidWord())


def test_sigma3_rejected():
    with pytest.raises(ValueError):
        blocks.elementary_braid_block(braid.Generator(3, 1))


@pytest.mark.parametrize("t", blocks.FOUR_SECTION_TYPES)
def test_connectors(t):
    for inbound in (True, False):
        c = blocks.connector_block(t, inbound)
        assert c.span <= 4
        assert braid.braid_equal(blocks.block_word(c), braid.BraidWord())
    b = blocks.braid_block(braid.BraidWord(), t)
    assert braid.braid_equal(blocks.block_word(b), braid.BraidWord())


def test_standard_connector_is_identity():
    t0 = blocks.standard_boundary()
    assert blocks.connector_block(t0).span == 0


def test_connector_elementary_closure_unknot():
    t0 = blocks.standard_boundary()
    b = blocks.connector_block(t0).then(blocks.elementary_braid_block(GENS[0])).then(blocks.connector_block(t0, False))
    assert diagram.classify_polygon(close(b)).is_unknot


@given(st.lists(st.sampled_from(GENS), max_size=5), st.sampled_from(blocks.FOUR_SECTION_TYPES))
@settings(deadline=None, max_examples=60)
def test_braid_block_span_and_word(letters, t):
    w = braid.BraidWord(tuple(letters))
    b = blocks.braid_block(w, t)
    assert b.span <= 3 * len(w) + 8
    assert braid.braid_equal(blocks.block_word(b), w) or t != "bdef"


def test_sigma1_block_span3():
    assert blocks.braid_block(W("s1"), blocks.standard_boundary()).span == 3


def test_sblock_serialisation():
    b = blocks.braid_block(W("s1 s2^-1"), "abcd")
    assert blocks.SBlock.from_json(json.loads(json.dumps(b.to_json()))) == b
    txt = b.to_text()
    assert len(txt.splitlines()) == 4
    assert "+x" in txt and "-x" in txt


# ----------------------------------------------------------- insertion


@given(st.integers(0, 10_000), st.lists(st.sampled_from(GENS), max_size=2))
@settings(deadline=None, max_examples=60)
def test_insert_delete_identity(i, letters):
    # squared letters: a pure braid keeps the polygon one component
    p = with4()[i % len(with4())]
    k = next(k for k, s in enumerate(section_sizes(p), 1) if s == 4)
    b = blocks.braid_block(braid.BraidWord(tuple(g for g in letters for _ in (0, 1))), p.section(k))
    q = blocks.insert_block(p, k, b)
    assert q.span == p.span + b.span
    assert q.n == p.n + b.edge_count
    assert blocks.delete_block(q, k, b) == p


def test_trivial_block_keeps_type():
    p = with4()[3]
    k = next(k for k, s in enumerate(section_sizes(p), 1) if s == 4)
    q = blocks.insert_block(p, k, blocks.braid_block(braid.BraidWord(), p.section(k)))
    assert diagram.classify_polygon(q) == diagram.classify_polygon(p)


def test_insert_type_mismatch():
    p = with4()[0]
    k = next(k for k, s in enumerate(section_sizes(p), 1) if s == 4)
    other = next(t for t in blocks.FOUR_SECTION_TYPES if blocks.lanes_of(t) != p.section(k))
    with pytest.raises(TypeMismatch):
        blocks.insert_block(p, k, blocks.braid_block(W("s1"), other))


def test_w0_block_unknots_trefoil(trefoil_pattern):
    p = next(p for p in census(8) if two_section_indices(p))
    q = blocks.insert_pattern_at_2section(p, two_section_indices(p)[0], trefoil_pattern)
    u, ins = diagram.unknot_polygon(q)
    assert diagram.classify_polygon(u).is_unknot


# ----------------------------------------------------------- patterns


def test_trefoil_pattern(trefoil_pattern):
    lt = trefoil_pattern.link_type()
    assert lt == TREFOIL and lt.determinant == 3
    assert trefoil_pattern.span >= 7
    assert trefoil_pattern.is_link_pattern()


def test_unknot_pattern_keeps_type():
    pat = blocks.search_pattern(braid.BraidWord(), lambda lt: lt.is_unknot)
    assert not pat.is_link_pattern()
    p = next(p for p in census(10) if two_section_indices(p))
    q = blocks.insert_pattern_at_2section(p, two_section_indices(p)[0], pat)
    assert diagram.classify_polygon(q).is_unknot


def test_pattern_increase_constant(trefoil_pattern):
    inc = blocks.pattern_increase(trefoil_pattern)
    rng = random.Random(11)
    for p in rng.sample([p for p in census(12) if two_section_indices(p)], 25):
        k = rng.choice(two_section_indices(p))
        q = blocks.insert_pattern_at_2section(p, k, trefoil_pattern)
        assert q.n == p.n + inc


def test_pattern_two_sites(trefoil_pattern):
    p = next(p for p in census(10) if len(two_section_indices(p)) >= 2)
    k1, k2 = two_section_indices(p)[:2]
    q1 = blocks.insert_pattern_at_2section(p, k1, trefoil_pattern)
    q2 = blocks.insert_pattern_at_2section(p, k2, trefoil_pattern)
    assert q1 != q2
    assert diagram.classify_polygon(q1) == diagram.classify_polygon(q2) == TREFOIL


def test_two_copies_f_L_2(trefoil_pattern):
    p = next(p for p in census(10) if len(two_section_indices(p)) >= 2)
    q = blocks.insert_pattern_at_2section(p, two_section_indices(p)[0], trefoil_pattern)
    types = set()
    for k in two_section_indices(q):
        lt = diagram.classify_polygon(blocks.insert_pattern_at_2section(q, k, trefoil_pattern))
        types.add(lt)
    two = [lt for lt in types if lt.f_L == 2]
    assert two and two[0].factors == (TREFOIL.factors[0],) * 2


def test_pattern_on_4section_raises(trefoil_pattern):
    p = with4()[0]
    k = next(k for k, s in enumerate(section_sizes(p), 1) if s == 4)
    with pytest.raises(Not2Section):
        blocks.insert_pattern_at_2section(p, k, trefoil_pattern)


# -------------------------------------------------------- concatenation


def test_plain_two_squares():
    sq = [p for p in census(4) if p.span == 0]
    q = blocks.concatenate(sq[0], sq[1], "plain")
    assert q.n == 14
    assert diagram.classify_polygon(q).is_unknot
    assert count_2sections(q) >= 1


@given(st.integers(0, 10_000), st.integers(0, 10_000))
@settings(deadline=None, max_examples=40)
def test_plain_concat_length(i, j):
    ps = census(8)
    p1, p2 = ps[i % len(ps)], ps[j % len(ps)]
    q = blocks.concatenate(p1, p2, "plain")
    assert q.n == p1.n + p2.n + blocks.PLAIN_ADDED
    assert diagram.classify_polygon(q).is_unknot


@given(st.integers(0, 10_000), st.integers(0, 10_000))
@settings(deadline=None, max_examples=40)
def test_no2section_concat(i, j):
    p1, p2 = no2()[i % len(no2())], no2()[j % len(no2())]
    q = blocks.concatenate(p1, p2)
    assert q.n == p1.n + p2.n + 42 == p1.n + p2.n + 2 * blocks.C_STRETCH + 2
    assert q.span == p1.span + p2.span + 9
    assert count_2sections(q) == 0
    # the join edits p1's last hinge only
    for k in range(p1.span):
        assert q.hinge(k) == p1.hinge(k)
    for k in range(1, p1.span + 1):
        assert q.section(k) == p1.section(k)
    off = q.span - p2.span
    for k in range(1, p2.span + 1):
        assert q.section(k + off) == p2.section(k)
    assert blocks.unconcatenate(q, p1.n) == (p1, p2)


def test_concat_of_knots_is_connected_sum(trefoil_pattern):
    k = blocks.remove_2sections(trefoil_pattern.closure()).polygon
    sq = no2()[0]
    q = blocks.concatenate(k, sq)
    assert diagram.classify_polygon(q) == TREFOIL


def test_no2section_needs_clean_inputs():
    sq = next(p for p in census(4) if p.span == 1)
    with pytest.raises(Has2Sections):
        blocks.concatenate(sq, no2()[0])


# ------------------------------------------------------------- splitting


def test_split_added_parities():
    a, b, c = POS["a"], POS["b"], POS["d"]
    assert blocks.SPLIT_D == 16
    assert blocks.split_added(a, b, "left") == blocks.split_added(a, b, "right") == 17
    assert blocks.split_added(a, c, "left") + blocks.split_added(a, c, "right") == 34


@given(st.integers(0, 100_000))
@settings(deadline=None, max_examples=80)
def test_split_first_2section(i):
    ps = [p for p in census(12) if count_2sections(p)]
    p = ps[i % len(ps)]
    p1, p2 = blocks.split_first_2section(p)
    assert count_2sections(p1) == 0
    assert count_2sections(p2) == count_2sections(p) - 1
    assert p1.n + p2.n == p.n + 2 * blocks.SPLIT_D
    assert diagram.classify_polygon(p1).is_unknot and diagram.classify_polygon(p2).is_unknot
    cands = blocks.unsplit(p1, p2)
    assert p in cands and len(cands) <= 2


def test_split_of_knot(trefoil_pattern):
    p = next(p for p in census(10) if len(two_section_indices(p)) >= 2)
    q = blocks.insert_pattern_at_2section(p, two_section_indices(p)[-1], trefoil_pattern)
    p1, p2 = blocks.split_first_2section(q)
    lts = {str(diagram.classify_polygon(p1)), str(diagram.classify_polygon(p2))}
    assert lts == {"unknot", str(TREFOIL)}


def test_split_requires_2section():
    with pytest.raises(No2Section):
        blocks.split_first_2section(no2()[0])


def test_split_all_length():
    for p in [p for p in census(12) if count_2sections(p) >= 3][:20]:
        pieces = blocks.split_all(p)
        t = count_2sections(p)
        assert len(pieces) == t + 1
        assert sum(q.n for q in pieces) == p.n + 2 * blocks.SPLIT_D * t


@given(st.integers(0, 100_000))
@settings(deadline=None, max_examples=60)
def test_remove_2sections_pipeline(i):
    ps = [p for p in census(12) if count_2sections(p)]
    p = ps[i % len(ps)]
    t = count_2sections(p)
    r = blocks.remove_2sections(p)
    assert r.t == t
    assert r.polygon.n == p.n + blocks.COMBINE_E * t
    assert blocks.COMBINE_E == 2 * blocks.C_STRETCH + 2 * blocks.SPLIT_D + 2
    assert count_2sections(r.polygon) == 0
    cands = blocks.restore_2sections(r)
    assert p in cands and len(cands) <= 2**t


def test_closure_table_injective():
    cfgs = blocks.closure_configs()
    assert len(cfgs) == 713
    assert len(blocks._closure_inverse("right")) == len(cfgs)
    assert len(blocks._closure_inverse("left")) == sum(len(c[0]) != 2 for c in cfgs)


def test_data_dir_override(tmp_path, monkeypatch):
    monkeypatch.setenv("TUBEKNOTS_DATA", str(tmp_path))
    (tmp_path / "constants.json").write_text('{"D": 16}')
    blocks._data.cache_clear()
    try:
        assert blocks._data("constants") == {"D": 16}
    finally:
        monkeypatch.delenv("TUBEKNOTS_DATA")
        blocks._data.cache_clear()


# ------------------------------------------------------------------- U/V


@functools.lru_cache(maxsize=None)
def uv_examples():
    return tuple((p, s) for p in census(12) for s in blocks.uv_sites(p))


@given(st.integers(0, 10_000))
@settings(deadline=None, max_examples=30)
def test_uv_roundtrip(i):
    p, (k, kind) = uv_examples()[i % len(uv_examples())]
    q = blocks.interchange_UV(p, k)
    assert q.n == p.n + (2 if kind == "V" else -2)
    assert blocks.uv_kind(q, k) == ("U" if kind == "V" else "V")
    assert blocks.interchange_UV(q, k) == p
    assert diagram.classify_polygon(q) == diagram.classify_polygon(p)


def test_uv_on_knot(trefoil_pattern):
    q = trefoil_pattern.closure()
    for k, _ in blocks.uv_sites(q)[:3]:
        assert diagram.classify_polygon(blocks.interchange_UV(q, k)) == TREFOIL


def test_uv_mismatch():
    with pytest.raises(PatternMismatch):
        blocks.interchange_UV(no2()[0], 0)
