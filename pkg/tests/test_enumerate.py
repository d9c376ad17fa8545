import math

import pytest
from conftest import census
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import naive_polygon_counts

from tubeknots.enumerate import (
    Budget,
    CountTable,
    EnumerationConfig,
    count_no_2section,
    enumerate_polygons,
    generate_polygons,
    run_enumeration,
)
from tubeknots.errors import ResourceLimit
from tubeknots.lattice import count_2sections, validate_polygon

REF = {4: 9, 6: 42, 8: 209, 10: 1113, 12: 5835}


def test_n4():
    assert enumerate_polygons(n_max=4).totals() == {4: 9}


def test_paper_counts_to_12():
    assert enumerate_polygons(n_max=12).totals() == REF


def test_n4_by_span():
    assert enumerate_polygons(n_max=4).by_span() == {(4, 0): 2, (4, 1): 7}


def test_naive_oracle_agrees():
    assert naive_polygon_counts(12) == enumerate_polygons(n_max=12).totals()


def test_n4_no_2sections_keeps_span0_squares():
    t = count_no_2section(n_max=4)
    assert t.by_span() == {(4, 0): 2}
    direct = [p for p in census(4) if count_2sections(p) == 0]
    assert len(direct) == 2 and all(p.span == 0 for p in direct)


def test_filter_by_direct_check():
    want = {}
    for p in census(12):
        if count_2sections(p) == 0:
            want[p.n] = want.get(p.n, 0) + 1
    assert count_no_2section(n_max=12).totals() == want


def test_small_nmax_rejected():
    with pytest.raises(ValueError):
        enumerate_polygons(n_max=2)


def test_generated_polygons_are_valid_and_distinct():
    ps = census(10)
    assert len(set(ps)) == len(ps) == sum(REF[n] for n in REF if n <= 10)
    for p in ps[::37]:
        assert validate_polygon(p.vertices) == p


def test_sink_sees_every_polygon():
    seen = []
    t = enumerate_polygons(n_max=8, sink=seen.append)
    assert len(seen) == sum(t.totals().values())


@given(st.integers(1, 5), st.sampled_from([8, 10, 12]), st.sampled_from(["none", "no-2-sections"]))
@settings(deadline=None, max_examples=12)
def test_shards_sum_to_total(k, n_max, filt):
    whole = run_enumeration(EnumerationConfig(n_max=n_max, filter=filt))
    parts = CountTable()
    for i in range(k):
        parts = parts.merge(run_enumeration(EnumerationConfig(n_max=n_max, filter=filt, shards=k, shard=i)))
    assert parts.counts == whole.counts


def test_checkpoint_resume(tmp_path):
    ck = tmp_path / "ck.json"
    cfg = EnumerationConfig(n_max=12, shards=2, shard=1)
    first = run_enumeration(cfg, ck)
    assert ck.exists()
    assert run_enumeration(cfg, ck).counts == first.counts


def test_budget_raises():
    with pytest.raises(ResourceLimit):
        enumerate_polygons(n_max=24, budget=Budget(seconds=1e-6))


def test_count_table_json_roundtrip():
    t = enumerate_polygons(n_max=10)
    assert CountTable.from_json(t.to_json()).counts == t.counts
    assert t.to_csv(by_span=False).splitlines()[1] == "4,9"


def test_log_pn_over_n_increasing():
    tot = enumerate_polygons(n_max=18).totals()
    vals = [math.log(tot[n]) / n for n in sorted(tot)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_no2section_below_all():
    a = enumerate_polygons(n_max=14).totals()
    b = count_no_2section(n_max=14).totals()
    assert all(b.get(n, 0) <= a[n] for n in a)
