from collections import defaultdict

import numpy as np
import pytest
import scipy.sparse as sp
from conftest import systems

from tubeknots import patterns
from tubeknots.enumerate import count_no_2section, enumerate_polygons
from tubeknots.lattice import TubeDims

REF = {4: 9, 6: 42, 8: 209, 10: 1113, 12: 5835}


def _poly_matrix(sys, which):
    """{exponent: sparse 0/1 matrix} for A, T or B."""
    rows, cols, exps = sys.coo(which)
    out = {}
    for e in set(exps.tolist()):
        m = exps == e
        out[e] = sp.csr_matrix((np.ones(m.sum(), dtype=np.int64), (rows[m], cols[m])), shape=sys.shape(which))
    return out


def _pmul(p, q, n_max):
    out = defaultdict(lambda: None)
    for a, x in p.items():
        for b, y in q.items():
            if a + b <= n_max:
                z = x @ y
                out[a + b] = z if out[a + b] is None else out[a + b] + z
    return dict(out)


def _power_expansion(sys, n_max):
    """Coefficients of A (I + T + T^2 + ...) B, truncated at x^n_max, plus span-0/1 terms."""
    A, T, B = (_poly_matrix(sys, w) for w in "ATB")
    acc = dict(A)
    term = dict(A)
    while term:
        term = _pmul(term, T, n_max)
        for e, m in term.items():
            acc[e] = acc[e] + m if e in acc else m
    series = _pmul(acc, B, n_max)
    out = defaultdict(int)
    for e, m in series.items():
        out[e] += int(m.sum())
    for p in sys.span0:
        out[p.length] += 1
    for n in sys.span1_lengths:
        out[n] += 1
    return {n: c for n, c in sorted(out.items()) if c and n <= n_max}


def test_state_sizes():
    full, res = systems()
    assert len(full.propers) == 1829
    assert len(res.propers) == 553


def test_irreducible_aperiodic():
    for s in systems():
        assert patterns.is_irreducible(s)
        assert patterns.is_aperiodic(s)


def test_follow_relation_by_tracing():
    for s in systems():
        patterns.check_follow_relation(s)


def test_follow_relation_structure():
    full, _ = systems()
    rows, cols, exps = full.T_coo
    for i, j, e in list(zip(rows, cols, exps))[::97]:
        assert full.propers[i].right_pairing == full.propers[j].left_pairing
        assert e == full.propers[j].length > 0
    # one monomial per entry
    assert len(set(zip(rows.tolist(), cols.tolist()))) == len(rows)


def test_pattern_kinds():
    full, _ = systems()
    assert all(p.kind == "proper" for p in full.propers)
    assert all(p.kind == "start" for p in full.starts)
    assert all(p.kind == "end" for p in full.ends)
    assert {p.kind for p in full.span0} <= {"span0"}


def test_restricted_has_no_2_half_sections():
    _, res = systems()
    for p in res.propers:
        assert p.block.n_left != 2 and p.block.n_right != 2


def test_series_paper_values():
    full, _ = systems()
    assert patterns.transfer_series(full, 12) == REF
    assert patterns.transfer_series(full, 2) == {}


def test_series_equals_enumeration_to_16():
    full, res = systems()
    assert patterns.transfer_series(full, 16) == enumerate_polygons(n_max=16).totals()
    assert patterns.transfer_series(res, 16) == count_no_2section(n_max=16).totals()


def test_series_by_span_equals_enumeration():
    full, _ = systems()
    assert patterns.transfer_series(full, 14, by_span=True) == enumerate_polygons(n_max=14).by_span()


@pytest.mark.parametrize("which", [0, 1])
def test_two_path_series(which):
    s = systems()[which]
    a = patterns.transfer_series(s, 12)
    assert patterns.transfer_series_by_length(s, 12) == a
    assert _power_expansion(s, 12) == a


def test_small_tube_self_consistent():
    s = patterns.generate_one_patterns(TubeDims(1, 1))
    assert len(s.propers) < 100
    assert patterns.transfer_series(s, 14) == enumerate_polygons(TubeDims(1, 1), 14).totals()


def test_to_json_shapes():
    _, res = systems()
    d = res.to_json()
    assert len(d["propers"]) == 553
    assert len(d["T"]) == len(res.T_coo[0])
