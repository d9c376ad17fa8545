"""The acceptance suite as plain functions, shared by the tests and `verify-paper`.

Each check returns a Check; `fast` shrinks sample sizes for a quick smoke run.
"""

from __future__ import annotations

import dataclasses
import math
import random
import time
from collections.abc import Callable

from . import blocks, braid, diagram, patterns, spectral
from .enumerate import count_no_2section, enumerate_polygons, generate_polygons
from .lattice import apply_bfacf, count_2sections, legal_moves, two_section_indices

REF_COUNTS = {4: 9, 6: 42, 8: 209, 10: 1113, 12: 5835, 14: 30561, 16: 160119, 18: 838043}
REF_EXTENDED = {20: 4383657, 22: 22917673, 24: 119796593}
# third column of the count table, n -> (1/n) log p_{n-6}
REF_LOWER = {
    10: 0.219722, 12: 0.311472, 14: 0.381595, 16: 0.438426, 18: 0.481757, 20: 0.516374,
    22: 0.544712, 24: 0.568284, 26: 0.588207, 28: 0.605265, 30: 0.620044,
}
KAPPA = 0.82694822250681
KAPPA_HAT = 0.43623880228124
BOUND = 0.99485
ORBIT_LINKS = ("unknot", "hopf", "3_1", "4_1", "5_1", "5_2", "7_6", "6^2_3")
PINS = {"7_6": ("s1^-2",), "6^2_3": ("s2^-1 s1^-1",), "3_1": ("s1", "s1^-1", "s1^-2")}


@dataclasses.dataclass
class Check:
    number: int
    name: str
    passed: bool
    detail: dict
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} {status}  {self.name}  {self.detail}"


@dataclasses.dataclass
class VerifyConfig:
    fast: bool = False
    seed: int = 2024
    extended: bool = False  # also count n = 20, 22, 24

    @property
    def n_max(self) -> int:
        return 14 if self.fast else 18


def _systems():
    full = patterns.generate_one_patterns()
    return full, patterns.restrict_no_2sections(full)


def check_counts(cfg: VerifyConfig) -> Check:
    want = {n: c for n, c in REF_COUNTS.items() if n <= cfg.n_max}
    if cfg.extended:
        want.update(REF_EXTENDED)
    got = enumerate_polygons(n_max=max(want)).totals()
    bad = {n: (got.get(n), c) for n, c in want.items() if got.get(n) != c}
    return Check(1, "unknot/all-polygon counts", not bad, {"n_max": max(want), "mismatches": bad})


def check_oracle_equivalence(cfg: VerifyConfig) -> Check:
    n_max = 12 if cfg.fast else 16
    full, restricted = _systems()
    bad = {}
    for name, sys, table in (
        ("all", full, enumerate_polygons(n_max=n_max)),
        ("no-2-sections", restricted, count_no_2section(n_max=n_max)),
    ):
        tm = patterns.transfer_series_by_length(sys, n_max)
        dfs = table.totals()
        for n in range(4, n_max + 1, 2):
            if tm.get(n, 0) != dfs.get(n, 0):
                bad[f"{name}:{n}"] = (tm.get(n, 0), dfs.get(n, 0))
    return Check(2, "transfer matrix = enumeration", not bad, {"n_max": n_max, "mismatches": bad})


def check_state_sizes(cfg: VerifyConfig) -> Check:
    full, restricted = _systems()
    got = (len(full.propers), len(restricted.propers))
    return Check(3, "state-space sizes", got == (1829, 553), {"sizes": got})


def check_growth(cfg: VerifyConfig) -> Check:
    full, restricted = _systems()
    k = spectral.growth_rate(full)
    kh = spectral.growth_rate(restricted)
    ok = abs(k - KAPPA) <= 1e-8 and abs(kh - KAPPA_HAT) <= 1e-8
    return Check(4, "growth rates", ok, {"kappa": k, "kappa_hat": kh})


def check_bound(cfg: VerifyConfig) -> Check:
    _, restricted = _systems()
    nb = spectral.norm_power_bound_detail(spectral.evaluate(restricted, "T", 0.64), 10)
    ok = nb.certified < BOUND
    return Check(
        5,
        "rigorous norm bound",
        ok,
        {"value": nb.value, "certified": nb.certified, "rounding_budget": nb.rounding_budget, "kappa_hat_below": -math.log(0.64)},
    )


def check_lower_bound(cfg: VerifyConfig) -> Check:
    n_top = 18 if cfg.fast else 24
    counts = enumerate_polygons(n_max=n_top).totals()
    col = spectral.lower_bound_column(counts)
    bad = {n: (round(col.get(n, float("nan")), 6), v) for n, v in REF_LOWER.items() if n - 6 <= n_top and round(col[n], 6) != v}
    detail = {"column_mismatches": bad}
    ok = not bad
    if not cfg.fast:
        lb = spectral.unknot_lower_bound({24: REF_EXTENDED[24]}, 30)
        detail["n30"] = lb
        ok = ok and abs(lb - 0.620044) <= 1e-6
    return Check(6, "unknot lower bound", ok, detail)


def _orbit_walk(d: braid.PlatDiagram, steps: int, rng: random.Random, max_crossings: int = 12):
    for _ in range(steps):
        moves = braid.legal_moves(d, include_inverse=True)
        if d.crossings >= max_crossings:
            moves = [m for m in moves if not m.inverse]
        d = braid.apply_move(d, rng.choice(moves))
        yield d


def check_move_invariance(cfg: VerifyConfig) -> Check:
    rng = random.Random(cfg.seed)
    per = 200 if cfg.fast else 1250
    moves = violations = 0
    for name in ORBIT_LINKS:
        d0 = braid.KNOWN[name].diagram()
        lt = braid.classify_plat(d0)
        for d in _orbit_walk(d0, per, rng):
            moves += 1
            if braid.classify_plat(d) != lt or braid.determinant_oracle(d) != lt.determinant:
                violations += 1
    return Check(7, "A/B move invariance", violations == 0 and moves >= (1600 if cfg.fast else 10_000), {"moves": moves, "violations": violations})


def check_unknotting(cfg: VerifyConfig) -> Check:
    rng = random.Random(cfg.seed + 1)
    per = 50 if cfg.fast else 1000
    detail: dict = {}
    ok = True
    for name in ORBIT_LINKS[1:]:
        d0 = braid.KNOWN[name].diagram()
        hits = short = 0
        for _ in range(per):
            d = braid.scramble(d0, 30, rng)
            w0 = braid.unknotting_word(braid.conway_normal_form(d))
            short += len(w0) <= braid.CROSSING_NUMBER[name]
            try:
                braid.find_unknotting_insertion(d, w0)
                hits += 1
            except braid.NotFound:
                pass
        detail[name] = f"{hits}/{per}"
        ok = ok and hits == per == short
    # fixed words that unknot every diagram of the link, on the matching chirality
    pins = {}
    for name, words in PINS.items():
        c = braid.KNOWN[name]
        mirror = braid.conway(*[-e for e in c.entries])
        for w in words:
            w0 = braid.BraidWord.parse(w)
            works = []
            for form in (c, mirror):
                good = 0
                for _ in range(per // 5 or 1):
                    try:
                        braid.find_unknotting_insertion(braid.scramble(form.diagram(), 30, rng), w0)
                        good += 1
                    except braid.NotFound:
                        pass
                works.append(good == (per // 5 or 1))
            pins[f"{name}:{w}"] = "both" if all(works) else ("C" if works[0] else ("mirror" if works[1] else "none"))
            ok = ok and any(works)
    detail["pins"] = pins
    return Check(8, "unknotting insertion", ok, detail)


def check_unknot_roundtrip(cfg: VerifyConfig) -> Check:
    pat = blocks.make_trefoil_pattern()
    trefoil = pat.link_type()
    want = 20 if cfg.fast else 100
    polys = [p for p in generate_polygons(n_max=12) if two_section_indices(p)]
    rng = random.Random(cfg.seed + 2)
    rng.shuffle(polys)
    done = bad = 0
    spans = []
    for p in polys[:want]:
        k = two_section_indices(p)[0]
        q = blocks.insert_pattern_at_2section(p, k, pat)
        good = diagram.classify_polygon(q) == trefoil
        if good:
            u, ins = diagram.unknot_polygon(q)
            good = (
                diagram.classify_polygon(u).is_unknot
                and len(ins) == 1
                and ins[0].block.span <= 17
                and blocks.delete_block(u, ins[0].section, ins[0].block) == q
            )
            spans.append(ins[0].block.span)
        done += 1
        bad += not good
    return Check(9, "unknotting round-trip", done >= want and bad == 0, {"polygons": done, "failures": bad, "max_block_span": max(spans, default=None)})


def check_remove_2sections(cfg: VerifyConfig) -> Check:
    n_max = 10 if cfg.fast else 14
    e = blocks.COMBINE_E
    total = bad = worst = 0
    for p in generate_polygons(n_max=n_max):
        t = count_2sections(p)
        if not t:
            continue
        total += 1
        r = blocks.remove_2sections(p)
        cands = blocks.restore_2sections(r)
        worst = max(worst, len(cands))
        if r.t != t or r.polygon.n != p.n + e * t or count_2sections(r.polygon) or p not in cands or len(cands) > 2**t:
            bad += 1
    return Check(10, "2-section removal arithmetic", total > 0 and bad == 0, {"n_max": n_max, "polygons": total, "failures": bad, "E": e, "max_candidates": worst})


def check_bfacf(cfg: VerifyConfig) -> Check:
    rng = random.Random(cfg.seed + 3)
    pat = blocks.make_trefoil_pattern()
    seeds = [pat.closure()]
    seeds += [p for p in generate_polygons(n_max=8) if p.span >= 2][:3]
    square = next(iter(generate_polygons(n_max=4)))
    seeds.append(blocks.insert_pattern_at_2section(blocks.concatenate(square, square, "plain"), 1, pat))
    want = 1000 if cfg.fast else 10_000
    per_seed = -(-want // len(seeds))
    moves = violations = 0
    for s in seeds:
        lt = diagram.classify_polygon(s)
        q = s
        done = 0
        # moves past the length cap are rejected, so count accepted moves only
        for _ in range(10 * per_seed):
            if done == per_seed:
                break
            q2 = apply_bfacf(q, rng.choice(legal_moves(q)))
            if q2.n > s.n + 24:
                continue
            q = q2
            done += 1
            violations += diagram.classify_polygon(q) != lt
        moves += done
    return Check(11, "BFACF invariance", violations == 0 and moves >= want, {"moves": moves, "violations": violations, "seeds": len(seeds)})


CHECKS: tuple[Callable[[VerifyConfig], Check], ...] = (
    check_counts,
    check_oracle_equivalence,
    check_state_sizes,
    check_growth,
    check_bound,
    check_lower_bound,
    check_move_invariance,
    check_unknotting,
    check_unknot_roundtrip,
    check_remove_2sections,
    check_bfacf,
)


def run_check(f: Callable[[VerifyConfig], Check], cfg: VerifyConfig) -> Check:
    t = time.monotonic()
    c = f(cfg)
    c.seconds = round(time.monotonic() - t, 2)
    return c


def run_all(cfg: VerifyConfig, only: set[int] | None = None) -> list[Check]:
    return [run_check(f, cfg) for i, f in enumerate(CHECKS, 1) if only is None or i in only]
