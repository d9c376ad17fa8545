"""Exhaustive polygon enumeration in a tube, hinge by hinge.

The state between hinges k and k+1 is the set of lanes carrying x-edges plus
the pairing of those lanes by the left part of the polygon.  Given the lanes
entering a hinge and its edge set, the lanes leaving are forced (every vertex
needs degree 0 or 2), so a transition is a choice of hinge edges.  Counting
runs a dynamic program over states; generation runs the same transitions
depth-first and materialises each polygon.
"""

from __future__ import annotations

import dataclasses
import functools
import json
import os
import time
from collections import defaultdict
from collections.abc import Callable, Iterator
from pathlib import Path

from .errors import ResourceLimit
from .lattice import T_STAR, LatticePolygon, TubeDims, polygon_from_parts

Pairing = tuple[tuple[int, int], ...]
SectionFilter = Callable[[int], bool]  # receives the section size


@dataclasses.dataclass(frozen=True)
class HingeState:
    """Lanes crossing a half-integer plane (bit mask) and their left pairing."""

    lanes: int
    pairing: Pairing

    @property
    def size(self) -> int:
        return bin(self.lanes).count("1")


@dataclasses.dataclass(frozen=True)
class Step:
    hinge_mask: int
    right: HingeState | None  # None: the polygon closes in this hinge
    added: int  # entering x-edges + hinge edges


@dataclasses.dataclass
class CountTable:
    """(n, span) -> count.  Exact Python integers."""

    counts: dict[tuple[int, int], int] = dataclasses.field(default_factory=dict)

    def add(self, n: int, span: int, c: int = 1) -> None:
        if c:
            self.counts[(n, span)] = self.counts.get((n, span), 0) + c

    def merge(self, other: "CountTable") -> "CountTable":
        out = CountTable(dict(self.counts))
        for (n, s), c in other.counts.items():
            out.add(n, s, c)
        return out

    def totals(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for (n, _), c in self.counts.items():
            out[n] += c
        return dict(sorted(out.items()))

    def by_span(self) -> dict[tuple[int, int], int]:
        return dict(sorted(self.counts.items()))

    def __getitem__(self, n: int) -> int:
        return self.totals().get(n, 0)

    def to_json(self) -> dict:
        return {"counts": [[n, s, c] for (n, s), c in sorted(self.counts.items())]}

    @classmethod
    def from_json(cls, d: dict) -> "CountTable":
        return cls({(n, s): c for n, s, c in d["counts"]})

    def to_csv(self, by_span: bool = True) -> str:
        lines = ["n,span,count"] if by_span else ["n,count"]
        if by_span:
            lines += [f"{n},{s},{c}" for (n, s), c in sorted(self.counts.items())]
        else:
            lines += [f"{n},{c}" for n, c in self.totals().items()]
        return "\n".join(lines) + "\n"


def no_2sections(size: int) -> bool:
    return size != 2


FILTERS: dict[str, SectionFilter | None] = {"none": None, "no-2-sections": no_2sections}


class _Hinge:
    """Precomputed transition tables for one tube cross-section."""

    def __init__(self, dims: TubeDims):
        self.dims = dims
        self.nv = dims.hinge_size
        self.edges = dims.grid_edges
        self.ne = len(self.edges)
        self.degree = []
        for hm in range(1 << self.ne):
            deg = [0] * self.nv
            for i in range(self.ne):
                if hm >> i & 1:
                    u, v = self.edges[i]
                    deg[u] += 1
                    deg[v] += 1
            self.degree.append(deg)

    @functools.lru_cache(maxsize=None)
    def steps(self, state: HingeState) -> tuple[Step, ...]:
        out = []
        for hm in range(1 << self.ne):
            if not state.lanes and not hm:
                continue
            deg = self.degree[hm]
            right = 0
            ok = True
            for v in range(self.nv):
                d = deg[v] + (state.lanes >> v & 1)
                if d > 2:
                    ok = False
                    break
                if d == 1:
                    right |= 1 << v
            if not ok:
                continue
            nright = bin(right).count("1")
            if nright % 2:
                continue
            res = self._connect(state, hm, right)
            if res is False:
                continue
            added = bin(hm).count("1") + state.size
            out.append(Step(hm, None if res is None else HingeState(right, res), added))
        return tuple(out)

    def _connect(self, state: HingeState, hm: int, right: int):
        """Right pairing, None for a clean closure, False for a premature loop."""
        parent = list(range(self.nv))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        links = [self.edges[i] for i in range(self.ne) if hm >> i & 1] + list(state.pairing)
        occupied = set()
        for u, v in links:
            occupied.update((u, v))
            parent[find(u)] = find(v)
        roots = {find(v) for v in occupied}
        ends: dict[int, list[int]] = defaultdict(list)
        for v in range(self.nv):
            if right >> v & 1:
                ends[find(v)].append(v)
        if not right:
            return None if len(roots) == 1 else False
        if len(ends) != len(roots):
            return False  # some component is a closed loop
        return tuple(sorted(tuple(sorted(vs)) for vs in ends.values()))


@functools.lru_cache(maxsize=None)
def _hinge(dims: TubeDims) -> _Hinge:
    return _Hinge(dims)


EMPTY = HingeState(0, ())


def initial_states(dims: TubeDims, n_max: int, section_filter: SectionFilter | None = None) -> list[Step]:
    """Transitions out of the empty state in a deterministic order (the shard keys)."""
    return [s for s in _hinge(dims).steps(EMPTY) if s.added <= n_max]


@dataclasses.dataclass
class Budget:
    seconds: float | None = None
    max_states: int | None = None

    def __post_init__(self):
        self._t0 = time.monotonic()

    def check(self, nstates: int = 0) -> None:
        if self.seconds is not None and time.monotonic() - self._t0 > self.seconds:
            raise ResourceLimit(f"time budget of {self.seconds}s exceeded")
        if self.max_states is not None and nstates > self.max_states:
            raise ResourceLimit(f"state budget of {self.max_states} exceeded")


def _min_closure(state: HingeState) -> int:
    # every open lane still needs its x-edge and half a hinge edge to close
    return state.size + state.size // 2


def _count_from(
    dims: TubeDims, first: Step, n_max: int, section_filter: SectionFilter | None, budget: Budget | None
) -> CountTable:
    h = _hinge(dims)
    table = CountTable()
    if first.right is None:
        table.add(first.added, 0)
        return table
    if section_filter is not None and not section_filter(first.right.size):
        return table
    layer: dict[HingeState, dict[int, int]] = {first.right: {first.added: 1}}
    span = 1
    while layer:
        nxt: dict[HingeState, dict[int, int]] = defaultdict(lambda: defaultdict(int))
        for state, by_len in layer.items():
            for st in h.steps(state):
                if st.right is not None:
                    if section_filter is not None and not section_filter(st.right.size):
                        continue
                    slack = n_max - st.added - _min_closure(st.right)
                else:
                    slack = n_max - st.added
                for n, c in by_len.items():
                    if n > slack:
                        continue
                    if st.right is None:
                        table.add(n + st.added, span, c)
                    else:
                        nxt[st.right][n + st.added] += c
        if budget is not None:
            budget.check(len(nxt))
        layer = nxt
        span += 1
    return table


@dataclasses.dataclass
class EnumerationConfig:
    dims: TubeDims = T_STAR
    n_max: int = 12
    filter: str = "none"
    shards: int = 1
    shard: int = 0
    budget_seconds: float | None = None
    max_states: int | None = None

    def __post_init__(self):
        if self.n_max < 4:
            raise ValueError("n_max must be at least 4")
        if self.filter not in FILTERS:
            raise ValueError(f"unknown filter {self.filter!r}")
        if not 0 <= self.shard < self.shards:
            raise ValueError("shard index out of range")

    def key(self) -> dict:
        return {"dims": str(self.dims), "n_max": self.n_max, "filter": self.filter, "shards": self.shards, "shard": self.shard}


def shard_starts(dims: TubeDims, n_max: int, shards: int, shard: int) -> list[int]:
    starts = initial_states(dims, n_max)
    return [i for i in range(len(starts)) if i % shards == shard]


def run_enumeration(cfg: EnumerationConfig, checkpoint: str | os.PathLike | None = None) -> CountTable:
    """Count one shard, resuming from (and updating) a JSON checkpoint if given."""
    starts = initial_states(cfg.dims, cfg.n_max)
    mine = shard_starts(cfg.dims, cfg.n_max, cfg.shards, cfg.shard)
    done: set[int] = set()
    table = CountTable()
    path = Path(checkpoint) if checkpoint else None
    if path is not None and path.exists():
        d = json.loads(path.read_text())
        if d.get("config") == cfg.key():
            done = set(d["done"])
            table = CountTable.from_json(d["table"])
    budget = Budget(cfg.budget_seconds, cfg.max_states)
    filt = FILTERS[cfg.filter]
    for i in mine:
        if i in done:
            continue
        table = table.merge(_count_from(cfg.dims, starts[i], cfg.n_max, filt, budget))
        done.add(i)
        if path is not None:
            tmp = path.with_suffix(path.suffix + ".tmp")
            tmp.write_text(json.dumps({"config": cfg.key(), "done": sorted(done), "table": table.to_json()}))
            tmp.replace(path)
    return table


def enumerate_polygons(
    dims: TubeDims = T_STAR,
    n_max: int = 12,
    filter: SectionFilter | str | None = None,
    sink: Callable[[LatticePolygon], None] | None = None,
    budget: Budget | None = None,
) -> CountTable:
    """Count polygons of length <= n_max (up to x-translation), by length and span.

    With a sink, every polygon is also built and passed to it."""
    if n_max < 4:
        raise ValueError("n_max must be at least 4")
    filt = FILTERS[filter] if isinstance(filter, str) else filter
    if sink is not None:
        table = CountTable()
        for p in generate_polygons(dims, n_max, filt, budget):
            sink(p)
            table.add(p.n, p.span)
        return table
    table = CountTable()
    for st in initial_states(dims, n_max):
        table = table.merge(_count_from(dims, st, n_max, filt, budget))
    return table


def count_no_2section(dims: TubeDims = T_STAR, n_max: int = 12) -> CountTable:
    return enumerate_polygons(dims, n_max, no_2sections)


def generate_polygons(
    dims: TubeDims = T_STAR,
    n_max: int = 12,
    section_filter: SectionFilter | str | None = None,
    budget: Budget | None = None,
) -> Iterator[LatticePolygon]:
    """Depth-first generation of every polygon of length <= n_max."""
    if isinstance(section_filter, str):
        section_filter = FILTERS[section_filter]
    h = _hinge(dims)
    pts = dims.points

    def hinge_edges(hm):
        return [(pts[u], pts[v]) for i, (u, v) in enumerate(h.edges) if hm >> i & 1]

    def lanes(mask):
        return [pts[v] for v in range(h.nv) if mask >> v & 1]

    hinges: list[int] = []
    secs: list[int] = []
    count = 0

    def rec(state: HingeState, n: int):
        nonlocal count
        for st in h.steps(state):
            if st.right is None:
                if n + st.added <= n_max:
                    hinges.append(st.hinge_mask)
                    yield polygon_from_parts([hinge_edges(m) for m in hinges], [lanes(m) for m in secs], dims)
                    hinges.pop()
                continue
            if section_filter is not None and not section_filter(st.right.size):
                continue
            if n + st.added + _min_closure(st.right) > n_max:
                continue
            hinges.append(st.hinge_mask)
            secs.append(st.right.lanes)
            count += 1
            if budget is not None and count % 4096 == 0:
                budget.check()
            yield from rec(st.right, n + st.added)
            hinges.pop()
            secs.pop()

    yield from rec(EMPTY, 0)
