"""Tube lattice geometry: polygons, sections, hinges and BFACF moves.

Coordinates are integer triples (x, y, z) with x >= 0, 0 <= y <= m1 and
0 <= z <= m2.  The plane x = k is the k-th hinge; section k (k >= 1) is the
set of x-edges crossing the plane x = k - 1/2.  For the 2x1 tube the six hinge
positions carry the labels

    a=(0,0)  b=(0,1)  c=(1,0)  d=(1,1)  e=(2,0)  f=(2,1)      (y, z)

and every other module refers to hinge positions through this chart.
"""

from __future__ import annotations

import dataclasses
import functools
from collections.abc import Iterable, Iterator, Sequence
from typing import TextIO

from .errors import (
    IllegalMove,
    InvalidPolygon,
    NotClosed,
    NotFourSection,
    OddLength,
    OutOfTube,
    SelfIntersecting,
)

Vertex = tuple[int, int, int]
Point = tuple[int, int]
Edge = tuple[Vertex, Vertex]
HingeEdge = tuple[Point, Point]

DIRECTIONS: dict[str, Vertex] = {
    "+x": (1, 0, 0),
    "-x": (-1, 0, 0),
    "+y": (0, 1, 0),
    "-y": (0, -1, 0),
    "+z": (0, 0, 1),
    "-z": (0, 0, -1),
}
_DIR_NAME = {v: k for k, v in DIRECTIONS.items()}


@dataclasses.dataclass(frozen=True)
class TubeDims:
    """Cross-section of the tube: 0 <= y <= m1, 0 <= z <= m2."""

    m1: int = 2
    m2: int = 1

    def __post_init__(self) -> None:
        if self.m1 < 0 or self.m2 < 0:
            raise ValueError("tube extents must be non-negative")

    @property
    def hinge_size(self) -> int:
        return (self.m1 + 1) * (self.m2 + 1)

    @functools.cached_property
    def points(self) -> tuple[Point, ...]:
        return tuple((y, z) for y in range(self.m1 + 1) for z in range(self.m2 + 1))

    def index(self, pt: Point) -> int:
        y, z = pt
        return y * (self.m2 + 1) + z

    def contains(self, pt: Point) -> bool:
        return 0 <= pt[0] <= self.m1 and 0 <= pt[1] <= self.m2

    @functools.cached_property
    def grid_edges(self) -> tuple[tuple[int, int], ...]:
        """Hinge-plane edges as sorted index pairs (z-edges first, then y-edges)."""
        out = []
        for y in range(self.m1 + 1):
            for z in range(self.m2):
                out.append((self.index((y, z)), self.index((y, z + 1))))
        for y in range(self.m1):
            for z in range(self.m2 + 1):
                out.append((self.index((y, z)), self.index((y + 1, z))))
        return tuple(out)

    def label(self, i: int) -> str:
        return "abcdefghijklmnopqrstuvwxyz"[i]

    def point_of(self, label: str) -> Point:
        return self.points["abcdefghijklmnopqrstuvwxyz".index(label)]

    def label_of(self, pt: Point) -> str:
        return self.label(self.index(pt))

    def __str__(self) -> str:
        return f"{self.m1}x{self.m2}"

    @classmethod
    def parse(cls, text: str) -> "TubeDims":
        m1, m2 = text.lower().split("x")
        return cls(int(m1), int(m2))


T_STAR = TubeDims(2, 1)
LABELS = "abcdef"
POS: dict[str, Point] = {lab: T_STAR.point_of(lab) for lab in LABELS}
LABEL_OF: dict[Point, str] = {pt: lab for lab, pt in POS.items()}


def lanes_label(lanes: Iterable[Point]) -> str:
    """Sorted label string of a set of hinge positions, e.g. 'abdf'."""
    return "".join(sorted(LABEL_OF[p] for p in lanes))


def lanes_of(labels: str) -> frozenset[Point]:
    return frozenset(POS[c] for c in labels)


def _sorted_edge(u, v):
    return (u, v) if u <= v else (v, u)


def canonical_vertices(vertices: Sequence[Vertex]) -> tuple[Vertex, ...]:
    """Translate to min x = 0, start at the smallest vertex, step to its smaller neighbour."""
    x0 = min(v[0] for v in vertices)
    vs = [(v[0] - x0, v[1], v[2]) for v in vertices]
    n = len(vs)
    i = min(range(n), key=vs.__getitem__)
    if vs[(i + 1) % n] > vs[(i - 1) % n]:
        vs.reverse()
        i = n - 1 - i
    return tuple(vs[i:] + vs[:i])


@dataclasses.dataclass(frozen=True)
class LatticePolygon:
    """A closed self-avoiding lattice cycle, stored in canonical form."""

    vertices: tuple[Vertex, ...]
    dims: TubeDims = T_STAR

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    @functools.cached_property
    def span(self) -> int:
        return max(v[0] for v in self.vertices)

    @functools.cached_property
    def vertex_set(self) -> frozenset[Vertex]:
        return frozenset(self.vertices)

    @functools.cached_property
    def edge_set(self) -> frozenset[Edge]:
        vs = self.vertices
        return frozenset(_sorted_edge(vs[i - 1], vs[i]) for i in range(len(vs)))

    @functools.cached_property
    def _sections(self) -> tuple[frozenset[Point], ...]:
        secs: list[set[Point]] = [set() for _ in range(self.span)]
        for u, v in self.edge_set:
            if u[0] != v[0]:
                secs[u[0]].add((u[1], u[2]))
        return tuple(frozenset(s) for s in secs)

    @functools.cached_property
    def _hinges(self) -> tuple[frozenset[HingeEdge], ...]:
        hs: list[set[HingeEdge]] = [set() for _ in range(self.span + 1)]
        for u, v in self.edge_set:
            if u[0] == v[0]:
                hs[u[0]].add(((u[1], u[2]), (v[1], v[2])))
        return tuple(frozenset(h) for h in hs)

    def section(self, k: int) -> frozenset[Point]:
        """Lanes (y, z) of the x-edges between x = k-1 and x = k, for 1 <= k <= span."""
        if not 1 <= k <= self.span:
            raise IndexError(f"section {k} outside 1..{self.span}")
        return self._sections[k - 1]

    def hinge(self, k: int) -> frozenset[HingeEdge]:
        """Edges lying in the plane x = k, as sorted pairs of (y, z) points."""
        if not 0 <= k <= self.span:
            return frozenset()
        return self._hinges[k]

    def translated(self, dx: int) -> tuple[Vertex, ...]:
        return tuple((x + dx, y, z) for x, y, z in self.vertices)

    def to_text(self) -> str:
        return format_polygon(self)

    def __str__(self) -> str:
        return format_polygon(self)


def validate_polygon(vertices: Iterable[Sequence[int]], dims: TubeDims = T_STAR) -> LatticePolygon:
    """Check a cyclic vertex list and return its canonical polygon."""
    vs = [tuple(int(c) for c in v) for v in vertices]
    n = len(vs)
    if n % 2:
        raise OddLength(f"polygon has odd length {n}")
    if n < 4:
        raise InvalidPolygon(f"polygon needs at least 4 vertices, got {n}")
    for v in vs:
        if len(v) != 3:
            raise InvalidPolygon(f"vertex {v} is not a triple")
        if not dims.contains((v[1], v[2])):
            raise OutOfTube(f"vertex {v} outside the {dims} tube")
    for i in range(n):
        u, w = vs[i - 1], vs[i]
        if abs(u[0] - w[0]) + abs(u[1] - w[1]) + abs(u[2] - w[2]) != 1:
            raise NotClosed(f"vertices {u} and {w} are not adjacent")
    if len(set(vs)) != n:
        raise SelfIntersecting("a vertex is visited twice")
    return LatticePolygon(canonical_vertices(vs), dims)


def from_edges(edges: Iterable[Edge], dims: TubeDims = T_STAR) -> LatticePolygon:
    """Assemble a polygon from an unordered edge set; the edges must form one cycle."""
    adj: dict[Vertex, list[Vertex]] = {}
    count = 0
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
        count += 1
    if not adj:
        raise InvalidPolygon("empty edge set")
    for v, nb in adj.items():
        if len(nb) != 2:
            raise SelfIntersecting(f"vertex {v} has degree {len(nb)}")
    start = min(adj)
    cycle = [start]
    prev, cur = start, adj[start][0]
    while cur != start:
        cycle.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
    if len(cycle) != count:
        raise InvalidPolygon("edge set is not a single cycle")
    return validate_polygon(cycle, dims)


def sections(p: LatticePolygon) -> list[frozenset[Point]]:
    return [p.section(k) for k in range(1, p.span + 1)]


def section_sizes(p: LatticePolygon) -> list[int]:
    return [len(s) for s in p._sections]


def count_2sections(p: LatticePolygon) -> int:
    return sum(1 for s in p._sections if len(s) == 2)


def two_section_indices(p: LatticePolygon) -> list[int]:
    return [k for k in range(1, p.span + 1) if len(p.section(k)) == 2]


# ---------------------------------------------------------------- BFACF moves


@dataclasses.dataclass(frozen=True)
class BfacfMove:
    """A local move anchored on an edge of the polygon.

    plus2:  edge (p, q) is replaced by p, p+d, q+d, q.
    minus2: edge (p, q) is the bottom of a U whose legs go to p+d and q+d;
            the three U edges are replaced by the edge (p+d, q+d).
    type0:  the corner p+d, p, q becomes p+d, q+d, q.
    """

    kind: str
    anchor: Edge
    direction: str

    def __post_init__(self) -> None:
        if self.kind not in ("plus2", "minus2", "type0"):
            raise ValueError(f"unknown move kind {self.kind!r}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {self.direction!r}")

    def inverse(self) -> "BfacfMove":
        p, q = self.anchor
        d = DIRECTIONS[self.direction]
        nd = _DIR_NAME[(-d[0], -d[1], -d[2])]
        if self.kind == "plus2":
            return BfacfMove("minus2", (_add(p, d), _add(q, d)), nd)
        if self.kind == "minus2":
            return BfacfMove("plus2", (_add(p, d), _add(q, d)), nd)
        return BfacfMove("type0", (_add(q, d), _add(p, d)), nd)

    def shifted(self, dx: int) -> "BfacfMove":
        p, q = self.anchor
        return BfacfMove(self.kind, ((p[0] + dx, p[1], p[2]), (q[0] + dx, q[1], q[2])), self.direction)


def _add(v: Vertex, d: Vertex) -> Vertex:
    return (v[0] + d[0], v[1] + d[1], v[2] + d[2])


def _in_tube(v: Vertex, dims: TubeDims) -> bool:
    return 0 <= v[1] <= dims.m1 and 0 <= v[2] <= dims.m2


def _perpendicular(p: Vertex, q: Vertex, d: Vertex) -> bool:
    e = (q[0] - p[0], q[1] - p[1], q[2] - p[2])
    return sum(abs(c) for c in e) == 1 and e[0] * d[0] + e[1] * d[1] + e[2] * d[2] == 0


def _apply_raw(vs: list[Vertex], occupied: frozenset[Vertex], m: BfacfMove, dims: TubeDims) -> list[Vertex] | None:
    """Return the new cyclic vertex list, or None when the move is illegal."""
    p, q = m.anchor
    d = DIRECTIONS[m.direction]
    if not _perpendicular(p, q, d):
        return None
    n = len(vs)
    try:
        i = vs.index(p)
    except ValueError:
        return None
    if vs[(i + 1) % n] == q:
        forward = True
    elif vs[i - 1] == q:
        forward = False
    else:
        return None
    if not forward:
        # orient the cycle so that q follows p
        vs = vs[::-1]
        i = n - 1 - i
    vs = vs[i:] + vs[:i]  # vs[0] = p, vs[1] = q
    pd, qd = _add(p, d), _add(q, d)
    if m.kind == "plus2":
        if pd in occupied or qd in occupied or not (_in_tube(pd, dims) and _in_tube(qd, dims)):
            return None
        return [p, pd, qd] + vs[1:]
    if m.kind == "minus2":
        if n <= 4 or vs[-1] != pd or vs[2] != qd:
            return None
        return vs[2:-1] + [pd]
    # type0: corner at p with p + d preceding p (or following q, handled by symmetry)
    if vs[-1] == pd and qd not in occupied and _in_tube(qd, dims):
        return [qd] + vs[1:]
    return None


def apply_bfacf(p: LatticePolygon, m: BfacfMove) -> LatticePolygon:
    """Apply a BFACF move; raises IllegalMove when its local pattern is absent."""
    out = _apply_raw(list(p.vertices), p.vertex_set, m, p.dims)
    if out is None:
        raise IllegalMove(f"{m} is not legal on this polygon")
    return LatticePolygon(canonical_vertices(out), p.dims)


def legal_moves(p: LatticePolygon, kinds: Sequence[str] = ("plus2", "minus2", "type0")) -> list[BfacfMove]:
    """All legal moves, in a deterministic order."""
    out = []
    vs = list(p.vertices)
    occ = p.vertex_set
    n = len(vs)
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        for anchor in ((a, b), (b, a)):
            for name, d in DIRECTIONS.items():
                if not _perpendicular(anchor[0], anchor[1], d):
                    continue
                for kind in kinds:
                    if kind == "plus2" and anchor != (a, b):
                        continue  # plus2 is symmetric in the anchor orientation
                    m = BfacfMove(kind, anchor, name)
                    if _apply_raw(vs, occ, m, p.dims) is not None:
                        out.append(m)
    if "minus2" in kinds:
        # minus2 is symmetric too; keep one orientation
        seen = set()
        uniq = []
        for m in out:
            key = (m.kind, frozenset(m.anchor), m.direction) if m.kind != "type0" else (m.kind, m.anchor, m.direction)
            if key not in seen:
                seen.add(key)
                uniq.append(m)
        out = uniq
    return out


def hidden_2section_moves(p: LatticePolygon, k: int) -> list[BfacfMove]:
    """Type I minus2 moves that turn 4-section k into a 2-section."""
    sec = p.section(k)
    if len(sec) != 4:
        raise NotFourSection(f"section {k} has {len(sec)} edges")
    out = []
    occ_edges = p.edge_set
    for side, other, dname in ((k, k - 1, "-x"), (k - 1, k, "+x")):
        for (s, t) in p.hinge(side):
            if s in sec and t in sec:
                target = ((other,) + s, (other,) + t)
                if _sorted_edge(*target) in occ_edges:
                    continue
                out.append(BfacfMove("minus2", ((side,) + s, (side,) + t), dname))
    return out


def is_hidden_2section(p: LatticePolygon, k: int) -> bool:
    """True iff one Type I minus2 move reduces 4-section k to a 2-section."""
    return bool(hidden_2section_moves(p, k))


# -------------------------------------------------------------- text format


def format_polygon(p: LatticePolygon | Sequence[Vertex]) -> str:
    vs = p.vertices if isinstance(p, LatticePolygon) else p
    return ";".join(f"{x},{y},{z}" for x, y, z in vs)


def parse_polygon(line: str, dims: TubeDims = T_STAR) -> LatticePolygon:
    toks = [t for t in line.strip().split(";") if t.strip()]
    verts = []
    for t in toks:
        parts = t.split(",")
        if len(parts) != 3:
            raise InvalidPolygon(f"bad vertex token {t!r}")
        verts.append(tuple(int(c) for c in parts))
    return validate_polygon(verts, dims)


def read_polygons(fh: TextIO, dims: TubeDims = T_STAR) -> Iterator[LatticePolygon]:
    for line in fh:
        line = line.strip()
        if line and not line.startswith("#"):
            yield parse_polygon(line, dims)


def write_polygons(fh: TextIO, polys: Iterable[LatticePolygon]) -> int:
    count = 0
    for p in polys:
        fh.write(format_polygon(p) + "\n")
        count += 1
    return count


# ------------------------------------------------------- structural helpers


def polygon_from_parts(
    hinges: Sequence[Iterable[HingeEdge]],
    secs: Sequence[Iterable[Point]],
    dims: TubeDims = T_STAR,
) -> LatticePolygon:
    """Build a polygon from hinge edge sets (x = 0..s) and section lanes (k = 1..s)."""
    edges = []
    for x, h in enumerate(hinges):
        for s, t in h:
            edges.append(_sorted_edge((x,) + tuple(s), (x,) + tuple(t)))
    for k, sec in enumerate(secs, start=1):
        for pt in sec:
            edges.append(((k - 1,) + tuple(pt), (k,) + tuple(pt)))
    return from_edges(edges, dims)


def decompose(p: LatticePolygon) -> tuple[list[frozenset[HingeEdge]], list[frozenset[Point]]]:
    """Inverse of polygon_from_parts."""
    return [p.hinge(k) for k in range(p.span + 1)], sections(p)
