"""Lattice surgery in the 2x1 tube: braid blocks, connected-sum patterns,
concatenation and splitting.

An s-block is the part of a polygon strictly between the planes x = -1/2 and
x = s - 1/2: s hinges, the s - 1 sections between them, and half-edges on the
two boundary planes.  Inserting a block at section k cuts the k-th x-edges at
their midpoints, shifts the right part by s and splices the block in.

The elementary braid blocks and the connectors to them are found by a
breadth-first search over 4-strand hinges (``search_braid_blocks``) and ship
as data in ``tubeknots/data/blocks.json``; they are re-verified on load.
"""

from __future__ import annotations

import functools
import collections
import dataclasses
import itertools
import json
import os
from collections import deque
from collections.abc import Iterable, Sequence
from importlib import resources
from pathlib import Path

from . import braid
from .braid import BraidWord, Generator
from .diagram import HingePaths as HingePathsT
from .diagram import _Sweep, hinge_paths
from .errors import InvalidPolygon, InvariantViolation, MissingData, PatternMismatch, TypeMismatch
from .lattice import (
    LABEL_OF,
    T_STAR,
    HingeEdge,
    LatticePolygon,
    Point,
    decompose,
    lanes_label,
    lanes_of,
    polygon_from_parts,
)

FourSectionType = frozenset  # of 4 hinge points
FOUR_SECTION_TYPES: tuple[str, ...] = tuple("".join(c) for c in itertools.combinations("abcdef", 4))


# ---------------------------------------------------------------- blocks


@dataclasses.dataclass(frozen=True)
class SBlock:
    """hinges[i] is the edge set of the block's i-th hinge; sections[i] the
    lanes between hinge i and i+1; left/right are the boundary half-edges."""

    hinges: tuple[frozenset, ...]
    sections: tuple[frozenset, ...]
    left: frozenset
    right: frozenset

    def __post_init__(self):
        if len(self.sections) != max(len(self.hinges) - 1, 0):
            raise ValueError("an s-block has s hinges and s-1 inner sections")
        if not self.hinges and self.left != self.right:
            raise ValueError("a span-0 block has equal boundaries")
        if len(self.left) % 2 or len(self.right) % 2:
            raise ValueError("boundary half-edge sets must be even")

    @property
    def span(self) -> int:
        return len(self.hinges)

    @property
    def edge_count(self) -> int:
        """Edges added by an insertion: s new x-edges per boundary lane plus hinge edges."""
        return sum(len(h) for h in self.hinges) + sum(len(s) for s in self.sections) + (
            len(self.right) if self.hinges else 0
        )

    def then(self, other: "SBlock") -> "SBlock":
        if self.right != other.left:
            raise TypeMismatch(f"{lanes_label(self.right)} does not meet {lanes_label(other.left)}")
        if not self.hinges:
            return other
        if not other.hinges:
            return self
        return SBlock(
            self.hinges + other.hinges,
            self.sections + (self.right,) + other.sections,
            self.left,
            other.right,
        )

    @classmethod
    def identity(cls, lanes: Iterable[Point]) -> "SBlock":
        s = frozenset(lanes)
        return cls((), (), s, s)

    def to_json(self) -> dict:
        return {
            "left": lanes_label(self.left),
            "right": lanes_label(self.right),
            "sections": [lanes_label(s) for s in self.sections],
            "hinges": [sorted(LABEL_OF[a] + LABEL_OF[b] for a, b in h) for h in self.hinges],
        }

    @classmethod
    def from_json(cls, d: dict) -> "SBlock":
        hs = tuple(frozenset(_hinge_edge(e) for e in h) for h in d["hinges"])
        return cls(hs, tuple(lanes_of(s) for s in d["sections"]), lanes_of(d["left"]), lanes_of(d["right"]))

    def strands(self) -> list[list[tuple]]:
        """Vertex paths between boundary half-edges, hinge i at x = i."""
        last = self.span - 1
        adj: dict[tuple, list[tuple]] = {}

        def link(a, b):
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)

        for i, h in enumerate(self.hinges):
            for a, b in h:
                link((i,) + a, (i,) + b)
        for i, sec in enumerate(self.sections):
            for w in sec:
                link((i,) + w, (i + 1,) + w)
        ends = [(0,) + w for w in sorted(self.left)] + [(last,) + w for w in sorted(self.right)]
        for v in ends:
            adj.setdefault(v, [])
        out, seen = [], set()
        for v in ends:
            if v in seen:
                continue
            path, prev = [v], None
            while True:
                nxt = [w for w in adj[path[-1]] if w != prev and w not in path]
                if not nxt:
                    break
                prev = path[-1]
                path.append(nxt[0])
            seen.update((path[0], path[-1]))
            out.append(path)
        return out

    def to_text(self) -> str:
        """One strand per line in polygon text format; a `+x`/`-x` suffix marks
        a half-edge leaving through the right/left boundary plane."""
        last = self.span - 1
        lines = []
        for path in self.strands():
            toks = [f"{x},{y},{z}" for x, y, z in path]
            for i in (0, -1):
                v = path[i]
                side = "-x" if v[0] == 0 and v[1:] in self.left else "+x"
                if side == "-x" and i == -1 and len(path) > 1 and v[0] == last and v[1:] in self.right:
                    side = "+x"
                toks[i] += side
            lines.append(";".join(toks))
        return "\n".join(lines)


def _hinge_edge(lab: str) -> HingeEdge:
    a, b = sorted(lanes_of(lab[0]) | lanes_of(lab[1]))
    return (a, b)


def block_word(b: SBlock) -> BraidWord:
    """The braid a 4-strand block realizes, read with the polygon sweep."""
    if len(b.left) != 4:
        raise TypeMismatch("braid blocks have 4-section boundaries")
    sw = _Sweep()
    for i, pt in enumerate(sorted(b.left)):
        sw.pos[i] = pt
    lanes = [b.left, *b.sections, b.right]
    for i, h in enumerate(b.hinges):
        paths = hinge_paths(h, lanes[i], lanes[i + 1])
        if paths.births or paths.deaths:
            raise TypeMismatch("block is not a 4-braid")
        for path in sorted(paths.throughs):
            sw.through(path)
    return BraidWord(tuple(sw.letters))


# ---------------------------------------------------- 4-strand transitions


@functools.lru_cache(maxsize=None)
def braid_hinges(left: frozenset) -> tuple[tuple[frozenset, frozenset, BraidWord], ...]:
    """Every hinge edge set taking four strands at `left` straight through.

    Returns (edges, right lanes, word) triples."""
    dims = T_STAR
    pts = dims.points
    grid = [(pts[u], pts[v]) for u, v in dims.grid_edges]
    out = []
    for mask in range(1 << len(grid)):
        edges = frozenset(grid[i] for i in range(len(grid)) if mask >> i & 1)
        deg = {p: 0 for p in pts}
        for a, b in edges:
            deg[a] += 1
            deg[b] += 1
        right = set()
        ok = True
        for p in pts:
            d = deg[p] + (p in left)
            if d > 2:
                ok = False
                break
            if d == 1:
                right.add(p)
        if not ok or len(right) != 4:
            continue
        right = frozenset(right)
        try:
            paths = hinge_paths(edges, left, right)
        except InvariantViolation:
            continue
        used = sum(len(p) - 1 for p in paths.throughs)
        if paths.births or paths.deaths or len(paths.throughs) != 4 or used != len(edges):
            continue  # U-turns or a closed loop
        blk = SBlock((edges,), (), left, right)
        out.append((edges, right, block_word(blk)))
    out.sort(key=lambda t: (len(t[0]), sorted(t[0]), lanes_label(t[1])))
    return tuple(out)


def _search(start: frozenset, goals, max_span: int, accept) -> dict:
    """BFS over (lanes, braid) from `start`; accept(lanes, key) -> label or None.

    Returns label -> shortest (hinges, sections) found, shortest edge count
    among equal spans."""
    found: dict = {}
    Key = tuple
    frontier: dict[Key, tuple] = {(start, braid.artin_action(BraidWord())): ((), ())}
    seen = set(frontier)
    for depth in range(1, max_span + 1):
        nxt: dict[Key, tuple] = {}
        for (lanes, _), (hs, ss) in sorted(frontier.items(), key=lambda kv: _cost(kv[1])):
            for edges, right, _w in braid_hinges(lanes):
                nhs = hs + (edges,)
                nss = ss + ((lanes,) if hs else ())
                blk = SBlock(nhs, nss, start, right)
                key = (right, braid.artin_action(block_word(blk)))
                label = accept(right, key[1])
                if label is not None and label not in found:
                    found[label] = blk
                if key not in seen:
                    seen.add(key)
                    nxt[key] = (nhs, nss)
        frontier = nxt
        if all(g in found for g in goals):
            break
    return found


def _cost(hs_ss) -> int:
    hs, ss = hs_ss
    return sum(len(h) for h in hs) + sum(len(s) for s in ss)


GENERATOR_NAMES = ("s1", "s1^-1", "s2", "s2^-1")


def _gen_word(name: str) -> BraidWord:
    return BraidWord.parse(name)


def search_braid_blocks(max_span: int = 3) -> tuple[str, dict[str, SBlock]]:
    """A boundary type T0 with span <= max_span blocks for all four generators.

    Among qualifying types the one with the fewest total block edges wins."""
    targets = {braid.artin_action(_gen_word(n)): n for n in GENERATOR_NAMES}
    best = None
    for t in FOUR_SECTION_TYPES:
        t0 = lanes_of(t)
        found = _search(
            t0, GENERATOR_NAMES, max_span, lambda lanes, key: targets.get(key) if lanes == t0 else None
        )
        if all(n in found for n in GENERATOR_NAMES):
            cost = sum(found[n].edge_count for n in GENERATOR_NAMES)
            if best is None or cost < best[0]:
                best = (cost, t, found)
    if best is None:
        raise MissingData(f"no common boundary admits all generator blocks within span {max_span}")
    return best[1], {n: best[2][n] for n in GENERATOR_NAMES}


def search_connectors(t0: str, max_span: int = 4) -> tuple[dict[str, SBlock], dict[str, SBlock]]:
    """Trivial-braid blocks t -> T0 and T0 -> t for every 4-section type t."""
    trivial = braid.artin_action(BraidWord())
    goal = lanes_of(t0)
    into, out = {}, {}
    for t in FOUR_SECTION_TYPES:
        if t == t0:
            into[t] = out[t] = SBlock.identity(goal)
            continue
        a = _search(lanes_of(t), ["x"], max_span, lambda lanes, key: "x" if lanes == goal and key == trivial else None)
        want = lanes_of(t)
        b = _search(goal, ["x"], max_span, lambda lanes, key: "x" if lanes == want and key == trivial else None)
        if "x" not in a or "x" not in b:
            raise MissingData(f"no connector for type {t} within span {max_span}")
        into[t], out[t] = a["x"], b["x"]
    return into, out


# ------------------------------------------------------------------ tails
#
# A tail is the part of a polygon at x >= 0 (local coordinates), entered from
# the left by pinned stub lanes.  BFACF moves that only touch x >= 0 change a
# tail without touching anything to its left, so a search over tails yields
# isotopies of every polygon that ends that way.

Edge3 = tuple[tuple[int, int, int], tuple[int, int, int]]
_DIRS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))


def _se(a, b):
    return (a, b) if a <= b else (b, a)


def _add(a, d):
    return (a[0] + d[0], a[1] + d[1], a[2] + d[2])


@dataclasses.dataclass(frozen=True)
class Tail:
    stubs: frozenset  # hinge points at x = 0 joined to x = -1
    edges: frozenset  # edges with both ends at x >= 0

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def span(self) -> int:
        return max((max(a[0], b[0]) for a, b in self.edges), default=0)

    def section_size(self, j: int) -> int:
        return sum(1 for a, b in self.edges if a[0] != b[0] and min(a[0], b[0]) == j - 1)

    def hinge(self, x: int) -> frozenset:
        return frozenset((a[1:], b[1:]) for a, b in self.edges if a[0] == b[0] == x)

    def occupied(self) -> set:
        occ = {(0,) + p for p in self.stubs}
        for a, b in self.edges:
            occ.add(a)
            occ.add(b)
        return occ

    def plus2(self):
        occ = self.occupied()
        for p, q in sorted(self.edges):
            e = (q[0] - p[0], q[1] - p[1], q[2] - p[2])
            for d in _DIRS:
                if d[0] * e[0] or d[1] * e[1] or d[2] * e[2]:
                    continue
                pd, qd = _add(p, d), _add(q, d)
                if pd[0] < 0 or not T_STAR.contains(pd[1:]) or not T_STAR.contains(qd[1:]):
                    continue
                if pd in occ or qd in occ:
                    continue
                ne = set(self.edges)
                ne.discard((p, q))
                ne |= {_se(p, pd), _se(pd, qd), _se(qd, q)}
                yield Tail(self.stubs, frozenset(ne))

    def to_json(self) -> dict:
        return {
            "stubs": lanes_label(self.stubs),
            "edges": sorted(f"{a[0]}{LABEL_OF[a[1:]]}-{b[0]}{LABEL_OF[b[1:]]}" for a, b in self.edges),
        }

    @classmethod
    def from_json(cls, d: dict) -> "Tail":
        def pt(tok):
            return (int(tok[:-1]),) + _pt(tok[-1])

        edges = frozenset(_se(*map(pt, e.split("-"))) for e in d["edges"])
        return cls(lanes_of(d["stubs"]), edges)


def tail_of(p: LatticePolygon, x0: int) -> Tail:
    """The part of p at x >= x0, shifted to local coordinates."""
    edges = frozenset(
        _se((a[0] - x0,) + a[1:], (b[0] - x0,) + b[1:]) for a, b in p.edge_set if min(a[0], b[0]) >= x0
    )
    return Tail(p.section(x0) if x0 >= 1 else frozenset(), edges)


def with_tail(p: LatticePolygon, x0: int, t: Tail) -> LatticePolygon:
    """Replace the part of p at x >= x0 by the tail t."""
    from .lattice import from_edges

    keep = [e for e in p.edge_set if min(e[0][0], e[1][0]) < x0]
    new = [((a[0] + x0,) + a[1:], (b[0] + x0,) + b[1:]) for a, b in t.edges]
    return from_edges(keep + new, p.dims)


def _tail_dfs_iter(start: Tail, moves: int, goal, max_span: int, min_span: int = 0):
    """Tails reached by exactly `moves` +2 moves satisfying goal, in a fixed DFS order.

    Moves that push further right are tried first; each tail is visited once."""
    seen: set = set()

    def rec(t: Tail, left: int):
        if left == 0:
            if goal(t):
                yield t
            return
        cands = [c for c in t.plus2() if c.edges not in seen]
        cands.sort(key=lambda c: (-c.span, sorted(c.edges)))
        for c in cands:
            sp = c.span
            if sp > max_span or sp + left - 1 < min_span or c.edges in seen:
                continue
            seen.add(c.edges)
            yield from rec(c, left - 1)

    return rec(start, moves)


def _tail_dfs(start: Tail, moves: int, goal, max_span: int, min_span: int = 0) -> Tail | None:
    return next(_tail_dfs_iter(start, moves, goal, max_span, min_span), None)


def reflect(p: LatticePolygon, flip_z: bool = False) -> LatticePolygon:
    """Mirror x -> span - x (and z -> m2 - z when flip_z)."""
    from .lattice import validate_polygon

    m2 = p.dims.m2
    vs = [(p.span - x, y, (m2 - z) if flip_z else z) for x, y, z in p.vertices]
    return validate_polygon(vs, p.dims)


# ----------------------------------------------------------- stretching

C_STRETCH = 20  # ten +2 moves
STRETCH_SPAN = 4


def _pt(c: str) -> Point:
    return next(iter(lanes_of(c)))


RIGHT_END = frozenset({_se(_pt("a"), _pt("b")), _se(_pt("d"), _pt("f"))})


def _stretch_goal(t: Tail) -> bool:
    if t.span != STRETCH_SPAN:
        return False
    if any(t.section_size(j) == 2 for j in range(1, STRETCH_SPAN + 1)):
        return False
    last = t.hinge(STRETCH_SPAN)
    if last != RIGHT_END:
        return False
    return sum(1 for a, b in t.edges for v in (a, b) if v[0] == STRETCH_SPAN) == 8


@functools.lru_cache(maxsize=None)
def stretch_tail(stubs: frozenset, hinge: frozenset) -> Tail:
    """The tail that replaces a last hinge (entered by `stubs`) in the right stretch."""
    start = Tail(stubs, frozenset(_se((0,) + a, (0,) + b) for a, b in hinge))
    key = _tail_key(start)
    table = _data("stretch")
    if key in table:
        return Tail.from_json(table[key])
    t = _tail_dfs(start, C_STRETCH // 2, _stretch_goal, STRETCH_SPAN, STRETCH_SPAN)
    if t is None:
        raise MissingData(f"no stretch for end {key}")
    return t


def _tail_key(t: Tail) -> str:
    return json.dumps(t.to_json(), sort_keys=True)


@functools.lru_cache(maxsize=None)
def _data(name: str) -> dict:
    """A shipped table, or one from the directory in $TUBEKNOTS_DATA when set."""
    root = os.environ.get("TUBEKNOTS_DATA")
    try:
        if root:
            txt = Path(root, f"{name}.json").read_text()
        else:
            txt = resources.files("tubeknots.data").joinpath(f"{name}.json").read_text()
    except FileNotFoundError:
        return {}
    return json.loads(txt)


# ------------------------------------------------------------- splitting


def hinge_paths_between(a: Point, b: Point, avoid: frozenset = frozenset()) -> list[list[Point]]:
    """All simple hinge paths from a to b avoiding `avoid`, shortest first, then lexicographic."""
    out = []

    def rec(path):
        v = path[-1]
        if v == b:
            out.append(list(path))
            return
        y, z = v
        for w in sorted([(y - 1, z), (y + 1, z), (y, z - 1), (y, z + 1)]):
            if T_STAR.contains(w) and w not in path and w not in avoid:
                path.append(w)
                rec(path)
                path.pop()

    rec([a])
    out.sort(key=lambda p: (len(p), p))
    return out


def closure_start(
    stubs: frozenset, hinge: frozenset, u: Point, v: Point, path: Sequence[Point], reach: int = 1
) -> Tail:
    """Hinge 0 kept, the cut lanes extended to x = reach and joined there along `path`."""
    edges = {_se((0,) + a, (0,) + b) for a, b in hinge}
    for w in (u, v):
        edges |= {_se((x,) + w, (x + 1,) + w) for x in range(reach)}
    edges |= {_se((reach,) + p, (reach,) + q) for p, q in zip(path, path[1:])}
    return Tail(stubs, frozenset(edges))


CLOSURE_MAX_SPAN = 4
CLOSURE_MAX_REACH = 3


def _closure_goal(t: Tail) -> bool:
    return all(t.section_size(j) != 2 for j in range(1, t.span + 1))


def closures(stubs: frozenset, hinge: frozenset, u: Point, v: Point, added: int):
    """Closing tails adding exactly `added` edges beyond the kept hinge, with no 2-sections.

    Each starts from the cut lanes extended by 1..3 units and joined by a
    simple hinge path, followed by +2 moves; deterministic order."""
    for reach in range(1, CLOSURE_MAX_REACH + 1):
        for path in hinge_paths_between(u, v):
            base = 2 * reach + len(path) - 1
            if added < base or (added - base) % 2:
                continue
            start = closure_start(stubs, hinge, u, v, path, reach)
            yield from _tail_dfs_iter(start, (added - base) // 2, _closure_goal, CLOSURE_MAX_SPAN)


def find_closure(stubs: frozenset, hinge: frozenset, u: Point, v: Point, added: int) -> Tail | None:
    return next(closures(stubs, hinge, u, v, added), None)


def arc_closures(stubs: frozenset, hinge: frozenset, added: int):
    """Single arcs joining two stubs with |hinge| + added edges and no 2-sections.

    Only for two stubs: the arc is short enough to be unknotted, so it may
    replace the boundary hinge outright."""
    if len(stubs) != 2:
        return
    s1, s2 = sorted(stubs)
    total = len(hinge) + added
    start, goal = (0,) + s1, (0,) + s2
    path = [start]
    used = {start}
    cross: dict[int, int] = {}

    def rec():
        v = path[-1]
        left = total - (len(path) - 1)
        dist = abs(v[0] - goal[0]) + abs(v[1] - goal[1]) + abs(v[2] - goal[2])
        if dist > left or (left - dist) % 2:
            return
        if left == 0:
            if all(c != 2 for c in cross.values()):
                yield Tail(stubs, frozenset(_se(a, b) for a, b in zip(path, path[1:])))
            return
        for d in _DIRS:
            w = _add(v, d)
            if w[0] < 0 or w[0] > CLOSURE_MAX_SPAN or not T_STAR.contains(w[1:]):
                continue
            if w in used or (w == goal and left != 1):
                continue
            j = max(v[0], w[0]) if v[0] != w[0] else None
            if j is not None:
                cross[j] = cross.get(j, 0) + 1
            path.append(w)
            used.add(w)
            yield from rec()
            path.pop()
            used.discard(w)
            if j is not None:
                cross[j] -= 1
                if not cross[j]:
                    del cross[j]

    yield from rec()


def find_arc_closure(stubs: frozenset, hinge: frozenset, added: int) -> Tail | None:
    return next(arc_closures(stubs, hinge, added), None)


SPLIT_D = 16


def split_added(u: Point, v: Point, side: str) -> int:
    """Edges a closure adds besides the kept hinge.

    The cut edges count half to each piece, so each piece gains D + 1 on
    average; the parity of the taxicab distance between u and v fixes the
    parity of each piece, and for even distance the left takes one more."""
    d = abs(u[0] - v[0]) + abs(u[1] - v[1])
    if d % 2:
        return SPLIT_D + 1
    return SPLIT_D + 2 if side == "left" else SPLIT_D


def split_closure_candidates(stubs: frozenset, hinge: frozenset, u: Point, v: Point, side: str):
    added = split_added(u, v, side)
    yield from closures(stubs, hinge, u, v, added)
    yield from arc_closures(stubs, hinge, added)


def closure_configs() -> list[tuple[frozenset, frozenset, Point, Point]]:
    """Every (stubs, boundary hinge, u, v) at a cut 2-section.

    The hinge is the last one kept; u and v are the lanes of the cut
    2-section leaving it.  The hinge edges with the stubs and u, v form
    open paths only (no closed loop)."""
    pts = T_STAR.points
    grid = [(pts[i], pts[j]) for i, j in T_STAR.grid_edges]
    out = []
    for mask in range(1 << len(grid)):
        h = frozenset(grid[i] for i in range(len(grid)) if mask >> i & 1)
        deg = {q: 0 for q in pts}
        adj: dict[Point, list[Point]] = {q: [] for q in pts}
        for x, y in h:
            deg[x] += 1
            deg[y] += 1
            adj[x].append(y)
            adj[y].append(x)
        if max(deg.values()) > 2:
            continue
        for u, v in itertools.combinations(pts, 2):
            if deg[u] > 1 or deg[v] > 1:
                continue
            stubs = frozenset(q for q in pts if deg[q] + (q in (u, v)) == 1)
            if any(deg[q] + (q in (u, v)) > 2 for q in pts):
                continue
            used = sum(1 for q in pts if deg[q] or q in (u, v))
            if len(h) != used - (len(stubs) + 2) // 2:
                continue  # a closed loop in the hinge
            prev, cur = None, u
            while True:
                nxt = [w for w in adj[cur] if w != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
            if (cur == v) != (not stubs):
                continue
            out.append((stubs, h, u, v))
    return out


def _config_key(side: str, stubs, hinge, u, v) -> str:
    return json.dumps(
        [side, lanes_label(stubs), sorted(LABEL_OF[x] + LABEL_OF[y] for x, y in hinge), LABEL_OF[u] + LABEL_OF[v]]
    )


def build_closure_table() -> dict[str, dict]:
    """The closure for every cut configuration, no two sharing a tail.

    Configurations take the first candidate not already used, so a piece and
    its cut position determine the boundary it came from."""
    table: dict[str, dict] = {}
    for side in ("left", "right"):
        used: set[str] = set()
        for stubs, h, u, v in closure_configs():
            if side == "left" and len(stubs) == 2:
                continue  # the first 2-section never follows another one
            u, v = sorted((u, v))
            for t in split_closure_candidates(stubs, h, u, v, side):
                key = _tail_key(t)
                if key not in used:
                    used.add(key)
                    table[_config_key(side, stubs, h, u, v)] = t.to_json()
                    break
            else:
                raise InvariantViolation(f"no free closure for {_config_key(side, stubs, h, u, v)}")
    return table


@functools.lru_cache(maxsize=None)
def _closure_table() -> dict[str, dict]:
    return _data("closures") or build_closure_table()


def split_closure(stubs: frozenset, hinge: frozenset, u: Point, v: Point, side: str) -> Tail:
    u, v = sorted((u, v))
    key = _config_key(side, stubs, hinge, u, v)
    if key not in _closure_table():
        raise MissingData(f"no closure recorded for {key}")
    return Tail.from_json(_closure_table()[key])


@functools.lru_cache(maxsize=None)
def _closure_inverse(side: str) -> dict[str, tuple]:
    """tail -> the config closing to it."""
    inv: dict[str, tuple] = {}
    for stubs, h, u, v in closure_configs():
        if side == "left" and len(stubs) == 2:
            continue
        inv[_tail_key(split_closure(stubs, h, u, v, side))] = (stubs, h, u, v)
    return inv


def _first_2section(p: LatticePolygon) -> int | None:
    for j in range(1, p.span + 1):
        if len(p.section(j)) == 2:
            return j
    return None


def _close_left(p: LatticePolygon, j: int, side: str) -> LatticePolygon:
    x0 = j - 1
    u, v = sorted(p.section(j))
    stubs = p.section(x0) if x0 >= 1 else frozenset()
    return with_tail(p, x0, split_closure(stubs, p.hinge(x0), u, v, side))


def split_first_2section(p: LatticePolygon) -> tuple[LatticePolygon, LatticePolygon]:
    """Cut the leftmost 2-section and close both sides.

    The pieces together have n + 2D edges; the left one has no 2-sections,
    the right one has one fewer than p.  Hinges and sections away from the
    cut are kept."""
    from .errors import No2Section

    j = _first_2section(p)
    if j is None:
        raise No2Section("polygon has no 2-section")
    p1 = _close_left(p, j, "left")
    q = reflect(p)
    p2 = reflect(_close_left(q, p.span - j + 1, "right"))
    return p1, p2


def _opened(p: LatticePolygon, side: str) -> list[tuple[int, frozenset, frozenset, Point, Point]]:
    """Every way p ends in a closure tail: (x0, kept edges, hinge, u, v)."""
    inv = _closure_inverse(side)
    out = []
    for x0 in range(p.span + 1):
        t = tail_of(p, x0)
        if t.stubs != (p.section(x0) if x0 >= 1 else frozenset()):
            continue
        hit = inv.get(_tail_key(t))
        if hit is not None:
            stubs, h, u, v = hit
            keep = frozenset(e for e in p.edge_set if min(e[0][0], e[1][0]) < x0)
            out.append((x0, keep, h, u, v))
    return out


def unsplit(p1: LatticePolygon, p2: LatticePolygon) -> list[LatticePolygon]:
    """Every polygon that split_first_2section maps to (p1, p2)."""
    from .lattice import from_edges

    out = []
    lefts = _opened(p1, "left")
    rights = _opened(reflect(p2), "right")
    for x0, keep, h, u, v in lefts:
        for y0, keep2, h2, u2, v2 in rights:
            if {u, v} != {u2, v2}:
                continue
            edges = set(keep)
            edges |= {_se((x0,) + a, (x0,) + b) for a, b in h}
            edges |= {_se((x0,) + w, (x0 + 1,) + w) for w in (u, v)}
            # in the mirrored p2, plane y0 becomes hinge x0 + 1 of the result
            edges |= {
                _se((x0 + 1 + y0 - a[0],) + a[1:], (x0 + 1 + y0 - b[0],) + b[1:])
                for e in keep2 | {_se((y0,) + a, (y0,) + b) for a, b in h2}
                for a, b in [e]
            }
            try:
                cand = from_edges(edges)
            except InvalidPolygon:
                continue
            if split_first_2section(cand) == (p1, p2) and cand not in out:
                out.append(cand)
    return out


# ------------------------------------------------------ braid block assets


@functools.lru_cache(maxsize=None)
def _braid_assets() -> tuple[str, dict[str, SBlock], dict[str, SBlock], dict[str, SBlock]]:
    d = _data("blocks")
    if not d:
        t0, gens = search_braid_blocks()
        into, out = search_connectors(t0)
    else:
        t0 = d["boundary"]
        gens = {k: SBlock.from_json(v) for k, v in d["generators"].items()}
        into = {k: SBlock.from_json(v) for k, v in d["into"].items()}
        out = {k: SBlock.from_json(v) for k, v in d["out_of"].items()}
    # every asset is re-checked against the braid it claims to realize
    for name, b in gens.items():
        if b.span != 3 or b.left != lanes_of(t0) or b.right != lanes_of(t0):
            raise InvariantViolation(f"generator block {name} has the wrong shape")
        if not braid.braid_equal(block_word(b), _gen_word(name)):
            raise InvariantViolation(f"generator block {name} does not realize {name}")
    for t in FOUR_SECTION_TYPES:
        for b, lo, hi in ((into[t], t, t0), (out[t], t0, t)):
            if b.left != lanes_of(lo) or b.right != lanes_of(hi) or b.span > 4:
                raise InvariantViolation(f"connector for {t} has the wrong shape")
            if b.hinges and not braid.braid_equal(block_word(b), BraidWord()):
                raise InvariantViolation(f"connector for {t} is not the trivial braid")
    return t0, gens, into, out


def braid_assets_json() -> dict:
    t0, gens, into, out = _braid_assets()
    return {
        "boundary": t0,
        "generators": {k: v.to_json() for k, v in gens.items()},
        "into": {k: v.to_json() for k, v in into.items()},
        "out_of": {k: v.to_json() for k, v in out.items()},
    }


def standard_boundary() -> frozenset:
    return lanes_of(_braid_assets()[0])


def elementary_braid_block(g: Generator) -> SBlock:
    if g.index not in (1, 2):
        raise ValueError("elementary blocks exist for s1 and s2; rewrite s3 first")
    name = f"s{g.index}" + ("" if g.sign > 0 else "^-1")
    return _braid_assets()[1][name]


def _type_name(t) -> str:
    return t if isinstance(t, str) else lanes_label(t)


def connector_block(t, inbound: bool = True) -> SBlock:
    """Trivial-braid block from type t to the standard boundary (or back when not inbound)."""
    name = _type_name(t)
    if name not in FOUR_SECTION_TYPES:
        raise TypeMismatch(f"{name} is not a 4-section type")
    return _braid_assets()[2 if inbound else 3][name]


def braid_block(w: BraidWord, t) -> SBlock:
    """connector(t -> T0) . blocks of w . connector(T0 -> t); span <= 3c + 8."""
    from .errors import PreconditionViolated

    if not w.is_3braid:
        raise PreconditionViolated("braid blocks are built for words in s1 and s2")
    b = connector_block(t, True)
    for g in w:
        b = b.then(elementary_braid_block(g))
    return b.then(connector_block(t, False))


def insert_block(p: LatticePolygon, k: int, b: SBlock) -> LatticePolygon:
    """Splice b into the midplane of section k; the right part moves by span(b)."""
    if not 1 <= k <= p.span:
        raise TypeMismatch(f"section {k} does not exist")
    sec = p.section(k)
    if sec != b.left or sec != b.right:
        raise TypeMismatch(f"section {k} is {lanes_label(sec)}, block joins {lanes_label(b.left)}/{lanes_label(b.right)}")
    if not b.hinges:
        return p
    hs, ss = decompose(p)
    new_h = hs[:k] + list(b.hinges) + hs[k:]
    new_s = ss[:k] + list(b.sections) + [b.right] + ss[k:]
    return polygon_from_parts(new_h, new_s, p.dims)


def delete_block(p: LatticePolygon, k: int, b: SBlock) -> LatticePolygon:
    """Inverse of insert_block(., k, b)."""
    if not b.hinges:
        return p
    hs, ss = decompose(p)
    s = b.span
    if tuple(hs[k:k + s]) != b.hinges or tuple(ss[k:k + s - 1]) != b.sections:
        raise TypeMismatch(f"no copy of the block at section {k}")
    return polygon_from_parts(hs[:k] + hs[k + s:], ss[:k] + ss[k + s:], p.dims)


# ---------------------------------------------------------------- patterns


@functools.lru_cache(maxsize=None)
def hinge_transitions(left: frozenset) -> tuple[tuple[frozenset, frozenset, HingePathsT], ...]:
    """Every hinge edge set compatible with lanes `left` entering a hinge (no closed loops)."""
    pts = T_STAR.points
    grid = [(pts[u], pts[v]) for u, v in T_STAR.grid_edges]
    out = []
    for mask in range(1 << len(grid)):
        edges = frozenset(grid[i] for i in range(len(grid)) if mask >> i & 1)
        deg = {p: 0 for p in pts}
        for a, b in edges:
            deg[a] += 1
            deg[b] += 1
        if any(deg[p] + (p in left) > 2 for p in pts):
            continue
        right = frozenset(p for p in pts if deg[p] + (p in left) == 1)
        if len(right) % 2 or (not left and not right):
            continue
        try:
            paths = hinge_paths(edges, left, right)
        except InvariantViolation:
            continue
        used = sum(len(q) - 1 for q in paths.births + paths.throughs + paths.deaths)
        if used != len(edges):
            continue
        out.append((edges, right, paths))
    out.sort(key=lambda t: (len(t[0]), sorted(t[0]), lanes_label(t[1])))
    return tuple(out)


PAIRS: tuple[str, ...] = tuple("".join(c) for c in itertools.combinations("abcdef", 2))


@dataclasses.dataclass(frozen=True)
class ConnectedSumPattern:
    block: SBlock

    def __post_init__(self):
        if len(self.block.left) != 2 or len(self.block.right) != 2:
            raise TypeMismatch("a connected-sum pattern has 2-section ends")

    @property
    def span(self) -> int:
        return self.block.span

    def closure(self) -> LatticePolygon:
        """Close both ends with shortest hinge paths (lexicographic tie-break)."""
        b = self.block
        la, lb = sorted(b.left)
        ra, rb = sorted(b.right)
        lp = hinge_paths_between(la, lb)[0]
        rp = hinge_paths_between(ra, rb)[0]
        hs = [frozenset(_se(p, q) for p, q in zip(lp, lp[1:]))] + list(b.hinges)
        hs.append(frozenset(_se(p, q) for p, q in zip(rp, rp[1:])))
        ss = [b.left] + list(b.sections) + [b.right]
        return polygon_from_parts(hs, ss)

    def link_type(self):
        from .diagram import classify_polygon

        return classify_polygon(self.closure())

    def is_link_pattern(self) -> bool:
        return not self.link_type().is_unknot


def _pair_block_search(start: frozenset, max_span: int) -> dict:
    """(span, lanes, hinge edges) -> first 2-strand block reaching it."""
    out = {}
    layer = {(start, 0): ((), ())}
    for span in range(1, max_span + 1):
        nxt = {}
        for (lanes, he), (hs, ss) in sorted(layer.items(), key=lambda kv: (lanes_label(kv[0][0]), kv[0][1])):
            for edges, right, paths in hinge_transitions(lanes):
                if paths.births or paths.deaths:
                    continue
                key = (right, he + len(edges))
                if key in nxt:
                    continue
                nhs, nss = hs + (edges,), ss + ((lanes,) if hs else ())
                nxt[key] = (nhs, nss)
                out[(span,) + key] = SBlock(nhs, nss, start, right)
        layer = nxt
    return out


PAD_SPAN = 2


@functools.lru_cache(maxsize=None)
def _pads() -> tuple[str, int, dict[str, SBlock], dict[str, SBlock]]:
    """A standard pair Q0 and pads P -> Q0, Q0 -> P of span PAD_SPAN each.

    A single pad's hinge-edge parity depends on P, so only the total of a pad
    pair is held fixed; that keeps the length added by a pattern independent
    of where it is inserted."""
    best = None
    for q0 in PAIRS:
        q = lanes_of(q0)
        fwd = {p: _pair_block_search(lanes_of(p), PAD_SPAN) for p in PAIRS}
        back = _pair_block_search(q, PAD_SPAN)
        for total in range(0, 25):
            choice_in, choice_out = {}, {}
            for p in PAIRS:
                for h_in in range(total + 1):
                    bi = fwd[p].get((PAD_SPAN, q, h_in))
                    bo = back.get((PAD_SPAN, lanes_of(p), total - h_in))
                    if bi is not None and bo is not None:
                        choice_in[p], choice_out[p] = bi, bo
                        break
            if len(choice_in) == len(PAIRS):
                if best is None or total < best[1]:
                    best = (q0, total, choice_in, choice_out)
                break
    if best is None:
        raise MissingData("no uniform 2-strand pads")
    return best


def pad_blocks(pair) -> tuple[SBlock, SBlock]:
    q0, _, pin, pout = _pads()
    name = _type_name(pair)
    return pin[name], pout[name]


def standard_pair() -> frozenset:
    return lanes_of(_pads()[0])


def insert_pattern_at_2section(p: LatticePolygon, k: int, pat: ConnectedSumPattern) -> LatticePolygon:
    """Connected sum with the pattern's closure at the 2-section k; adds a length that depends only on pat."""
    from .errors import Not2Section

    if not 1 <= k <= p.span or len(p.section(k)) != 2:
        raise Not2Section(f"section {k} is not a 2-section")
    pin, pout = pad_blocks(p.section(k))
    q0 = standard_pair()
    if pat.block.left != q0 or pat.block.right != q0:
        raise TypeMismatch("patterns are built with the standard pair at both ends")
    return insert_block(p, k, pin.then(pat.block).then(pout))


def pattern_increase(pat: ConnectedSumPattern) -> int:
    pin, pout = pad_blocks(PAIRS[0])
    return pin.then(pat.block).then(pout).edge_count


@functools.lru_cache(maxsize=None)
def make_trefoil_pattern() -> ConnectedSumPattern:
    """Cup, three s1 blocks, cap; the smallest such pattern that closes to a trefoil."""
    d = _data("patterns")
    if "trefoil" in d:
        pat = ConnectedSumPattern(SBlock.from_json(d["trefoil"]))
    else:
        pat = search_pattern(BraidWord.parse("s1 s1 s1"), lambda lt: lt.kind == "prime" and lt.factors[0].alpha == 3)
    lt = pat.link_type()
    if not (lt.kind == "prime" and lt.factors[0].alpha == 3):
        raise InvariantViolation("trefoil pattern does not close to a trefoil")
    return pat


def search_pattern(w: BraidWord, accept) -> ConnectedSumPattern:
    q0 = standard_pair()
    t0 = standard_boundary()
    core = SBlock.identity(t0)
    for g in w:
        core = core.then(elementary_braid_block(g))
    best = None
    for e1, r1, paths1 in hinge_transitions(q0):
        if len(r1) != 4 or len(paths1.births) != 1:
            continue
        left = SBlock((e1,), (), q0, r1).then(connector_block(r1, True))
        for name in FOUR_SECTION_TYPES:
            r2 = lanes_of(name)
            for e2, out2, paths2 in hinge_transitions(r2):
                if out2 != q0 or len(paths2.deaths) != 1:
                    continue
                right = connector_block(r2, False).then(SBlock((e2,), (), r2, q0))
                blk = left.then(core).then(right)
                cost = (blk.edge_count, blk.span)
                if best is not None and cost >= best[0]:
                    continue
                pat = ConnectedSumPattern(blk)
                try:
                    lt = pat.link_type()
                except InvalidPolygon:
                    continue  # the cup and cap leave a closed loop
                if accept(lt):
                    best = (cost, pat)
    if best is None:
        raise MissingData(f"no pattern realizes {w}")
    return best[1]


# ---------------------------------------------------------- concatenation


def _end_configs() -> list[tuple[frozenset, frozenset]]:
    """Every possible last hinge: (lanes entering it, its edges)."""
    pts = T_STAR.points
    grid = [(pts[u], pts[v]) for u, v in T_STAR.grid_edges]
    out = []
    for mask in range(1, 1 << len(grid)):
        h = frozenset(grid[i] for i in range(len(grid)) if mask >> i & 1)
        deg = {p: 0 for p in pts}
        for a, b in h:
            deg[a] += 1
            deg[b] += 1
        if any(d > 2 for d in deg.values()):
            continue
        lanes = frozenset(p for p in pts if deg[p] == 1)
        used = sum(1 for d in deg.values() if d)
        try:
            t = Tail(lanes, frozenset(_se((0,) + a, (0,) + b) for a, b in h))
            if lanes:
                if len(lanes) not in (4, 6) or len(h) != used - len(lanes) // 2:
                    continue  # contains a closed loop
            else:
                from .lattice import from_edges

                from_edges(list(t.edges))  # a single cycle: a span-0 polygon
        except InvalidPolygon:
            continue
        out.append((lanes, h))
    return out


def _tail_to_polygon_hinge(t: Tail) -> frozenset:
    return t.hinge(0)


def stretch_right(p: LatticePolygon) -> LatticePolygon:
    """Ten +2 moves at the right end: span +4, last hinge {ab, df}, no new 2-sections."""
    s = p.span
    t = stretch_tail(p.section(s) if s >= 1 else frozenset(), p.hinge(s))
    return with_tail(p, s, t)


def stretch_left(p: LatticePolygon) -> LatticePolygon:
    """Mirror image of stretch_right (x and z reflected): first hinge {ab, ce}."""
    return reflect(stretch_right(reflect(p, flip_z=True)), flip_z=True)


_AB = _se(_pt("a"), _pt("b"))
_DF = _se(_pt("d"), _pt("f"))


def _flip(e, span: int, flip_z: bool):
    m2 = T_STAR.m2

    def f(v):
        return (span - v[0], v[1], (m2 - v[2]) if flip_z else v[2])

    return _se(f(e[0]), f(e[1]))


def _stretched_edges(p: LatticePolygon, right: bool) -> list:
    """Edges of stretch_right(p), or of stretch_left(p) when right is False."""
    s = p.span
    edges = p.edge_set if right else [_flip(e, s, True) for e in p.edge_set]
    if right:
        stubs, h = (p.section(s) if s else frozenset()), p.hinge(s)
    else:
        m2 = T_STAR.m2
        stubs = frozenset((y, m2 - z) for y, z in (p.section(1) if s else ()))
        h = frozenset(_se((a[0], m2 - a[1]), (b[0], m2 - b[1])) for a, b in p.hinge(0))
    t = stretch_tail(stubs, h)
    out = [e for e in edges if min(e[0][0], e[1][0]) < s]
    out += [((a[0] + s,) + a[1:], (b[0] + s,) + b[1:]) for a, b in t.edges]
    if not right:
        out = [_flip(e, s + STRETCH_SPAN, True) for e in out]
    return out


def concatenate(p1: LatticePolygon, p2: LatticePolygon, mode: str = "no2section") -> LatticePolygon:
    """Join two polygons into one whose knot type is the connected sum.

    no2section: length n1 + n2 + 2C + 2 and span s1 + s2 + 9, with no
    2-sections if neither input has any.  plain: length n1 + n2 + 6."""
    from .errors import Has2Sections
    from .lattice import count_2sections, from_edges

    if mode == "plain":
        return _concatenate_plain(p1, p2)
    if mode != "no2section":
        raise ValueError(f"unknown mode {mode!r}")
    if count_2sections(p1) or count_2sections(p2):
        raise Has2Sections("no2section concatenation needs 2-section-free inputs")
    # stretch both ends, open ab on each side and bridge it, then bump df
    # across the new section with one +2 move
    j = p1.span + STRETCH_SPAN
    lo = set(_stretched_edges(p1, True))
    hi = {((a[0] + j + 1,) + a[1:], (b[0] + j + 1,) + b[1:]) for a, b in _stretched_edges(p2, False)}
    a_, b_ = _AB
    d_, f_ = _DF
    lo -= {_se((j,) + a_, (j,) + b_), _se((j,) + d_, (j,) + f_)}
    hi.discard(_se((j + 1,) + a_, (j + 1,) + b_))
    bridge = {_se((j,) + w, (j + 1,) + w) for w in (a_, b_, d_, f_)}
    bridge.add(_se((j + 1,) + d_, (j + 1,) + f_))
    return from_edges(lo | hi | bridge)


PLAIN_ADDED = 6


def _strand_routes(a: Point, c: Point, gap: int, budget: int):
    """Hinge paths (one per gap hinge) from a to c using exactly `budget` hinge edges."""
    if gap == 1:
        for p in hinge_paths_between(a, c):
            if len(p) - 1 == budget:
                yield [p]
        return
    for m in T_STAR.points:
        for p in hinge_paths_between(a, m):
            for q in hinge_paths_between(m, c):
                if len(p) + len(q) - 2 == budget:
                    yield [p, q]


@functools.lru_cache(maxsize=None)
def plain_bridge(e1: HingeEdge, e2: HingeEdge):
    """(gap, target pairing, routes) joining e1's ends to e2's ends with 8 edges.

    Two strands cross `gap` empty hinges; with the two removed hinge edges the
    polygon grows by exactly PLAIN_ADDED."""
    for gap in (1, 2):
        budget = PLAIN_ADDED + 2 - 2 * (gap + 1)
        a, b = e1
        for c, d in (e2, e2[::-1]):
            for ba in range(budget + 1):
                for ra in _strand_routes(a, c, gap, ba):
                    for rb in _strand_routes(b, d, gap, budget - ba):
                        if all(not set(x) & set(y) for x, y in zip(ra, rb)):
                            return gap, (c, d), ra, rb
    raise InvariantViolation(f"no plain bridge for {e1} {e2}")


def _concatenate_plain(p1: LatticePolygon, p2: LatticePolygon) -> LatticePolygon:
    """Remove an edge from p1's last and p2's first hinge and join the four
    ends by two strands through one or two empty hinges: exactly 6 new edges."""
    from .lattice import from_edges

    s1 = p1.span
    e1 = sorted(p1.hinge(s1))[0]
    e2 = sorted(p2.hinge(0))[0]
    gap, _, ra, rb = plain_bridge(e1, e2)
    off = s1 + gap + 1
    edges = [e for e in p1.edge_set if e != _se((s1,) + e1[0], (s1,) + e1[1])]
    drop = _se((off,) + e2[0], (off,) + e2[1])
    edges += [e for e in (_se((a[0] + off,) + a[1:], (b[0] + off,) + b[1:]) for a, b in p2.edge_set) if e != drop]
    for route in (ra, rb):
        x = s1
        for path in route:
            edges.append(_se((x,) + path[0], (x + 1,) + path[0]))
            x += 1
            edges += [_se((x,) + u, (x,) + v) for u, v in zip(path, path[1:])]
        edges.append(_se((x,) + route[-1][-1], (x + 1,) + route[-1][-1]))
    return from_edges(edges)


@functools.lru_cache(maxsize=None)
def _stretch_inverse() -> dict[str, tuple[frozenset, frozenset]]:
    inv = {}
    for stubs, h in _end_configs():
        key = _tail_key(stretch_tail(stubs, h))
        if key in inv:
            raise InvariantViolation("stretch table is not injective")
        inv[key] = (stubs, h)
    return inv


def unstretch_right(q: LatticePolygon) -> LatticePolygon:
    x0 = q.span - STRETCH_SPAN
    if x0 < 0:
        raise PatternMismatch("too short to be stretched")
    hit = _stretch_inverse().get(_tail_key(tail_of(q, x0)))
    if hit is None:
        raise PatternMismatch("right end is not a stretch tail")
    stubs, h = hit
    return with_tail(q, x0, Tail(stubs, frozenset(_se((0,) + a, (0,) + b) for a, b in h)))


def unstretch_left(q: LatticePolygon) -> LatticePolygon:
    return reflect(unstretch_right(reflect(q, flip_z=True)), flip_z=True)


JOIN_ADDED = 2 * C_STRETCH + 2


def unconcatenate(q: LatticePolygon, n1: int, verify: bool = True) -> tuple[LatticePolygon, LatticePolygon]:
    """Inverse of no2section concatenate, given the length of the first polygon."""
    from .lattice import from_edges

    # the stretched first part keeps all but two of its n1 + C edges left of the join
    below = collections.Counter(max(a[0], b[0]) for a, b in q.edge_set)
    acc, js = 0, []
    for j in range(q.span + 1):
        acc += below[j]
        if acc == n1 + C_STRETCH - 2:
            js.append(j)
    for j in js:
        if j >= q.span or q.hinge(j) or q.section(j + 1) != lanes_of("abdf") or _DF not in q.hinge(j + 1):
            continue
        left = [e for e in q.edge_set if max(e[0][0], e[1][0]) <= j]
        left += [_se((j,) + _AB[0], (j,) + _AB[1]), _se((j,) + _DF[0], (j,) + _DF[1])]
        right = [e for e in q.edge_set if min(e[0][0], e[1][0]) > j]
        right.remove(_se((j + 1,) + _DF[0], (j + 1,) + _DF[1]))
        right.append(_se((j + 1,) + _AB[0], (j + 1,) + _AB[1]))
        right = [((a[0] - j - 1,) + a[1:], (b[0] - j - 1,) + b[1:]) for a, b in right]
        try:
            p1 = unstretch_right(from_edges(left))
            p2 = unstretch_left(from_edges(right))
        except (InvalidPolygon, PatternMismatch):
            continue
        if p1.n == n1 and (not verify or concatenate(p1, p2) == q):
            return p1, p2
    raise PatternMismatch(f"not a concatenation with a first part of length {n1}")


# ---------------------------------------------------- removing 2-sections

COMBINE_E = 2 * C_STRETCH + 2 * SPLIT_D + 2


@dataclasses.dataclass(frozen=True)
class Removal:
    polygon: LatticePolygon  # 2-section free, length n + E t
    lengths: tuple[int, ...]  # piece lengths, left to right

    @property
    def t(self) -> int:
        return len(self.lengths) - 1


def split_all(p: LatticePolygon) -> list[LatticePolygon]:
    """Split at the first 2-section until none remain: t + 1 pieces."""
    pieces = []
    while _first_2section(p) is not None:
        a, p = split_first_2section(p)
        pieces.append(a)
    pieces.append(p)
    return pieces


def remove_2sections(p: LatticePolygon) -> Removal:
    """Split all 2-sections, then rejoin the pieces left to right."""
    pieces = split_all(p)
    q = pieces[0]
    for piece in pieces[1:]:
        q = concatenate(q, piece)
    return Removal(q, tuple(pc.n for pc in pieces))


def restore_2sections(r: Removal) -> list[LatticePolygon]:
    """Every polygon whose removal gives r (at most 2^t of them)."""
    pieces = []
    q = r.polygon
    for i in range(r.t, 0, -1):
        head = sum(r.lengths[:i]) + (i - 1) * JOIN_ADDED
        q, last = unconcatenate(q, head, verify=False)
        pieces.append(last)
    pieces.append(q)
    pieces.reverse()
    cands = [pieces[-1]]
    for piece in reversed(pieces[:-1]):
        cands = [c for r2 in cands for c in unsplit(piece, r2)]
    return cands


# ------------------------------------------------------ U/V interchange

_UV_LANES = lanes_of("df")


def uv_kind(p: LatticePolygon, k: int) -> str | None:
    """'V' if hinges k, k+1 are crossed straight by lanes d, f (all of e, c
    empty there), 'U' if the f strand instead dips through e; else None."""
    if k < 1 or k + 2 > p.span:
        return None
    if not (p.section(k) == p.section(k + 2) == _UV_LANES):
        return None
    occupied = {v[1:] for v in p.vertex_set if v[0] in (k, k + 1)}
    d, e, f = _pt("d"), _pt("e"), _pt("f")
    if p.section(k + 1) == _UV_LANES and not p.hinge(k) and not p.hinge(k + 1):
        return "V" if occupied == {d, f} else None
    ef = frozenset({_se(e, f)})
    if p.section(k + 1) == lanes_of("de") and p.hinge(k) == ef and p.hinge(k + 1) == ef:
        return "U" if occupied == {d, e, f} else None
    return None


def uv_sites(p: LatticePolygon) -> list[tuple[int, str]]:
    return [(k, c) for k in range(1, p.span - 1) if (c := uv_kind(p, k)) is not None]


def interchange_UV(p: LatticePolygon, k: int) -> LatticePolygon:
    """Swap V (straight, shorter) and U (one bump, two edges longer) at hinges k, k+1."""
    from .lattice import BfacfMove, apply_bfacf

    kind = uv_kind(p, k)
    e, f = _pt("e"), _pt("f")
    if kind == "V":
        return apply_bfacf(p, BfacfMove("plus2", ((k,) + f, (k + 1,) + f), "-z"))
    if kind == "U":
        return apply_bfacf(p, BfacfMove("minus2", ((k,) + e, (k + 1,) + e), "+z"))
    raise PatternMismatch(f"no U or V pattern at hinge {k}")
