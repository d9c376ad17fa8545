"""From tube polygons to 4-plat diagrams and link types.

The plat diagram of a block is read off by a sweep in +x.  Lattice points of
a hinge project to u = y + z/2, which orders the six lanes a < b < c < d < e
< f; the larger z passes in front.  Within a hinge the strands move one at a
time along their hinge paths (births of new pairs first, then strands passing
through, then deaths), and every unit step of a mover crosses the stationary
strand whose u lies strictly between the step's endpoints.

A polygon is classified by squashing 6-section boxes, pulling back U-turns
that would put six strands in one hinge (hidden 2-sections), cutting at every
2-section and closing each piece in the neighbouring hinge.  Each piece is a
4-plat; the polygon is their connected sum.
"""

from __future__ import annotations

import dataclasses
from collections import deque
from collections.abc import Sequence

from . import braid
from .braid import BraidWord, Generator, LinkType, PlatDiagram
from .errors import InvariantViolation, NotFound, PreconditionViolated
from .lattice import (
    BfacfMove,
    LatticePolygon,
    Point,
    apply_bfacf,
    decompose,
    polygon_from_parts,
)


def u_of(pt: Point) -> float:
    return pt[0] + pt[1] / 2


# ------------------------------------------------------------------ sweep


@dataclasses.dataclass
class HingePaths:
    births: list[list[Point]]  # R-R paths, walked from first to last point
    throughs: list[list[Point]]  # L-R paths, arrival to departure
    deaths: list[list[Point]]  # L-L paths


def hinge_paths(hinge: frozenset, left: frozenset, right: frozenset) -> HingePaths:
    adj: dict[Point, list[Point]] = {}
    for s, t in hinge:
        adj.setdefault(s, []).append(t)
        adj.setdefault(t, []).append(s)
    tokens = [("L", v) for v in sorted(left)] + [("R", v) for v in sorted(right)]
    tset = set(tokens)
    seen: set[tuple[str, Point]] = set()
    out = HingePaths([], [], [])
    for tag, v in tokens:
        if (tag, v) in seen:
            continue
        seen.add((tag, v))
        other = "R" if tag == "L" else "L"
        path = [v]
        if (other, v) in tset:
            end = (other, v)  # straight through, no hinge edges
        else:
            prev, cur = None, v
            while True:
                nxt = [w for w in adj.get(cur, []) if w != prev]
                if not nxt:
                    raise InvariantViolation(f"dangling hinge path at {cur}")
                prev, cur = cur, nxt[0]
                path.append(cur)
                hit = [t for t in (("L", cur), ("R", cur)) if t in tset]
                if hit:
                    end = hit[0]
                    break
        seen.add(end)
        kinds = tag + end[0]
        if kinds == "LR":
            out.throughs.append(path)
        elif kinds == "RL":
            out.throughs.append(path[::-1])
        elif kinds == "LL":
            out.deaths.append(path)
        else:
            out.births.append(path)
    return out


@dataclasses.dataclass
class SweepResult:
    diagram: PlatDiagram | None  # None when at most two strands ever coexist
    positions: dict[int, int]  # section index -> word length at its midplane (4-strand sections)


class _Sweep:
    def __init__(self):
        self.pos: dict[int, Point] = {}  # strand id -> current lattice point
        self.next_id = 0
        self.letters: list[Generator] = []
        self.left: int | None = None
        self.right: int | None = None
        self.max_strands = 0

    def _others_between(self, mover: int, lo: float, hi: float):
        return [s for s, p in self.pos.items() if s != mover and lo < u_of(p) < hi]

    def walk(self, sid: int, path: Sequence[Point]) -> None:
        for a, b in zip(path, path[1:]):
            ua, ub = u_of(a), u_of(b)
            lo, hi = min(ua, ub), max(ua, ub)
            for st in self._others_between(sid, lo, hi):
                self._cross(sid, a, b, st)
            self.pos[sid] = b

    def _cross(self, mover: int, a: Point, b: Point, st: int) -> None:
        if len(self.pos) < 4:
            return  # twists of a lone cup or cap
        if len(self.pos) > 4:
            raise PreconditionViolated("more than four strands in one hinge")
        sp = self.pos[st]
        us = u_of(sp)
        rank = 1 + sum(1 for s, p in self.pos.items() if s not in (mover, st) and u_of(p) < us)
        up = u_of(b) > u_of(a)
        mover_front = a[1] > sp[1]
        sign = 1 if (up == mover_front) else -1
        self.letters.append(Generator(rank, sign))

    def birth(self, path: Sequence[Point]) -> None:
        p = path[0]
        if len(self.pos) == 2:
            below = sum(1 for q in self.pos.values() if u_of(q) < u_of(p))
            self.left = 1 if below == 1 else 2
        a, b = self.next_id, self.next_id + 1
        self.next_id += 2
        self.pos[a] = p
        self.pos[b] = p
        self.max_strands = max(self.max_strands, len(self.pos))
        if len(self.pos) > 4:
            raise PreconditionViolated("more than four strands in one hinge")
        self.walk(b, path)

    def through(self, path: Sequence[Point]) -> None:
        sid = self._at(path[0])
        self.walk(sid, path)

    def death(self, path: Sequence[Point]) -> None:
        a = self._at(path[0])
        b = self._at(path[-1])
        self.walk(a, path[:-1])
        # final step onto the partner
        last = path[-1]
        prev = path[-2] if len(path) > 1 else path[0]
        ua, ub = u_of(prev), u_of(last)
        for st in self._others_between(a, min(ua, ub), max(ua, ub)):
            if st != b:
                self._cross(a, prev, last, st)
        if len(self.pos) == 4:
            rank = 1 + sum(1 for s, q in self.pos.items() if s not in (a, b) and u_of(q) < u_of(last))
            self.right = 1 if rank == 2 else 2
        del self.pos[a]
        del self.pos[b]

    def _at(self, pt: Point) -> int:
        for s, q in self.pos.items():
            if q == pt:
                return s
        raise InvariantViolation(f"no strand at {pt}")


def sweep(p: LatticePolygon) -> SweepResult:
    """Read the plat diagram of a polygon whose hinges never hold more than four strands."""
    sw = _Sweep()
    positions: dict[int, int] = {}
    for h in range(p.span + 1):
        left = p.section(h) if h >= 1 else frozenset()
        right = p.section(h + 1) if h < p.span else frozenset()
        paths = hinge_paths(p.hinge(h), left, right)
        for path in sorted(paths.births):
            sw.birth(path)
        for path in sorted(paths.throughs):
            sw.through(path)
        for path in sorted(paths.deaths):
            sw.death(path)
        if h < p.span and len(right) == 4 and sw.left is not None and sw.right is None:
            positions[h + 1] = len(sw.letters)
    if sw.max_strands < 4:
        return SweepResult(None, {})
    if sw.left is None or sw.right is None:
        raise InvariantViolation("sweep finished without both closures")
    return SweepResult(PlatDiagram(sw.left, BraidWord(tuple(sw.letters)), sw.right), positions)


def shifted_braid_word(block: LatticePolygon) -> PlatDiagram:
    r = sweep(block)
    if r.diagram is None:
        # at most two strands: closure of the empty word
        return PlatDiagram(1, BraidWord(), 2)
    return r.diagram


# ----------------------------------------------------- 6-section collapse


@dataclasses.dataclass(frozen=True)
class Collapse:
    """Sections k..k+w-1 (a 6-section box) were removed; hinges k-1 and k+w-1 merged."""

    k: int
    w: int


def _collapse_once(p: LatticePolygon) -> tuple[LatticePolygon, Collapse] | None:
    hs, ss = decompose(p)
    sizes = [len(s) for s in ss]
    for i, sz in enumerate(sizes):
        if sz == 6:
            j = i
            while j < len(sizes) and sizes[j] == 6:
                j += 1
            k, w = i + 1, j - i  # sections k..k+w-1 (1-based)
            merged = set(hs[k - 1]) | set(hs[k + w - 1])
            if len(merged) != len(hs[k - 1]) + len(hs[k + w - 1]):
                raise InvariantViolation("collapse would double an edge")
            new_h = list(hs[: k - 1]) + [frozenset(merged)] + list(hs[k + w:])
            new_s = list(ss[: k - 1]) + list(ss[k - 1 + w:])
            return polygon_from_parts(new_h, new_s, p.dims), Collapse(k, w)
    return None


def collapse_6sections(p: LatticePolygon) -> tuple[LatticePolygon, list[Collapse]]:
    records = []
    while True:
        r = _collapse_once(p)
        if r is None:
            return p, records
        p, rec = r
        records.append(rec)


def uncollapse_section(j: int, records: Sequence[Collapse]) -> int:
    """Map a section index of the collapsed polygon back to the original."""
    for rec in reversed(records):
        if j >= rec.k:
            j += rec.w
    return j


# -------------------------------------------------- hidden 2-sections


def _uturn_move(p: LatticePolygon) -> BfacfMove | None:
    """A -x Type I -2 move for the first hinge whose 4-4 transit holds a U-turn."""
    for h in range(1, p.span):
        left, right = p.section(h), p.section(h + 1)
        if len(left) == 4 and len(right) == 4:
            paths = hinge_paths(p.hinge(h), left, right)
            if paths.deaths:
                s, t = sorted(paths.deaths)[0][0], sorted(paths.deaths)[0][-1]
                return BfacfMove("minus2", ((h,) + s, (h,) + t), "-x")
    return None


@dataclasses.dataclass
class Reduction:
    polygon: LatticePolygon
    collapses: list[Collapse]
    moves: list[tuple[int, BfacfMove]]  # (collapse count at the time, move)

    def original_section(self, j: int) -> int:
        # moves never shift x, so only collapses need undoing; a collapse
        # recorded after a move applies to later coordinates
        return uncollapse_section(j, self.collapses)


def reduce_polygon(p: LatticePolygon) -> Reduction:
    """Collapse 6-sections and pull back U-turns until neither is present."""
    collapses: list[Collapse] = []
    moves: list[tuple[int, BfacfMove]] = []
    while True:
        p, recs = collapse_6sections(p)
        collapses.extend(recs)
        m = _uturn_move(p)
        if m is None:
            return Reduction(p, collapses, moves)
        p = apply_bfacf(p, m)
        moves.append((len(collapses), m))


# ------------------------------------------------------------ splitting


def _bfs_path(a: Point, b: Point, dims) -> list[Point]:
    """A shortest hinge path from a to b, ties broken lexicographically."""
    prev = {a: None}
    q = deque([a])
    while q:
        v = q.popleft()
        if v == b:
            break
        y, z = v
        for w in sorted([(y - 1, z), (y + 1, z), (y, z - 1), (y, z + 1)]):
            if dims.contains(w) and w not in prev:
                prev[w] = v
                q.append(w)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


@dataclasses.dataclass
class Piece:
    polygon: LatticePolygon
    first_hinge: int  # first original (reduced) hinge kept in the piece
    last_hinge: int
    left_cut: int | None  # reduced-polygon section index of the left 2-section
    right_cut: int | None
    diagram: PlatDiagram | None = None
    link: LinkType | None = None
    positions: dict[int, int] = dataclasses.field(default_factory=dict)  # reduced section -> word position


def split_pieces(p: LatticePolygon) -> list[Piece]:
    """Cut a reduced polygon at every 2-section; close each piece next to its cuts."""
    hs, ss = decompose(p)
    cuts = [k for k in range(1, p.span + 1) if len(ss[k - 1]) == 2]
    bounds = [None] + cuts + [None]
    pieces = []
    for lc, rc in zip(bounds, bounds[1:]):
        h0 = lc if lc is not None else 0
        h1 = rc - 1 if rc is not None else p.span
        new_h: list[frozenset] = []
        new_s: list[frozenset] = []
        if lc is not None:
            a, b = sorted(ss[lc - 1])
            path = _bfs_path(a, b, p.dims)
            new_h.append(frozenset(zip(path, path[1:])))
            new_s.append(ss[lc - 1])
        for h in range(h0, h1 + 1):
            new_h.append(hs[h])
            if h < h1:
                new_s.append(ss[h])
        if rc is not None:
            new_s.append(ss[rc - 1])
            a, b = sorted(ss[rc - 1])
            path = _bfs_path(a, b, p.dims)
            new_h.append(frozenset(zip(path, path[1:])))
        poly = polygon_from_parts(new_h, new_s, p.dims)
        # prepend offset: piece hinge index i corresponds to reduced hinge i + shift
        pieces.append(Piece(poly, h0, h1, lc, rc))
    return pieces


def _piece_shift(pc: Piece) -> int:
    return pc.first_hinge - (1 if pc.left_cut is not None else 0)


def split_at_2sections(p: LatticePolygon) -> list[LatticePolygon]:
    red = reduce_polygon(p)
    return [pc.polygon for pc in split_pieces(red.polygon)]


def maximal_suitable_blocks(p: LatticePolygon) -> list[LatticePolygon]:
    """Closed pieces that contain at least one 4-section."""
    out = []
    for q in split_at_2sections(p):
        if any(len(q.section(k)) == 4 for k in range(1, q.span + 1)):
            out.append(q)
    return out


# -------------------------------------------------------- classification


@dataclasses.dataclass
class FactorDecomposition:
    original: LatticePolygon
    reduction: Reduction
    pieces: list[Piece]
    link: LinkType

    @property
    def f_L(self) -> int:
        return self.link.f_L

    @property
    def nontrivial(self) -> list[Piece]:
        return [pc for pc in self.pieces if pc.link is not None and not pc.link.is_unknot]


def decompose_polygon(p: LatticePolygon) -> FactorDecomposition:
    red = reduce_polygon(p)
    pieces = split_pieces(red.polygon)
    types = []
    for pc in pieces:
        r = sweep(pc.polygon)
        shift = _piece_shift(pc)
        pc.positions = {k + shift: v for k, v in r.positions.items()}
        if r.diagram is None:
            pc.link = LinkType.unknot()
        else:
            pc.diagram = r.diagram
            pc.link = braid.classify_plat(r.diagram)
        if pc.link.kind == "unlink":
            raise InvariantViolation("a closed piece of a polygon cannot be a split link")
        types.append(pc.link)
    return FactorDecomposition(p, red, pieces, LinkType.connected_sum(types))


def classify_polygon(p: LatticePolygon) -> LinkType:
    return decompose_polygon(p).link


def size_of_linked_part(p: LatticePolygon) -> int:
    """Edges of the original polygon lying in pieces whose closure is knotted.

    A cut 2-section contributes one edge (two half-edges) to each side."""
    dec = decompose_polygon(p)
    total = 0
    for pc in dec.nontrivial:
        lo = dec.reduction.original_section(pc.first_hinge + 1) - 1 if pc.first_hinge > 0 else 0
        hi = dec.reduction.original_section(pc.last_hinge) if pc.last_hinge > 0 else 0
        if pc.last_hinge == 0:
            hi = 0
        total += _edges_between(p, lo, hi, pc.left_cut is not None, pc.right_cut is not None)
    return total


def _edges_between(p: LatticePolygon, h0: int, h1: int, cut_left: bool, cut_right: bool) -> int:
    n = sum(len(p.hinge(h)) for h in range(h0, h1 + 1))
    n += sum(len(p.section(k)) for k in range(h0 + 1, h1 + 1))
    n += int(cut_left) + int(cut_right)
    return n


# ------------------------------------------------------------ unknotting


@dataclasses.dataclass(frozen=True)
class Insertion:
    section: int  # section index in the polygon the block went into
    block: "object"  # blocks.SBlock
    word: BraidWord
    variant: str


def find_polygon_insertion(dec: FactorDecomposition, pc: Piece) -> tuple[int, BraidWord, str]:
    """A (original section, word, variant) whose braid insertion unknots this piece."""
    d = pc.diagram
    c0 = braid.conway_normal_form(d)
    w0 = braid.unknotting_word(c0)
    n = len(d.word)
    # reduced-polygon sections inside the piece, excluding the piece's end hinges
    cands = []
    for k, pos in sorted(pc.positions.items()):
        if 0 < pos < n and pc.first_hinge < k <= pc.last_hinge:
            cands.append((k, pos))
    for k, pos in cands:
        for v in braid.VARIANTS:
            w = braid.variant(w0, v)
            if braid.classify_plat(braid.insert_word(d, pos, w)).is_unknot:
                return dec.reduction.original_section(k), w, v
    raise NotFound(f"no section-boundary insertion of {w0} unknots {d}")


def unknot_polygon(p: LatticePolygon) -> tuple[LatticePolygon, list[Insertion]]:
    """One braid-block insertion per knotted factor; returns the unknot and the insertions."""
    from . import blocks

    dec = decompose_polygon(p)
    if dec.link.is_unknot:
        raise PreconditionViolated("polygon is already an unknot")
    plan = []
    for pc in dec.nontrivial:
        k, w, v = find_polygon_insertion(dec, pc)
        plan.append((k, w, v))
    out = p
    done: list[Insertion] = []
    # right to left so earlier section indices stay valid
    for k, w, v in sorted(plan, key=lambda t: -t[0]):
        t = out.section(k)
        blk = blocks.braid_block(w, t)
        out = blocks.insert_block(out, k, blk)
        done.append(Insertion(k, blk, w, v))
    done.reverse()
    return out, done


def remove_insertions(u: LatticePolygon, insertions: Sequence[Insertion]) -> LatticePolygon:
    """Undo unknot_polygon: sections are recorded in pre-insertion coordinates, so delete left to right."""
    from . import blocks

    out = u
    for ins in sorted(insertions, key=lambda i: i.section):
        out = blocks.delete_block(out, ins.section, ins.block)
    return out
