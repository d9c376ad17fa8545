"""1-patterns of the tube and the monomial transfer matrices A(x), T(x), B(x).

A 1-block is the slice of a polygon between the planes x = k - 1/2 and
x = k + 1/2: the edges of hinge k plus the half-edges crossing either plane.
A 1-pattern adds the pairing that the polygon to the left induces on the left
half-edges.  Patterns are indexed into start (no left half-edges), proper and
end (no right half-edges) lists; span-0 polygons are kept separately.

Polygon counts follow from

    P(x) = sum_span0 x^n + sum_{a -> g} x^(n_a + n_g) + A (I - T)^-1 B

where the middle term covers span-1 polygons made of a start pattern followed
directly by an end pattern.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import math
from collections import defaultdict
from collections.abc import Iterable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import InvariantViolation, Overflow
from .lattice import T_STAR, TubeDims

Pairing = tuple[tuple[int, int], ...]


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def perfect_matchings(items: Iterable[int]) -> Iterable[Pairing]:
    s = sorted(items)
    if not s:
        yield ()
        return
    a = s[0]
    for b in s[1:]:
        rest = [v for v in s if v != a and v != b]
        for m in perfect_matchings(rest):
            yield ((a, b),) + m


@dataclasses.dataclass(frozen=True)
class OneBlock:
    """Hinge edges (index pairs) with left and right half-edge lane masks."""

    hinge: tuple[tuple[int, int], ...]
    left: int
    right: int

    @property
    def half_length(self) -> int:
        """Length in half-edge units: 2|H| + |L| + |R|."""
        return 2 * len(self.hinge) + bin(self.left).count("1") + bin(self.right).count("1")

    @property
    def length(self) -> int:
        return self.half_length // 2

    @property
    def n_left(self) -> int:
        return bin(self.left).count("1")

    @property
    def n_right(self) -> int:
        return bin(self.right).count("1")


@dataclasses.dataclass(frozen=True)
class OnePattern:
    block: OneBlock
    left_pairing: Pairing
    right_pairing: Pairing

    @property
    def length(self) -> int:
        return self.block.length

    @property
    def kind(self) -> str:
        if not self.block.left and not self.block.right:
            return "span0"
        if not self.block.left:
            return "start"
        if not self.block.right:
            return "end"
        return "proper"


def enumerate_blocks(dims: TubeDims = T_STAR) -> list[OneBlock]:
    """All 1-blocks: every vertex has total degree 0 or 2 and both sides are even."""
    nv = dims.hinge_size
    edges = dims.grid_edges
    out = []
    for hm in range(1 << len(edges)):
        H = tuple(edges[i] for i in range(len(edges)) if hm >> i & 1)
        deg = [0] * nv
        for u, v in H:
            deg[u] += 1
            deg[v] += 1
        if max(deg, default=0) > 2:
            continue
        # per vertex: (left bit, right bit) options completing degree to 0 or 2
        options = []
        for v in range(nv):
            if deg[v] == 2:
                options.append(((0, 0),))
            elif deg[v] == 1:
                options.append(((1, 0), (0, 1)))
            else:
                options.append(((0, 0), (1, 1)))
        for choice in itertools.product(*options):
            lm = sum(c[0] << v for v, c in enumerate(choice))
            rm = sum(c[1] << v for v, c in enumerate(choice))
            if not (hm or lm or rm):
                continue
            if bin(lm).count("1") % 2 or bin(rm).count("1") % 2:
                continue
            out.append(OneBlock(H, lm, rm))
    return out


def _components(block: OneBlock, rho: Pairing, nv: int):
    """Union-find over hinge vertices joined by hinge edges and left pairs.

    Returns (right pairing, number of closed cycles)."""
    parent = list(range(nv))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    ecount = defaultdict(int)
    links = list(block.hinge) + list(rho)
    for u, v in links:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    for u, v in links:
        ecount[find(u)] += 1
    vcount = defaultdict(int)
    occupied = set()
    for u, v in links:
        occupied.update((u, v))
    for v in occupied:
        vcount[find(v)] += 1
    cycles = sum(1 for r in vcount if ecount[r] == vcount[r])
    ends = defaultdict(list)
    for v in _bits(block.right):
        ends[find(v)].append(v)
    pairs = []
    for r, vs in ends.items():
        if len(vs) != 2:
            raise InvariantViolation(f"component with {len(vs)} right ends")
        pairs.append(tuple(sorted(vs)))
    return tuple(sorted(pairs)), cycles


def right_pairing_by_tracing(block: OneBlock, rho: Pairing) -> Pairing | None:
    """Follow each strand from a right half-edge; None if it never returns right.

    Independent of the union-find path, used as a cross-check."""
    adj = defaultdict(list)
    for u, v in block.hinge:
        adj[u].append(v)
        adj[v].append(u)
    partner = {}
    for u, v in rho:
        partner[u], partner[v] = v, u
    left = set(_bits(block.left))
    right = set(_bits(block.right))
    out = set()
    for r in sorted(right):
        # incidences at a vertex: hinge neighbours plus 'L'/'R' tokens
        prev = ("R", r)
        cur = r
        steps = 0
        while True:
            steps += 1
            if steps > 64:
                return None
            inc = [("H", w) for w in adj[cur]]
            if cur in left:
                inc.append(("L", cur))
            if cur in right:
                inc.append(("R", cur))
            inc.remove(prev if prev[0] != "H" else ("H", prev[1]))
            (kind, w), = inc
            if kind == "R":
                out.add(tuple(sorted((r, cur))))
                break
            if kind == "L":
                nxt = partner[cur]
                prev, cur = ("L", nxt), nxt
            else:
                prev, cur = ("H", cur), w
    return tuple(sorted(out))


@dataclasses.dataclass
class TransferSystem:
    dims: TubeDims
    starts: list[OnePattern]
    propers: list[OnePattern]
    ends: list[OnePattern]
    span0: list[OnePattern]
    restricted: bool = False

    # --- follow relations as coordinate lists
    @functools.cached_property
    def _by_left(self) -> dict[Pairing, list[int]]:
        d = defaultdict(list)
        for j, p in enumerate(self.propers):
            d[p.left_pairing].append(j)
        return d

    @functools.cached_property
    def _ends_by_left(self) -> dict[Pairing, list[int]]:
        d = defaultdict(list)
        for j, p in enumerate(self.ends):
            d[p.left_pairing].append(j)
        return d

    @functools.cached_property
    def T_coo(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(rows, cols, exponents) of T: entry x^{n_j} when pattern j can follow i."""
        rows, cols, exps = [], [], []
        for i, p in enumerate(self.propers):
            for j in self._by_left.get(p.right_pairing, ()):
                rows.append(i)
                cols.append(j)
                exps.append(self.propers[j].length)
        return np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64), np.array(exps, dtype=np.int64)

    @functools.cached_property
    def A_coo(self):
        rows, cols, exps = [], [], []
        for i, a in enumerate(self.starts):
            for j in self._by_left.get(a.right_pairing, ()):
                rows.append(i)
                cols.append(j)
                exps.append(a.length + self.propers[j].length)
        return np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64), np.array(exps, dtype=np.int64)

    @functools.cached_property
    def B_coo(self):
        rows, cols, exps = [], [], []
        for i, p in enumerate(self.propers):
            for j in self._ends_by_left.get(p.right_pairing, ()):
                rows.append(i)
                cols.append(j)
                exps.append(self.ends[j].length)
        return np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64), np.array(exps, dtype=np.int64)

    @functools.cached_property
    def span1_lengths(self) -> list[int]:
        """Lengths of span-1 polygons: a start pattern directly followed by an end pattern."""
        out = []
        for a in self.starts:
            for j in self._ends_by_left.get(a.right_pairing, ()):
                out.append(a.length + self.ends[j].length)
        return out

    def shape(self, which: str) -> tuple[int, int]:
        nS, nP, nE = len(self.starts), len(self.propers), len(self.ends)
        return {"A": (nS, nP), "T": (nP, nP), "B": (nP, nE)}[which]

    def coo(self, which: str):
        return {"A": self.A_coo, "T": self.T_coo, "B": self.B_coo}[which]

    def to_json(self) -> dict:
        def pat(p: OnePattern):
            lab = self.dims.label
            return {
                "hinge": ["".join(lab(v) for v in e) for e in p.block.hinge],
                "left": "".join(lab(v) for v in _bits(p.block.left)),
                "right": "".join(lab(v) for v in _bits(p.block.right)),
                "rho": ["".join(lab(v) for v in e) for e in p.left_pairing],
                "rho_right": ["".join(lab(v) for v in e) for e in p.right_pairing],
                "length": p.length,
            }

        def trip(which):
            r, c, e = self.coo(which)
            return [[int(a), int(b), int(x)] for a, b, x in zip(r, c, e)]

        return {
            "dims": str(self.dims),
            "restricted": self.restricted,
            "starts": [pat(p) for p in self.starts],
            "propers": [pat(p) for p in self.propers],
            "ends": [pat(p) for p in self.ends],
            "span0": [pat(p) for p in self.span0],
            "A": trip("A"),
            "T": trip("T"),
            "B": trip("B"),
        }


def _reachable(starts, propers, ends):
    """Keep patterns lying on some start -> ... -> end chain of the follow relation."""
    fw = {a.right_pairing for a in starts}
    changed = True
    while changed:
        changed = False
        for p in propers:
            if p.left_pairing in fw and p.right_pairing not in fw:
                fw.add(p.right_pairing)
                changed = True
    bw = {g.left_pairing for g in ends}
    changed = True
    while changed:
        changed = False
        for p in propers:
            if p.right_pairing in bw and p.left_pairing not in bw:
                bw.add(p.left_pairing)
                changed = True
    P = [p for p in propers if p.left_pairing in fw and p.right_pairing in bw]
    S = [a for a in starts if a.right_pairing in bw]
    E = [g for g in ends if g.left_pairing in fw]
    return S, P, E


@functools.lru_cache(maxsize=None)
def generate_one_patterns(dims: TubeDims = T_STAR) -> TransferSystem:
    nv = dims.hinge_size
    starts, propers, ends, span0 = [], [], [], []
    for b in enumerate_blocks(dims):
        lanes = _bits(b.left)
        for rho in perfect_matchings(lanes):
            rp, cycles = _components(b, rho, nv)
            pat = OnePattern(b, rho, rp)
            kind = pat.kind
            if kind == "span0":
                _, c = _components(b, (), nv)
                # exactly one cycle and no other occupied part
                if c == 1 and _single_component(b, nv):
                    span0.append(pat)
            elif kind == "end":
                if cycles == 1 and _single_component_with(b, rho, nv):
                    ends.append(pat)
            elif cycles == 0:
                (starts if kind == "start" else propers).append(pat)
    S, P, E = _reachable(starts, propers, ends)
    return TransferSystem(dims, S, P, E, span0)


def _single_component(b: OneBlock, nv: int) -> bool:
    return _single_component_with(b, (), nv)


def _single_component_with(b: OneBlock, rho: Pairing, nv: int) -> bool:
    links = list(b.hinge) + list(rho)
    occ = sorted({v for e in links for v in e})
    if not occ:
        return False
    g = sp.coo_matrix((np.ones(len(links)), ([u for u, _ in links], [v for _, v in links])), shape=(nv, nv))
    _, lab = connected_components(g, directed=False)
    return len({lab[v] for v in occ}) == 1


def restrict_no_2sections(sys: TransferSystem) -> TransferSystem:
    """Drop every pattern with a 2-element half-section, then re-prune by reachability."""
    starts = [a for a in sys.starts if a.block.n_right != 2]
    propers = [p for p in sys.propers if p.block.n_left != 2 and p.block.n_right != 2]
    ends = [g for g in sys.ends if g.block.n_left != 2]
    S, P, E = _reachable(starts, propers, ends)
    return TransferSystem(sys.dims, S, P, E, list(sys.span0), restricted=True)


def check_follow_relation(sys: TransferSystem) -> None:
    """Recompute every right pairing by strand tracing; raise on disagreement."""
    for p in itertools.chain(sys.starts, sys.propers):
        traced = right_pairing_by_tracing(p.block, p.left_pairing)
        if traced != p.right_pairing:
            raise InvariantViolation(f"right pairing mismatch on {p}")


# ------------------------------------------------------------------- series


def _exponent_slices(sys: TransferSystem, which: str) -> dict[int, sp.csr_matrix]:
    """Split a monomial matrix into 0/1 integer matrices, one per exponent."""
    rows, cols, exps = sys.coo(which)
    key = rows * (max(sys.shape(which)[1], 1)) + cols
    if len(np.unique(key)) != len(key):
        raise InvariantViolation(f"{which} has a repeated entry; not a monomial matrix")
    out = {}
    for e in np.unique(exps):
        m = exps == e
        out[int(e)] = sp.csr_matrix(
            (np.ones(int(m.sum()), dtype=np.int64), (rows[m], cols[m])), shape=sys.shape(which)
        )
    return out


_SAFE = 1 << 62


def transfer_series(sys: TransferSystem, n_max: int, by_span: bool = False) -> dict:
    """Polygon counts up to length n_max.

    Returns {n: count}, or {(n, span): count} when by_span is set.  The walk
    is organised by span: the row vector f_s holds, per proper pattern, the
    polynomial counting chains of s proper patterns ending there."""
    out: dict = defaultdict(int)
    if n_max < 4:
        return {}

    def add(n, s, c):
        if c and n <= n_max:
            if by_span:
                out[(n, s)] += int(c)
            else:
                out[n] += int(c)

    for p in sys.span0:
        add(p.length, 0, 1)
    for n in sys.span1_lengths:
        add(n, 1, 1)
    Tsl = _exponent_slices(sys, "T")
    Bsl = _exponent_slices(sys, "B")
    nP = len(sys.propers)
    # f[n] : vector over proper patterns
    f = np.zeros((n_max + 1, nP), dtype=np.int64)
    for i, a in enumerate(sys.starts):
        for j in sys._by_left.get(a.right_pairing, ()):
            n = a.length + sys.propers[j].length
            if n <= n_max:
                f[n, j] += 1
    span = 2
    while f.any():
        # close off with an end pattern: span = number of proper patterns + 1
        for e, Bm in Bsl.items():
            if e <= n_max:
                vals = (Bm.T @ f[: n_max + 1 - e].T).sum(axis=0)
                for n, c in enumerate(vals):
                    add(n + e, span, c)
        g = np.zeros_like(f)
        for e, Tm in Tsl.items():
            if e <= n_max:
                g[e:] += (Tm.T @ f[: n_max + 1 - e].T).T
        if g.max(initial=0) > _SAFE:
            raise Overflow("series coefficient exceeds int64 range")
        f = g
        span += 1
    return dict(sorted(out.items()))


def transfer_series_by_length(sys: TransferSystem, n_max: int) -> dict[int, int]:
    """Same totals as transfer_series, accumulated length-by-length instead of span-by-span."""
    if n_max < 4:
        return {}
    out = defaultdict(int)
    for p in sys.span0:
        if p.length <= n_max:
            out[p.length] += 1
    for n in sys.span1_lengths:
        if n <= n_max:
            out[n] += 1
    Tsl = _exponent_slices(sys, "T")
    Bsl = _exponent_slices(sys, "B")
    Asl = _exponent_slices(sys, "A")
    nS, nP = len(sys.starts), len(sys.propers)
    ones = np.ones(nS, dtype=np.int64)
    f = np.zeros((n_max + 1, nP), dtype=np.int64)
    for n in range(n_max + 1):
        row = np.zeros(nP, dtype=np.int64)
        if n in Asl:
            row += Asl[n].T @ ones
        for e, Tm in Tsl.items():
            if e <= n:
                row += Tm.T @ f[n - e]
        f[n] = row
    for n in range(n_max + 1):
        for e, Bm in Bsl.items():
            if e <= n:
                out[n] += int((Bm.T @ f[n - e]).sum())
    return {n: c for n, c in sorted(out.items()) if c}


# ------------------------------------------------------------ structure checks


def _digraph(sys: TransferSystem) -> sp.csr_matrix:
    rows, cols, _ = sys.T_coo
    n = len(sys.propers)
    return sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))


def is_irreducible(sys: TransferSystem) -> bool:
    k, _ = connected_components(_digraph(sys), directed=True, connection="strong")
    return k == 1


def period(sys: TransferSystem) -> int:
    """gcd of cycle lengths of the follow digraph (assumes irreducibility)."""
    g = _digraph(sys)
    n = g.shape[0]
    level = [-1] * n
    level[0] = 0
    frontier = [0]
    d = 0
    indptr, indices = g.indptr, g.indices
    while frontier:
        nxt = []
        for u in frontier:
            for v in indices[indptr[u]: indptr[u + 1]]:
                if level[v] < 0:
                    level[v] = level[u] + 1
                    nxt.append(v)
        frontier = nxt
    for u in range(n):
        for v in indices[indptr[u]: indptr[u + 1]]:
            d = math.gcd(d, level[u] + 1 - level[v])
    return abs(d)


def is_aperiodic(sys: TransferSystem) -> bool:
    return period(sys) == 1
