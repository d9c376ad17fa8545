"""Independent oracles used only by the tests."""

from __future__ import annotations

import itertools
from collections import defaultdict

from tubeknots.braid import CAPS, PlatDiagram
from tubeknots.lattice import T_STAR, LatticePolygon, canonical_vertices


def _poly_mul(p, q):
    out = defaultdict(int)
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] += x * y
    return {k: v for k, v in out.items() if v}


def _poly_add(p, q):
    out = defaultdict(int, p)
    for k, v in q.items():
        out[k] += v
    return {k: v for k, v in out.items() if v}


def _plat_pieces(d: PlatDiagram):
    """Endpoints of each crossing and the fixed arcs (pass-throughs and caps)."""
    L = d.word.letters
    m = len(L)
    arcs = []
    cross = []
    for t, g in enumerate(L):
        i = g.index
        for p in (1, 2, 3, 4):
            if p not in (i, i + 1):
                arcs.append(((p, t), (p, t + 1)))
        cross.append((g, (i, t), (i + 1, t), (i, t + 1), (i + 1, t + 1)))
    for u, v in CAPS[d.left]:
        arcs.append(((u, 0), (v, 0)))
    for u, v in CAPS[d.right]:
        arcs.append(((u, m), (v, m)))
    return arcs, cross


def kauffman_bracket(d: PlatDiagram) -> dict[int, int]:
    """<D> as {power of A: coefficient}, normalised so the empty diagram is 1."""
    arcs, cross = _plat_pieces(d)
    delta = {2: -1, -2: -1}
    total: dict[int, int] = {}
    for state in itertools.product((0, 1), repeat=len(cross)):
        parent = {}

        def find(a):
            parent.setdefault(a, a)
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            parent[find(a)] = find(b)

        for a, b in arcs:
            union(a, b)
        na = 0
        for (g, lb, lt, rb, rt), st in zip(cross, state):
            vertical = (st == 0) == (g.sign > 0)  # A-smoothing of a positive letter is vertical
            na += st == 0
            if vertical:
                union(lb, lt)
                union(rb, rt)
            else:
                union(lb, rb)
                union(lt, rt)
        loops = len({find(x) for x in list(parent)})
        nb = len(cross) - na
        term = {na - nb: 1}
        for _ in range(loops - 1):
            term = _poly_mul(term, delta)
        total = _poly_add(total, term)
    return total


def writhe(d: PlatDiagram) -> int:
    """Writhe of a knot diagram; orientation is irrelevant for one component."""
    arcs, cross = _plat_pieces(d)
    # build traversal: endpoint -> neighbours
    nb = defaultdict(list)
    for a, b in arcs:
        nb[a].append(b)
        nb[b].append(a)
    for g, lb, lt, rb, rt in cross:
        nb[lb].append(rt)
        nb[rt].append(lb)
        nb[lt].append(rb)
        nb[rb].append(lt)
    start = next(iter(nb))
    order = {}
    prev, cur, k = None, start, 0
    while cur not in order:
        order[cur] = k
        k += 1
        nxt = [x for x in nb[cur] if x != prev] if prev is not None else nb[cur][:1]
        prev, cur = cur, nxt[0]
    w = 0
    for g, lb, lt, rb, rt in cross:
        # direction of each strand through the crossing: +1 if travelled left to right
        d1 = 1 if (order[rt] - order[lb]) % len(order) == 1 else -1  # strand lb-rt
        d2 = 1 if (order[rb] - order[lt]) % len(order) == 1 else -1  # strand lt-rb
        # sign chosen so that a Reidemeister-I kink leaves (-A^3)^-w <D> unchanged
        w -= g.sign * d1 * d2
    return w


def jones_like(d: PlatDiagram) -> dict[int, int]:
    """(-A^3)^{-w} <D>: a chirality-sensitive knot invariant."""
    w = writhe(d)
    factor = {-3 * w: (-1) ** (w % 2)}
    return _poly_mul(factor, kauffman_bracket(d))


def mirror_poly(p):
    return {-k: v for k, v in p.items()}


def determinant_from_bracket(d: PlatDiagram) -> int:
    """|<D>| at A = exp(i pi/4), i.e. |V(-1)|; the writhe factor has modulus one."""
    import cmath

    a = cmath.exp(1j * cmath.pi / 4)
    v = sum(c * a**k for k, c in kauffman_bracket(d).items())
    return round(abs(v))


def naive_polygon_counts(n_max: int, m1: int = 2, m2: int = 1) -> dict[int, int]:
    """Plain self-avoiding walk closure in the tube, deduplicated by edge set.

    Walks start at their lexicographically smallest vertex, which then has x = 0."""
    found: dict[int, set] = defaultdict(set)
    steps = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))

    def inside(v, root):
        return 0 <= v[1] <= m1 and 0 <= v[2] <= m2 and v > root

    for y in range(m1 + 1):
        for z in range(m2 + 1):
            root = (0, y, z)
            path = [root]
            seen = {root}

            def rec():
                cur = path[-1]
                left = n_max - len(path)
                for d in steps:
                    v = (cur[0] + d[0], cur[1] + d[1], cur[2] + d[2])
                    if v == root and len(path) >= 4:
                        edges = frozenset(frozenset(e) for e in zip(path, path[1:] + [root]))
                        found[len(path)].add(edges)
                        continue
                    if v in seen or not inside(v, root):
                        continue
                    dist = sum(abs(a - b) for a, b in zip(v, root))
                    if dist > left:
                        continue
                    path.append(v)
                    seen.add(v)
                    rec()
                    path.pop()
                    seen.discard(v)

            rec()
    return {n: len(s) for n, s in sorted(found.items())}
