"""4-braid words and 4-plat diagrams.

Conventions (used by every other module)::

    position 4  ----------        sigma_i^{+1}: the strand entering at
    position 3  ----------        position i leaves at i+1 and passes in
    position 2  ----------        front of the strand going from i+1 to i
    position 1  ----------        (front strand runs lower-left to upper-right)

              \\ /                         \\ /
    i+1 ----   /   ---- i+1       i+1 ----   \\   ----
    i   ----  / \\  ---- i        i   ----  / \\  ----
              s_i                          s_i^-1

Closures: ``[1`` and ``]1`` cap positions (2,3) and (1,4) (a nested pair);
``[2`` and ``]2`` cap (1,2) and (3,4).  With these caps a sigma_1 next to a
``2``-closure, a sigma_2 next to a ``1``-closure and a sigma_3 next to a
``2``-closure are Reidemeister-I kinks.

Two-bridge links are recorded as a fraction alpha/beta obtained from the
Conway normal form C(c_1, ..., c_n) as c_1 + 1/(c_2 + ... + 1/c_n).  The
fraction class is {beta, beta^-1} mod alpha; mirrors stay distinct.
"""

from __future__ import annotations

import dataclasses
import math
import random
import re
from collections.abc import Iterable, Sequence
from fractions import Fraction

from .errors import FlipOnFourBraid, NotFound, PatternMismatch, TrivialInput


@dataclasses.dataclass(frozen=True, order=True)
class Generator:
    index: int
    sign: int = 1

    def __post_init__(self):
        if self.index not in (1, 2, 3):
            raise ValueError(f"generator index {self.index} outside 1..3")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def inverse(self) -> "Generator":
        return Generator(self.index, -self.sign)

    def __str__(self) -> str:
        return f"s{self.index}" if self.sign > 0 else f"s{self.index}^-1"


def s(index: int, power: int = 1) -> tuple[Generator, ...]:
    """sigma_index ** power as a tuple of letters."""
    sign = 1 if power > 0 else -1
    return tuple(Generator(index, sign) for _ in range(abs(power)))


@dataclasses.dataclass(frozen=True)
class BraidWord:
    letters: tuple[Generator, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return BraidWord(self.letters[i])
        return self.letters[i]

    def __add__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(self.letters + tuple(other))

    @property
    def crossings(self) -> int:
        return len(self.letters)

    def is_3braid(self) -> bool:
        return all(g.index != 3 for g in self.letters)

    def __str__(self) -> str:
        return " ".join(str(g) for g in self.letters)

    def syllables(self) -> list[tuple[int, int]]:
        """Runs of one generator as (index, signed exponent); mixed-sign runs stay split."""
        out: list[list[int]] = []
        for g in self.letters:
            if out and out[-1][0] == g.index and (out[-1][1] > 0) == (g.sign > 0):
                out[-1][1] += g.sign
            else:
                out.append([g.index, g.sign])
        return [(a, b) for a, b in out]

    @classmethod
    def parse(cls, text: str) -> "BraidWord":
        letters: list[Generator] = []
        for tok in text.replace(",", " ").split():
            m = re.fullmatch(r"(?:s|sigma_?)([123])(?:\^\{?(-?\d+)\}?)?", tok)
            if not m:
                raise ValueError(f"bad braid token {tok!r}")
            letters.extend(s(int(m.group(1)), int(m.group(2) or 1)))
        return cls(tuple(letters))

    @classmethod
    def from_syllables(cls, syl: Iterable[tuple[int, int]]) -> "BraidWord":
        out: tuple[Generator, ...] = ()
        for i, a in syl:
            out += s(i, a)
        return cls(out)


def word(*syl: tuple[int, int]) -> BraidWord:
    return BraidWord.from_syllables(syl)


def reverse(w: BraidWord) -> BraidWord:
    return BraidWord(w.letters[::-1])


def inverse(w: BraidWord) -> BraidWord:
    return BraidWord(tuple(g.inverse() for g in reversed(w.letters)))


def flip(w: BraidWord) -> BraidWord:
    if not w.is_3braid():
        raise FlipOnFourBraid("flip needs a word without sigma_3")
    return BraidWord(tuple(Generator(3 - g.index, g.sign) for g in w.letters))


def word_transforms(w: BraidWord, which: str) -> BraidWord:
    try:
        return {"reverse": reverse, "inverse": inverse, "flip": flip}[which](w)
    except KeyError:
        raise ValueError(f"unknown transform {which!r}") from None


@dataclasses.dataclass(frozen=True)
class PlatDiagram:
    left: int
    word: BraidWord
    right: int

    def __post_init__(self):
        if self.left not in (1, 2) or self.right not in (1, 2):
            raise ValueError("closures are 1 or 2")

    def __str__(self) -> str:
        return f"[{self.left}| {self.word} |{self.right}]"

    @property
    def crossings(self) -> int:
        return len(self.word)

    @classmethod
    def parse(cls, text: str) -> "PlatDiagram":
        m = re.fullmatch(r"\s*\[\s*([12])\s*\|(.*)\|\s*([12])\s*\]\s*", text)
        if not m:
            raise ValueError(f"bad plat diagram {text!r}")
        return cls(int(m.group(1)), BraidWord.parse(m.group(2)), int(m.group(3)))


CAPS = {1: ((2, 3), (1, 4)), 2: ((1, 2), (3, 4))}
# (generator, closure) pairs where the letter next to the closure is a kink
_KINK = {(1, 2), (2, 1), (3, 2)}


def components(d: PlatDiagram) -> int:
    """Number of link components, by following the strands through the caps."""
    perm = [0, 1, 2, 3, 4]  # perm[p]: position at the right end of the strand entering at p
    pos = [0, 1, 2, 3, 4]  # pos[strand] = current position
    at = [0, 1, 2, 3, 4]  # at[position] = strand
    for g in d.word:
        i = g.index
        a, b = at[i], at[i + 1]
        at[i], at[i + 1] = b, a
        pos[a], pos[b] = i + 1, i
    for strand in range(1, 5):
        perm[strand] = pos[strand]
    inv = {perm[k]: k for k in range(1, 5)}
    left = {}
    right = {}
    for u, v in CAPS[d.left]:
        left[u], left[v] = v, u
    for u, v in CAPS[d.right]:
        right[u], right[v] = v, u
    seen = set()
    count = 0
    for start in range(1, 5):
        if start in seen:
            continue
        count += 1
        p = start
        while p not in seen:
            seen.add(p)
            q = right[perm[p]]  # travel right, cap, come back along another strand
            p2 = inv[q]
            seen.add(p2)
            p = left[p2]
    return count


# ----------------------------------------------------------------- moves


@dataclasses.dataclass(frozen=True)
class Move:
    """One of A1..A4, B1..B3 at a location.

    pos is a letter index where relevant; for B1 side is 'left' or 'right';
    inverse=True runs a move backwards (crossing-increasing for B moves).
    For an inverse B1/B2 the inserted letter is (index, sign)."""

    name: str
    pos: int = 0
    side: str = "left"
    inverse: bool = False
    index: int = 1
    sign: int = 1


def apply_move(d: PlatDiagram, m: Move) -> PlatDiagram:
    L = list(d.word.letters)
    i, j = d.left, d.right
    name = m.name
    if name == "A1":
        if not 0 <= m.pos < len(L):
            raise PatternMismatch("A1 position out of range")
        g = L[m.pos]
        if g.index == 2:
            raise PatternMismatch("A1 needs sigma_1 or sigma_3")
        L[m.pos] = Generator(4 - g.index, g.sign)
        return PlatDiagram(i, BraidWord(tuple(L)), j)
    if name == "A2":
        return PlatDiagram(j, reverse(d.word), i)
    if name == "A3":
        if not d.word.is_3braid():
            raise PatternMismatch("A3 needs a 3-braid word")
        return PlatDiagram(3 - i, flip(d.word), 3 - j)
    if name == "A4":
        if not L:
            raise PatternMismatch("A4 needs a last letter")
        g = L[-1]
        if j == 1 and g.index == 1:
            L[-1] = Generator(2, -g.sign)
            return PlatDiagram(i, BraidWord(tuple(L)), 2)
        if j == 2 and g.index == 2:
            L[-1] = Generator(1, -g.sign)
            return PlatDiagram(i, BraidWord(tuple(L)), 1)
        raise PatternMismatch("A4 pattern absent")
    if name == "B1":
        if m.inverse:
            g = Generator(m.index, m.sign)
            c = i if m.side == "left" else j
            if (g.index, c) not in _KINK:
                raise PatternMismatch("inserted letter is not a kink at this closure")
            L = [g] + L if m.side == "left" else L + [g]
            return PlatDiagram(i, BraidWord(tuple(L)), j)
        if not L:
            raise PatternMismatch("B1 on empty word")
        if m.side == "left":
            if (L[0].index, i) not in _KINK:
                raise PatternMismatch("B1 pattern absent at the left end")
            return PlatDiagram(i, BraidWord(tuple(L[1:])), j)
        if (L[-1].index, j) not in _KINK:
            raise PatternMismatch("B1 pattern absent at the right end")
        return PlatDiagram(i, BraidWord(tuple(L[:-1])), j)
    if name == "B2":
        p = m.pos
        if m.inverse:
            if not 0 <= p <= len(L):
                raise PatternMismatch("B2 insertion position out of range")
            g = Generator(m.index, m.sign)
            L[p:p] = [g, g.inverse()]
            return PlatDiagram(i, BraidWord(tuple(L)), j)
        if not 0 <= p < len(L) - 1 or L[p + 1] != L[p].inverse():
            raise PatternMismatch("B2 needs a letter followed by its inverse")
        del L[p: p + 2]
        return PlatDiagram(i, BraidWord(tuple(L)), j)
    if name == "B3":
        p = m.pos
        if m.inverse:
            # undo: [w1 s_k^d flip(w2)]_j'  ->  [w1 s_{3-k}^-d s_k^-d w2]_j
            if not 0 <= p < len(L):
                raise PatternMismatch("B3 position out of range")
            g = L[p]
            tail = BraidWord(tuple(L[p + 1:]))
            if g.index == 3 or not tail.is_3braid():
                raise PatternMismatch("inverse B3 needs a 3-braid tail")
            k = g.index
            new = L[:p] + [Generator(3 - k, -g.sign), Generator(k, -g.sign)] + list(flip(tail))
            return PlatDiagram(i, BraidWord(tuple(new)), 3 - j)
        if not 0 <= p < len(L) - 1:
            raise PatternMismatch("B3 position out of range")
        a, b = L[p], L[p + 1]
        tail = BraidWord(tuple(L[p + 2:]))
        if a.sign != b.sign or {a.index, b.index} != {1, 2} or not tail.is_3braid():
            raise PatternMismatch("B3 needs s1^e s2^e or s2^e s1^e before a 3-braid tail")
        new = L[:p] + [Generator(b.index, -a.sign)] + list(flip(tail))
        return PlatDiagram(i, BraidWord(tuple(new)), 3 - j)
    raise ValueError(f"unknown move {name!r}")


def legal_moves(d: PlatDiagram, include_inverse: bool = False) -> list[Move]:
    """Every applicable move (forward B moves are crossing-reducing)."""
    L = d.word.letters
    out: list[Move] = []
    for p, g in enumerate(L):
        if g.index != 2:
            out.append(Move("A1", p))
    out.append(Move("A2"))
    if d.word.is_3braid():
        out.append(Move("A3"))
    if L and ((d.right == 1 and L[-1].index == 1) or (d.right == 2 and L[-1].index == 2)):
        out.append(Move("A4"))
    if L and (L[0].index, d.left) in _KINK:
        out.append(Move("B1", side="left"))
    if L and (L[-1].index, d.right) in _KINK:
        out.append(Move("B1", side="right"))
    for p in range(len(L) - 1):
        if L[p + 1] == L[p].inverse():
            out.append(Move("B2", p))
    tail3 = [True] * (len(L) + 1)
    for p in range(len(L) - 1, -1, -1):
        tail3[p] = tail3[p + 1] and L[p].index != 3
    for p in range(len(L) - 1):
        a, b = L[p], L[p + 1]
        if a.sign == b.sign and {a.index, b.index} == {1, 2} and tail3[p + 2]:
            out.append(Move("B3", p))
    if include_inverse:
        for side, c in (("left", d.left), ("right", d.right)):
            for k in (1, 2, 3):
                if (k, c) in _KINK:
                    for e in (1, -1):
                        out.append(Move("B1", side=side, inverse=True, index=k, sign=e))
        for p in range(len(L) + 1):
            for k in (1, 2, 3):
                for e in (1, -1):
                    out.append(Move("B2", p, inverse=True, index=k, sign=e))
        for p in range(len(L)):
            if L[p].index != 3 and tail3[p + 1]:
                out.append(Move("B3", p, inverse=True))
    return out


def scramble(d: PlatDiagram, steps: int, rng: random.Random, max_crossings: int = 14) -> PlatDiagram:
    """Random walk on diagrams of one link using A moves and crossing-adding inverse B moves."""
    for _ in range(steps):
        moves = [m for m in legal_moves(d, include_inverse=True) if not (m.name.startswith("B") and not m.inverse)]
        if d.crossings >= max_crossings:
            moves = [m for m in moves if not m.inverse]
        d = apply_move(d, rng.choice(moves))
    return d


# ---------------------------------------------------------- normal form


@dataclasses.dataclass(frozen=True)
class ConwayForm:
    """Reduced alternating 3-braid plat [i s_i^a1 s_{3-i}^a2 ... ]j, entries c_k = (-1)^(k+1) a_k."""

    entries: tuple[int, ...]
    left: int = 1
    right: int = 1

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(c if k % 2 == 0 else -c for k, c in enumerate(self.entries))

    @property
    def crossings(self) -> int:
        return sum(abs(c) for c in self.entries)

    def diagram(self) -> PlatDiagram:
        gens = [self.left if k % 2 == 0 else 3 - self.left for k in range(len(self.entries))]
        w = BraidWord.from_syllables(zip(gens, self.exponents))
        return PlatDiagram(self.left, w, self.right)

    def __str__(self) -> str:
        return "C(" + ",".join(str(c) for c in self.entries) + ")"

    @classmethod
    def parse(cls, text: str) -> "ConwayForm":
        m = re.fullmatch(r"\s*C\((.*)\)\s*", text)
        if not m:
            raise ValueError(f"bad Conway form {text!r}")
        ents = tuple(int(t) for t in m.group(1).split(",") if t.strip())
        return conway(*ents)


def conway(*entries: int) -> ConwayForm:
    """The normal form C(c_1, ..., c_n) closed on the left by [1."""
    n = len(entries)
    right = 1 if n % 2 else 2
    if n == 0:
        right = 2
    return ConwayForm(tuple(entries), 1, right)


def reduce_diagram(d: PlatDiagram) -> tuple[PlatDiagram, list[Move]]:
    """A1 every sigma_3, then B1/B2/B3 until none applies."""
    trace = []
    for p, g in enumerate(d.word.letters):
        if g.index == 3:
            m = Move("A1", p)
            d = apply_move(d, m)
            trace.append(m)
    while True:
        moves = [m for m in legal_moves(d) if m.name.startswith("B")]
        if not moves:
            return d, trace
        m = moves[0]
        d = apply_move(d, m)
        trace.append(m)


def conway_normal_form(d: PlatDiagram) -> ConwayForm:
    red, _ = reduce_diagram(d)
    syl = red.word.syllables()
    exps = []
    for k, (idx, a) in enumerate(syl):
        exps.append(a if k % 2 == 0 else -a)
    return ConwayForm(tuple(exps), red.left, red.right)


@dataclasses.dataclass(frozen=True, order=True)
class TwoBridgeFraction:
    alpha: int
    beta: int

    def __str__(self) -> str:
        return f"{self.alpha}/{self.beta}"

    @property
    def components(self) -> int:
        return 2 if self.alpha % 2 == 0 else 1

    def mirror(self) -> "TwoBridgeFraction":
        return canonical_fraction(self.alpha, -self.beta)


def canonical_fraction(alpha: int, beta: int) -> TwoBridgeFraction:
    """Representative of the class {beta, beta^-1} (mod alpha) in (-alpha/2, alpha/2]."""
    alpha = abs(alpha)
    if alpha <= 1:
        return TwoBridgeFraction(1, 0)
    if math.gcd(alpha, beta) != 1:
        raise ValueError(f"gcd({alpha}, {beta}) != 1")

    def centred(b):
        r = b % alpha
        return r - alpha if r > alpha / 2 else r

    cands = {centred(beta), centred(pow(beta, -1, alpha))}
    best = min(cands, key=lambda r: (abs(r), -r))
    return TwoBridgeFraction(alpha, best)


def continued_fraction(entries: Sequence[int]) -> Fraction:
    """c_1 + 1/(c_2 + ... + 1/c_n)."""
    val = Fraction(entries[-1])
    for c in reversed(entries[:-1]):
        val = c + 1 / val
    return val


def two_bridge_fraction(c: ConwayForm) -> TwoBridgeFraction:
    if not c.entries:
        raise TrivialInput("empty Conway form has no fraction")
    f = continued_fraction(c.entries)
    return canonical_fraction(f.numerator, f.denominator if f.numerator > 0 else -f.denominator)


@dataclasses.dataclass(frozen=True)
class LinkType:
    """unknot, unlink (2 components), prime (one fraction) or sum (sorted fractions)."""

    kind: str
    factors: tuple[TwoBridgeFraction, ...] = ()

    @staticmethod
    def unknot() -> "LinkType":
        return LinkType("unknot")

    @staticmethod
    def unlink() -> "LinkType":
        return LinkType("unlink")

    @staticmethod
    def prime(f: TwoBridgeFraction) -> "LinkType":
        return LinkType("prime", (f,))

    @staticmethod
    def connected_sum(parts: Iterable["LinkType"]) -> "LinkType":
        fs: list[TwoBridgeFraction] = []
        for p in parts:
            if p.kind == "unlink":
                raise ValueError("connected sum with a split link")
            fs.extend(p.factors)
        fs.sort()
        if not fs:
            return LinkType.unknot()
        if len(fs) == 1:
            return LinkType("prime", tuple(fs))
        return LinkType("sum", tuple(fs))

    @property
    def is_unknot(self) -> bool:
        return self.kind == "unknot"

    @property
    def f_L(self) -> int:
        return len(self.factors)

    @property
    def determinant(self) -> int:
        if self.kind == "unlink":
            return 0
        return math.prod(f.alpha for f in self.factors)

    def __str__(self) -> str:
        if self.kind in ("unknot", "unlink"):
            return self.kind
        return " # ".join(str(f) for f in self.factors)

    def to_json(self) -> dict:
        return {"kind": self.kind, "factors": [{"alpha": f.alpha, "beta": f.beta} for f in self.factors]}


def classify_plat(d: PlatDiagram) -> LinkType:
    c = conway_normal_form(d)
    if not c.entries:
        return LinkType.unknot() if components(d) == 1 else LinkType.unlink()
    f = two_bridge_fraction(c)
    if f.alpha == 1:
        return LinkType.unknot()
    return LinkType.prime(f)


# --------------------------------------------------------- unknotting


def unknotting_word(c: ConwayForm) -> BraidWord:
    """w0 = w1^-1 w2^-1 with w1 the first letter; w2^-1 alone when full cancellation leaves an unlink."""
    w = c.diagram().word
    if len(w) < 2:
        raise TrivialInput("need a nontrivial minimal form with at least two crossings")
    w1, w2 = w[:1], w[1:]
    if c.left == c.right:
        return inverse(w2)
    return inverse(w1) + inverse(w2)


VARIANTS = ("w0", "reverse", "flip", "flip_reverse")


def variant(w0: BraidWord, name: str) -> BraidWord:
    if name == "w0":
        return w0
    if name == "reverse":
        return reverse(w0)
    if name == "flip":
        return flip(w0)
    if name == "flip_reverse":
        return flip(reverse(w0))
    raise ValueError(name)


def insert_word(d: PlatDiagram, pos: int, w: BraidWord) -> PlatDiagram:
    L = d.word.letters
    return PlatDiagram(d.left, BraidWord(L[:pos] + tuple(w) + L[pos:]), d.right)


def unknotting_insertions(d: PlatDiagram, w0: BraidWord, positions: Iterable[int] | None = None):
    """Yield every (position, variant) whose insertion gives an unknot diagram."""
    if positions is None:
        positions = range(1, len(d.word))
    for p in positions:
        for v in VARIANTS:
            if classify_plat(insert_word(d, p, variant(w0, v))).is_unknot:
                yield p, v


def find_unknotting_insertion(d: PlatDiagram, w0: BraidWord, positions: Iterable[int] | None = None) -> tuple[int, str]:
    for hit in unknotting_insertions(d, w0, positions):
        return hit
    raise NotFound(f"no insertion of {w0} unknots {d}")


# ------------------------------------------------------ braid equality


def _free_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = list(a)
    for x in b:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _free_inv(a):
    return tuple(-x for x in reversed(a))


def artin_action(w: BraidWord, strands: int = 4) -> tuple[tuple[int, ...], ...]:
    """Images of the free generators x_1..x_n under the braid (Artin's faithful action)."""
    imgs = [(k,) for k in range(1, strands + 1)]
    for g in w:
        i = g.index - 1
        a, b = imgs[i], imgs[i + 1]
        if g.sign > 0:
            imgs[i], imgs[i + 1] = _free_mul(_free_mul(a, b), _free_inv(a)), a
        else:
            imgs[i], imgs[i + 1] = b, _free_mul(_free_mul(_free_inv(b), a), b)
    return tuple(imgs)


def braid_equal(u: BraidWord, v: BraidWord) -> bool:
    return artin_action(u) == artin_action(v)


# ------------------------------------------------------ determinant oracle


def _lattice_index(rows: list[list[int]], ncols: int) -> int:
    """Order of Z^ncols / rowspace, 0 when infinite (integer row reduction)."""
    m = [r[:] for r in rows if any(r)]
    det = 1
    r0 = 0
    for c in range(ncols):
        piv = [k for k in range(r0, len(m)) if m[k][c]]
        if not piv:
            return 0
        while True:
            piv = [k for k in range(r0, len(m)) if m[k][c]]
            k = min(piv, key=lambda k: abs(m[k][c]))
            m[r0], m[k] = m[k], m[r0]
            done = True
            for k in range(r0 + 1, len(m)):
                if m[k][c]:
                    q = m[k][c] // m[r0][c]
                    m[k] = [x - q * y for x, y in zip(m[k], m[r0])]
                    if m[k][c]:
                        done = False
            if done:
                break
        det *= abs(m[r0][c])
        r0 += 1
    return det


def coloring_determinant(crossings: list[tuple[int, int, int]], n_arcs: int) -> int:
    """|det| from Fox coloring relations 2*over - under_a - under_b."""
    if n_arcs <= 1:
        return 1
    rows = []
    for o, a, b in crossings:
        r = [0] * n_arcs
        r[o] += 2
        r[a] -= 1
        r[b] -= 1
        rows.append(r[1:])
    return _lattice_index(rows, n_arcs - 1)


def determinant_oracle(d: PlatDiagram) -> int:
    """Link determinant from the coloring matrix of the plat diagram."""
    L = d.word.letters
    m = len(L)
    if m == 0:
        return 1 if components(d) == 1 else 0
    # segment (position, column), column t sits between crossings t-1 and t
    parent = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        parent[find(a)] = find(b)

    crossings = []
    for t, g in enumerate(L):
        i = g.index
        for p in (1, 2, 3, 4):
            if p not in (i, i + 1):
                union((p, t), (p, t + 1))
        # over strand: sign +1 goes i -> i+1, sign -1 goes i+1 -> i
        if g.sign > 0:
            union((i, t), (i + 1, t + 1))
            crossings.append(((i, t), (i + 1, t), (i, t + 1)))
        else:
            union((i + 1, t), (i, t + 1))
            crossings.append(((i + 1, t), (i, t), (i + 1, t + 1)))
    for u, v in CAPS[d.left]:
        union((u, 0), (v, 0))
    for u, v in CAPS[d.right]:
        union((u, m), (v, m))
    roots = sorted({find((p, t)) for p in (1, 2, 3, 4) for t in range(m + 1)})
    idx = {r: k for k, r in enumerate(roots)}
    rel = [(idx[find(o)], idx[find(a)], idx[find(b)]) for o, a, b in crossings]
    return coloring_determinant(rel, len(roots))


# ----------------------------------------------------------- known links


KNOWN: dict[str, ConwayForm] = {
    "unknot": conway(1),
    "hopf": conway(2),
    "3_1": conway(3),
    "4_1": conway(2, 2),
    "5_1": conway(5),
    "5_2": conway(3, 2),
    "7_6": conway(2, 2, 1, 2),
    "6^2_3": conway(2, 2, 2),
}

CROSSING_NUMBER = {"unknot": 0, "hopf": 2, "3_1": 3, "4_1": 4, "5_1": 5, "5_2": 5, "7_6": 7, "6^2_3": 6}
