"""Exact ball enumeration in Cayley graphs of C'(1/6) groups.

Breadth-first search over shortlex-least geodesic words.  Candidates of
length n+1 are extensions of the stored representatives of the sphere of
radius n, generated in shortlex order, so the first candidate seen for an
element is its normal form.

Equality of candidates is decided by the Dehn oracle, but only among
candidates sharing an invariant key: the abelian image modulo the relator
lattice together with images in a few SL(2, p) quotients.  Both are
homomorphisms, so equal elements always share a key; the key only prunes
comparisons and never decides equality on its own.
"""

from __future__ import annotations

import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .presentation import Presentation, free_reduce, inverse, symbol_of, symmetrize
from .wordproblem import DehnOracle

DEFAULT_BUDGET = 5_000_000
BUDGET_ENV = "SCGROWTH_BUDGET"


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


class BallBudgetExceeded(RuntimeError):
    def __init__(self, ball: GroupBall, budget: int):
        super().__init__(f"element budget {budget} exceeded; ball complete through radius {ball.radius}")
        self.ball = ball
        self.budget = budget


class NotInBall(LookupError):
    pass


# ------------------------------------------------------------- invariants

Mat = tuple[int, int, int, int]


def _mm(x: Mat, y: Mat, p: int) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)


def _minv(x: Mat, p: int) -> Mat:
    a, b, c, d = x
    return (d, -b % p, -c % p, a)


_IDENT: Mat = (1, 0, 0, 1)


def _eval(word: str, images: dict[str, Mat], p: int) -> Mat:
    m = _IDENT
    for ch in word:
        m = _mm(m, images[ch], p)
    return m


def _primes(lo: int, hi: int) -> list[int]:
    return [n for n in range(max(lo, 2), hi) if all(n % d for d in range(2, math.isqrt(n) + 1))]


def _root_exponent(r: str) -> int:
    n = len(r)
    for d in range(1, n + 1):
        if n % d == 0 and r[:d] * (n // d) == r:
            return n // d
    return 1


@lru_cache(maxsize=64)
def sl2_quotients(p: Presentation, wanted: int = 3, seed: int = 20240601) -> tuple[tuple[int, dict], ...]:
    """Random homomorphisms to SL(2, q): generator images with every relator -> I.

    Primes q are preferred where every proper-power exponent c >= 3 of a
    relator divides q - 1 or q + 1, since elements of order c then exist.
    """
    rng = random.Random(seed)
    exps = [_root_exponent(r) for r in p.relators]
    big = [q for q in _primes(40, 400) if all(c <= 2 or (q - 1) % c == 0 or (q + 1) % c == 0 for c in exps)]
    small = [13, 11, 7, 5]
    found: list[tuple[int, dict]] = []
    for q, budget in [(q, 6000) for q in big[:12]] + [(q, 4 * q**3) for q in small]:
        if len(found) >= wanted:
            break
        for _ in range(budget):
            imgs: dict[str, Mat] = {}
            for g in range(p.rank):
                while True:
                    a, b, c = rng.randrange(q), rng.randrange(q), rng.randrange(q)
                    if a:
                        m = (a, b, c, (1 + b * c) * pow(a, -1, q) % q)
                        break
                lo = chr(ord("a") + g)
                imgs[lo] = m
                imgs[lo.upper()] = _minv(m, q)
            if all(_eval(r, imgs, q) == _IDENT for r in p.relators):
                # skip representations that kill a generator
                if all(imgs[chr(ord("a") + g)] not in (_IDENT, (q - 1, 0, 0, q - 1)) for g in range(p.rank)):
                    found.append((q, imgs))
                    break
    return tuple(found)


def _hnf_rows(vectors: list[list[int]]) -> list[tuple[int, list[int]]]:
    """Row echelon basis with positive pivots: [(pivot column, row)]."""
    rows = [v[:] for v in vectors if any(v)]
    out = []
    ncols = len(vectors[0]) if vectors else 0
    for col in range(ncols):
        live = [r for r in rows if r[col]]
        if not live:
            continue
        while len([r for r in rows if r[col]]) > 1:
            live = sorted((r for r in rows if r[col]), key=lambda r: abs(r[col]))
            piv = live[0]
            for r in live[1:]:
                q = r[col] // piv[col]
                for i in range(ncols):
                    r[i] -= q * piv[i]
        piv = next(r for r in rows if r[col])
        if piv[col] < 0:
            for i in range(ncols):
                piv[i] = -piv[i]
        out.append((col, piv[:]))
        rows = [r for r in rows if r is not piv and any(r)]
    return out


class Invariants:
    """Incremental homomorphic images used as bucket keys."""

    def __init__(self, p: Presentation):
        k = p.rank
        self.k = k
        vecs = []
        for r in p.relators:
            v = [0] * k
            for ch in r:
                g, s = symbol_of(ch)
                v[g] += s
            vecs.append(v)
        self.lattice = _hnf_rows(vecs) if vecs else []
        self.quotients = sl2_quotients(p)
        self.deltas = {}
        for g in range(k):
            for s in (1, -1):
                ch = chr(ord("a") + g)
                ch = ch if s == 1 else ch.upper()
                d = [0] * k
                d[g] = s
                self.deltas[ch] = tuple(d)
        self.identity = (tuple([0] * k), tuple(_IDENT for _ in self.quotients))

    def step(self, raw, ch: str):
        ab, mats = raw
        d = self.deltas[ch]
        ab = tuple(x + y for x, y in zip(ab, d))
        mats = tuple(_mm(m, imgs[ch], q) for m, (q, imgs) in zip(mats, self.quotients))
        return ab, mats

    def raw_of(self, word: str):
        raw = self.identity
        for ch in word:
            raw = self.step(raw, ch)
        return raw

    def key(self, raw):
        ab, mats = raw
        if self.lattice:
            v = list(ab)
            for col, row in self.lattice:
                q = v[col] // row[col]
                if q:
                    for i in range(self.k):
                        v[i] -= q * row[i]
            ab = tuple(v)
        return ab, mats


# ------------------------------------------------------------------ balls


@dataclass
class GroupBall:
    presentation: Presentation
    order: str
    radius: int = 0
    words: list[str] = field(default_factory=list)
    sphere_counts: list[int] = field(default_factory=list)
    sound: bool = True
    partial: bool = False
    # children[i]: letters x with words[i] + x a normal form
    children: list[str] = field(default_factory=list, repr=False)
    _raw: list = field(default_factory=list, repr=False)
    _index: dict = field(default_factory=dict, repr=False)
    _oracle: DehnOracle | None = field(default=None, repr=False)
    _inv: Invariants | None = field(default=None, repr=False)

    @property
    def ball_counts(self) -> list[int]:
        out, acc = [], 0
        for s in self.sphere_counts:
            acc += s
            out.append(acc)
        return out

    @property
    def sphere_starts(self) -> list[int]:
        starts, acc = [], 0
        for s in self.sphere_counts:
            starts.append(acc)
            acc += s
        return starts

    def sphere(self, n: int) -> list[str]:
        start = self.sphere_starts[n]
        return self.words[start : start + self.sphere_counts[n]]

    def __len__(self) -> int:
        return len(self.words)

    def locate(self, w: str) -> int | None:
        """Index of the element represented by w, or None if outside the ball."""
        w = free_reduce(w)
        for j in self._index.get(self._inv.key(self._inv.raw_of(w)), ()):
            if self._oracle.equal(w, self.words[j]):
                return j
        return None

    def normal_form(self, w: str) -> str:
        j = self.locate(w)
        if j is None:
            raise NotInBall(w)
        return self.words[j]


class BallBuilder:
    def __init__(self, p: Presentation, order: str | None = None, *, force: bool = False,
                 budget: int | None = None, workers: int = 1):
        self.oracle = DehnOracle(p, force=force)
        self.inv = Invariants(p)
        self.budget = default_budget() if budget is None else budget
        self.workers = max(1, workers)
        self.even = all(len(r) % 2 == 0 for r in p.relators)
        ball = GroupBall(p, p.alphabet.letters(order), sound=self.oracle.sound)
        ball.words.append("")
        ball.sphere_counts.append(1)
        ball.children.append("")
        ball._raw.append(self.inv.identity)
        ball._index[self.inv.key(self.inv.identity)] = [0]
        ball._oracle = self.oracle
        ball._inv = self.inv
        self.ball = ball

    def _candidates(self, start: int, stop: int):
        b = self.ball
        if self.workers > 1 and stop - start > 2000:
            chunks = []
            step = -(-(stop - start) // self.workers)
            for lo in range(start, stop, step):
                hi = min(stop, lo + step)
                chunks.append((b.words[lo:hi], b._raw[lo:hi], b.order, b.presentation, lo))
            with ProcessPoolExecutor(self.workers) as pool:
                for part in pool.map(_expand_chunk, chunks):
                    yield from part
        else:
            yield from _expand_chunk((b.words[start:stop], b._raw[start:stop], b.order, b.presentation, start), self.inv)

    def grow(self) -> None:
        b = self.ball
        n = b.radius
        start = b.sphere_starts[n]
        stop = start + b.sphere_counts[n]
        new = 0
        index = b._index
        equal = self.oracle.equal
        words = b.words
        for parent, ch, cand, raw in self._candidates(start, stop):
            key = self.inv.key(raw)
            bucket = index.get(key)
            if bucket is not None:
                hit = None
                for j in bucket:
                    if equal(cand, words[j]):
                        hit = j
                        break
                if hit is not None:
                    if self.even and start <= hit < stop:
                        raise AssertionError("bipartite violation: odd cycle found with even relators")
                    continue
            else:
                bucket = index[key] = []
            bucket.append(len(words))
            words.append(cand)
            b._raw.append(raw)
            b.children.append("")
            b.children[parent] += ch
            new += 1
            if len(words) > self.budget:
                del words[-new:]
                del b._raw[-new:]
                del b.children[-new:]
                b.partial = True
                raise BallBudgetExceeded(b, self.budget)
        b.sphere_counts.append(new)
        b.radius = n + 1


def _expand_chunk(args, inv: Invariants | None = None):
    words, raws, order, p, offset = args
    if inv is None:
        inv = Invariants(p)
    out = []
    for i, (w, raw) in enumerate(zip(words, raws)):
        last = w[-1].swapcase() if w else None
        for ch in order:
            if ch != last:
                out.append((offset + i, ch, w + ch, inv.step(raw, ch)))
    return out


def enumerate_ball(p: Presentation, radius: int, *, order: str | None = None, force: bool = False,
                   budget: int | None = None, workers: int = 1) -> GroupBall:
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    builder = BallBuilder(p, order, force=force, budget=budget, workers=workers)
    for _ in range(radius):
        builder.grow()
    return builder.ball


def distance(p: Presentation, w: str, *, ball: GroupBall | None = None, force: bool = False,
             budget: int | None = None) -> int:
    """Word length of the element w (shortest equal word)."""
    w = free_reduce(w)
    if ball is not None and ball.radius >= len(w):
        j = ball.locate(w)
        assert j is not None
        return len(ball.words[j])
    builder = BallBuilder(p, force=force, budget=budget)
    b = builder.ball
    for n in range(len(w) + 1):
        if n > 0:
            builder.grow()
        start = b.sphere_starts[n]
        j = b.locate(w)
        if j is not None and j >= start:
            return n
        if j is not None:
            return len(b.words[j])
    raise AssertionError("element not found within its own length")


def is_geodesic(p: Presentation, w: str, **kw) -> bool:
    if free_reduce(w) != w:
        return False
    return distance(p, w, **kw) == len(w)


@dataclass
class GrowthEstimate:
    root_sequence: list[float]
    ratio_sequence: list[Fraction]
    note: str


def growth_estimates(ball: GroupBall) -> GrowthEstimate:
    if ball.radius < 1:
        raise ValueError("need radius >= 1")
    bc = ball.ball_counts
    sc = ball.sphere_counts
    roots = [bc[n] ** (1.0 / n) for n in range(1, ball.radius + 1)]
    ratios = [Fraction(sc[n + 1], sc[n]) for n in range(1, ball.radius)]
    note = f"exact counts for radii 0..{ball.radius}" + (" (partial)" if ball.partial else "")
    return GrowthEstimate(roots, ratios, note)


@dataclass
class BallComparison:
    radius: int
    counts: list[tuple[int, int]]
    monotone: bool
    first_strict: int | None

    @property
    def verdict(self) -> str:
        if not self.monotone:
            return "violation"
        if self.first_strict is None:
            return f"identical through radius {self.radius}"
        return f"strict from n = {self.first_strict}"


def relators_contained(p1: Presentation, p2: Presentation) -> bool:
    if p1.alphabet != p2.alphabet:
        return False
    rs = set(symmetrize(p2).elements)
    return all(r in rs for r in p1.relators)


def compare_balls(p1: Presentation, p2: Presentation, radius: int, **kw) -> BallComparison:
    """Ball counts of a presentation and of one with more relators."""
    if not relators_contained(p1, p2):
        raise ValueError("relators of the first presentation must be relators of the second")
    b1 = enumerate_ball(p1, radius, **kw)
    b2 = enumerate_ball(p2, radius, **kw)
    return compare_counts(b1.ball_counts, b2.ball_counts)


def compare_counts(c1: Sequence[int], c2: Sequence[int]) -> BallComparison:
    pairs = list(zip(c1, c2))
    monotone = all(y <= x for x, y in pairs)
    strict = next((n for n, (x, y) in enumerate(pairs) if y < x), None)
    return BallComparison(len(pairs) - 1, pairs, monotone, strict)


def free_presentation(k: int = 2, names: Sequence[str] | None = None) -> Presentation:
    names = list(names) if names else ["a", "b", "c", "d"][:k] if k <= 4 else [f"x{i}" for i in range(k)]
    return Presentation.from_names(names)


__all__ = [
    "BallBudgetExceeded",
    "GroupBall",
    "GrowthEstimate",
    "enumerate_ball",
    "distance",
    "is_geodesic",
    "growth_estimates",
    "compare_balls",
    "inverse",
]
