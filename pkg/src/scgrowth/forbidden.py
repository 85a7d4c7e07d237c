"""Growth of automaton languages with forbidden factors.

The avoider is a failure-function (Aho-Corasick) automaton with its
match states removed; the product with a grammar accepts exactly the
grammar's words that contain no forbidden factor.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import spectra
from .grammar import AutomatonError, GeodesicAutomaton, adjacency_matrix, pruned
from .presentation import Alphabet
from .spectra import SpectralEnclosure

LOWER = "abcdefghijklmnopqrstuvwxyz"


class HypothesisError(ValueError):
    """Inputs violate the hypotheses of the counting bound."""


def _letters(letters: int | str | Sequence[str]) -> tuple[str, ...]:
    if isinstance(letters, int):
        if not 0 <= letters <= len(LOWER):
            raise ValueError("alphabet size out of range")
        return tuple(LOWER[:letters])
    out = tuple(letters)
    if len(set(out)) != len(out):
        raise ValueError("repeated letters in alphabet")
    return out


def build_factor_avoider(letters: int | str | Sequence[str], words: Iterable[str]) -> GeodesicAutomaton:
    """Deterministic automaton for words over `letters` with no factor in `words`.

    An integer alphabet size k means the first k lowercase letters.
    """
    letters = _letters(letters)
    words = list(dict.fromkeys(words))
    goto: list[dict[str, int]] = [{}]
    hit = [False]
    for w in words:
        if not w:
            raise ValueError("forbidden words must be nonempty")
        if any(ch not in letters for ch in w):
            raise ValueError(f"forbidden word {w!r} uses letters outside the alphabet")
        s = 0
        for ch in w:
            if ch not in goto[s]:
                goto[s][ch] = len(goto)
                goto.append({})
                hit.append(False)
            s = goto[s][ch]
        hit[s] = True
    fail = [0] * len(goto)
    delta = [dict() for _ in goto]
    queue = deque()
    for ch in letters:
        t = goto[0].get(ch)
        if t is None:
            delta[0][ch] = 0
        else:
            delta[0][ch] = t
            queue.append(t)
    while queue:
        s = queue.popleft()
        hit[s] = hit[s] or hit[fail[s]]
        for ch in letters:
            t = goto[s].get(ch)
            if t is None:
                delta[s][ch] = delta[fail[s]][ch]
            else:
                fail[t] = delta[fail[s]][ch]
                delta[s][ch] = t
                queue.append(t)
    edges = tuple((s, ch, delta[s][ch]) for s in range(len(goto)) if not hit[s]
                  for ch in letters if not hit[delta[s][ch]])
    return pruned(GeodesicAutomaton(len(goto), 0, edges, letters))


def _table(a: GeodesicAutomaton) -> dict[tuple[int, str], int]:
    if not a.deterministic:
        raise AutomatonError("automaton must be deterministic")
    return {(s, ch): t for s, ch, t in a.edges}


def _product(g: GeodesicAutomaton, words: Sequence[str], starts: Sequence[int]):
    av = build_factor_avoider(g.labels, words)
    gt, at = _table(g), _table(av)
    ids: dict[tuple[int, int], int] = {}
    queue = deque()
    for q in starts:
        if (q, 0) not in ids:
            ids[(q, 0)] = len(ids)
            queue.append((q, 0))
    succ = g.successors()
    edges = []
    while queue:
        q, z = pair = queue.popleft()
        for ch, q2 in succ[q]:
            z2 = at.get((z, ch))
            if z2 is None:
                continue
            nxt = (q2, z2)
            if nxt not in ids:
                ids[nxt] = len(ids)
                queue.append(nxt)
            edges.append((ids[pair], ch, ids[nxt]))
    return ids, tuple(edges)


def product_automaton(g: GeodesicAutomaton, words: Sequence[str]) -> GeodesicAutomaton:
    """Words of g with no factor in `words`; states are reachable (grammar, avoider) pairs."""
    ids, edges = _product(g, list(words), [g.initial])
    pairs = sorted(ids, key=ids.get)
    return GeodesicAutomaton(len(ids), 0, edges, g.labels, g.alphabet, {"pairs": pairs})


def product_growth(g: GeodesicAutomaton, words: Sequence[str], tol: Fraction = spectra.DEFAULT_TOL) -> SpectralEnclosure:
    return spectra.spectral_radius(adjacency_matrix(product_automaton(g, words)), tol)


def block_forbidden_growth(block: GeodesicAutomaton, words: Sequence[str],
                           tol: Fraction = spectra.DEFAULT_TOL) -> SpectralEnclosure:
    """Growth of paths inside a block avoiding `words`, any block state allowed as start."""
    ids, edges = _product(block, list(words), range(block.n_states))
    m = [[0] * len(ids) for _ in range(len(ids))]
    for s, _, t in edges:
        m[s][t] += 1
    return spectra.spectral_radius(m, tol)


def grammar_growth(g: GeodesicAutomaton, tol: Fraction = spectra.DEFAULT_TOL) -> SpectralEnclosure:
    return spectra.spectral_radius(adjacency_matrix(pruned(g)), tol)


# -------------------------------------------------------------- bound check


@dataclass
class BoundReport:
    v: SpectralEnclosure
    v_new: SpectralEnclosure
    s: int
    k: int
    N: int
    p: int
    bound: Fraction
    bound_upper: Fraction
    verdict: bool
    hypotheses: bool
    notes: list[str] = field(default_factory=list)

    @property
    def theorem_instance(self) -> bool:
        return self.hypotheses


def bound_value(v: Fraction, s: int, k: int, N: int, p: int) -> Fraction:
    """(v^N / s^2 - 4Np) / k^s, exactly."""
    return (Fraction(v) ** N / s**2 - 4 * N * p) / Fraction(k) ** s


def lemma3_check(g: GeodesicAutomaton, words: Sequence[str], N: int, *, unchecked: bool = False,
                 tol: Fraction = spectra.DEFAULT_TOL, max_refine: int = 4) -> BoundReport:
    """Check v_new^N >= (v^N/s^2 - 4Np)/k^s for g with `words` forbidden.

    s counts reachable states and k the labels (inverse letters included).
    The verdict compares the lower end of v_new^N with the bound taken at
    the upper end of v, so a pass is certified.
    """
    g = pruned(g)
    words = list(dict.fromkeys(words))
    s, k, p = g.n_states, g.k, len(words)
    problems = []
    if N < 1:
        problems.append("N must be positive")
    if s > N:
        problems.append(f"s = {s} exceeds N = {N}")
    bad = [w for w in words if len(w) != 4 * N]
    if bad:
        problems.append(f"{len(bad)} word(s) not of length 4N = {4 * N}")
    if not words:
        problems.append("no forbidden words")
    if problems and not unchecked:
        raise HypothesisError("; ".join(problems))
    v = grammar_growth(g, tol)
    v_new = product_growth(g, words, tol) if words else v
    t = tol
    for _ in range(max_refine + 1):
        lo_b = bound_value(v.lo, s, k, N, p)
        hi_b = bound_value(v.hi, s, k, N, p)
        ok = v_new.lo ** N >= hi_b
        if ok or v_new.lo ** N < lo_b:
            break
        t /= 10**6
        v = grammar_growth(g, t)
        v_new = product_growth(g, words, t) if words else v
    notes = [f"k = {k} counts every edge label, inverse letters included"]
    if problems:
        notes.append("unchecked mode, not a theorem instance: " + "; ".join(problems))
    return BoundReport(v, v_new, s, k, N, p, lo_b, hi_b, ok, not problems, notes)


# -------------------------------------------------------------- corollary


def gamma_threshold(s: int, k: int) -> int:
    """Relator length beyond which the N-condition N > 1000 s^2 (2k)^(s+6) holds."""
    if s < 1 or k < 1:
        raise ValueError("s and k must be positive")
    return 52 * (1000 * s * s * (2 * k) ** (s + 6) + 1)


def _sqrt_bounds(n: int, digits: int = 12) -> tuple[Fraction, Fraction]:
    scale = 10**digits
    r = math.isqrt(n * scale * scale)
    return Fraction(r, scale), Fraction(r if r * r == n * scale * scale else r + 1, scale)


@dataclass
class CorollaryReport:
    word: str
    N: int
    factors: list[str]
    s: int
    generators: int
    v_h: SpectralEnclosure
    v_fb: SpectralEnclosure
    bound: tuple[Fraction, Fraction]
    gamma: int
    observational: bool
    bound_met: bool

    @property
    def length(self) -> int:
        return len(self.word)


def _generator_count(g: GeodesicAutomaton) -> int:
    if g.alphabet is not None:
        return len(g.alphabet)
    lows = {ch.lower() for ch in g.labels}
    return len(lows)


def corollary1_report(g_h: GeodesicAutomaton, w: str, tol: Fraction = spectra.DEFAULT_TOL) -> CorollaryReport:
    """Forbid every length-4N factor of w, N = floor(|w|/52), and compare with v(H) - 200/sqrt|w|."""
    n = len(w)
    N = n // 52
    if N == 0:
        raise HypothesisError(f"|w| = {n} < 52 gives N = 0")
    g = pruned(g_h)
    factors = sorted({w[i:i + 4 * N] for i in range(n - 4 * N + 1)})
    v_h = grammar_growth(g, tol)
    v_fb = product_growth(g, factors, tol)
    r_lo, r_hi = _sqrt_bounds(n)
    bound = (v_h.lo - 200 / r_lo, v_h.hi - 200 / r_hi)
    gens = _generator_count(g)
    gamma = gamma_threshold(g.n_states, gens)
    return CorollaryReport(w, N, factors, g.n_states, gens, v_h, v_fb, bound, gamma,
                           observational=not n > gamma, bound_met=v_fb.lo >= bound[1])
