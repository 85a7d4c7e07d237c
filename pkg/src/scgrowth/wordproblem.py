"""Dehn's algorithm for C'(1/6) presentations."""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .presentation import (
    Presentation,
    SymmetrizedSet,
    check_small_cancellation,
    free_reduce,
    inverse,
    symmetrize,
)


class UnsoundOracleWarning(UserWarning):
    """The presentation is not C'(1/6); Dehn reduction may miss identities."""


@dataclass(frozen=True)
class DehnStep:
    position: int
    element: str
    length: int
    replacement: str


@dataclass
class DehnTrace:
    word: str
    steps: list[DehnStep] = field(default_factory=list)
    final: str = ""


class DehnOracle:
    """Precompiled long-prefix patterns of a symmetrized set.

    A long prefix of r in R_* is a prefix u with 2|u| > |r|; it is replaced
    by the inverse of the remaining suffix.  The alternation is ordered
    longest first, so ``re.search`` yields the leftmost-longest match.
    """

    def __init__(self, s: SymmetrizedSet | Presentation, *, force: bool = False):
        if isinstance(s, Presentation):
            sound, _ = check_small_cancellation(s, Fraction(1, 6))
            if not sound:
                if not force:
                    raise ValueError("presentation is not C'(1/6); pass force=True for unsound use")
                warnings.warn("presentation is not C'(1/6): Dehn oracle is unsound", UnsoundOracleWarning)
            self.sound = sound
            s = symmetrize(s)
        else:
            self.sound = True
        self.symmetrized = s
        rules: dict[str, tuple[str, str, int]] = {}
        for r in s.elements:
            for n in range(len(r) // 2 + 1, len(r) + 1):
                u = r[:n]
                repl = inverse(r[n:])
                if u not in rules or len(repl) < len(rules[u][1]):
                    rules[u] = (r, repl, n)
        self.rules = rules
        pats = sorted(rules, key=lambda u: (-len(u), u))
        self._pattern = re.compile("|".join(re.escape(u) for u in pats)) if pats else None

    def reduce(self, w: str) -> str:
        w = free_reduce(w)
        pat = self._pattern
        if pat is None:
            return w
        while True:
            m = pat.search(w)
            if m is None:
                return w
            _, repl, _ = self.rules[m.group(0)]
            w = free_reduce(w[: m.start()] + repl + w[m.end() :])

    def trace(self, w: str) -> DehnTrace:
        out = DehnTrace(word=w)
        w = free_reduce(w)
        while self._pattern is not None:
            m = self._pattern.search(w)
            if m is None:
                break
            r, repl, n = self.rules[m.group(0)]
            out.steps.append(DehnStep(m.start(), r, n, repl))
            w = free_reduce(w[: m.start()] + repl + w[m.end() :])
        out.final = w
        return out

    def is_identity(self, w: str) -> bool:
        return self.reduce(w) == ""

    def equal(self, u: str, v: str) -> bool:
        return self.reduce(u + inverse(v)) == ""


def dehn_reduce(w: str, s: SymmetrizedSet | DehnOracle) -> DehnTrace:
    oracle = s if isinstance(s, DehnOracle) else DehnOracle(s)
    return oracle.trace(w)


def is_identity(w: str, s: SymmetrizedSet | DehnOracle) -> bool:
    oracle = s if isinstance(s, DehnOracle) else DehnOracle(s)
    return oracle.is_identity(w)


def equal(u: str, v: str, s: SymmetrizedSet | DehnOracle) -> bool:
    oracle = s if isinstance(s, DehnOracle) else DehnOracle(s)
    return oracle.equal(u, v)
