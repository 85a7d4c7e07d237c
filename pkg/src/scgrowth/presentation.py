"""Group presentations, symmetrized relator sets and small cancellation checks.

Words are stored as plain strings over an internal letter alphabet: generator
``i`` is the lowercase letter ``chr(ord('a') + i)`` and its inverse is the
matching uppercase letter.  This keeps free reduction, inversion and pattern
matching cheap; :class:`Alphabet` converts between letters and the
user-facing generator names.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

MAX_GENERATORS = 26


class PresentationError(ValueError):
    """Raised for malformed presentation sources or words."""


class Symbol(NamedTuple):
    generator: int
    sign: int


def letter(generator: int, sign: int = 1) -> str:
    if not 0 <= generator < MAX_GENERATORS:
        raise PresentationError(f"generator index {generator} out of range")
    if sign not in (1, -1):
        raise PresentationError(f"sign must be +1 or -1, got {sign}")
    ch = string.ascii_lowercase[generator]
    return ch if sign == 1 else ch.upper()


def symbol_of(ch: str) -> Symbol:
    return Symbol(ord(ch.lower()) - ord("a"), 1 if ch.islower() else -1)


def to_symbols(w: str) -> list[Symbol]:
    return [symbol_of(ch) for ch in w]


def from_symbols(symbols: Sequence[Symbol | tuple[int, int]]) -> str:
    return "".join(letter(g, s) for g, s in symbols)


def inverse(w: str) -> str:
    return w[::-1].swapcase()


def free_reduce(w: str) -> str:
    out: list[str] = []
    for ch in w:
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def is_freely_reduced(w: str) -> bool:
    return all(w[i] != w[i + 1].swapcase() for i in range(len(w) - 1))


def cyclic_reduce(w: str) -> str:
    w = free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == w[j].swapcase():
        i += 1
        j -= 1
    return w[i : j + 1]


def rotations(w: str) -> list[str]:
    return [w[i:] + w[:i] for i in range(len(w))] if w else []


@dataclass(frozen=True)
class Alphabet:
    """Generator names in index order; letter ``i`` stands for ``names[i]``."""

    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise PresentationError("generator names must be distinct")
        if len(self.names) > MAX_GENERATORS:
            raise PresentationError(f"at most {MAX_GENERATORS} generators are supported")

    def __len__(self) -> int:
        return len(self.names)

    def letters(self, order: str | None = None) -> str:
        """All 2k letters; default order a < a^-1 < b < b^-1 < ..."""
        default = "".join(letter(i) + letter(i, -1) for i in range(len(self.names)))
        if order is None:
            return default
        if sorted(order) != sorted(default):
            raise PresentationError(f"order {order!r} is not a permutation of {default!r}")
        return order

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise PresentationError(f"unknown generator {name!r}") from None

    def label(self, ch: str) -> str:
        g, s = symbol_of(ch)
        return self.names[g] if s == 1 else f"{self.names[g]}^-1"

    def parse_label(self, token: str) -> str:
        name, _, exp = token.partition("^")
        if exp not in ("", "1", "-1"):
            raise PresentationError(f"bad label {token!r}")
        return letter(self.index(name), -1 if exp == "-1" else 1)

    def format(self, w: str, compress: bool = True) -> str:
        """Render a word with generator names, e.g. ``a^2 b^-1``."""
        if not w:
            return "e"
        parts = []
        for m in re.finditer(r"(.)\1*", w):
            ch, n = m.group(1), len(m.group(0))
            g, s = symbol_of(ch)
            if not compress:
                parts.extend([self.label(ch)] * n)
                continue
            exp = s * n
            parts.append(self.names[g] if exp == 1 else f"{self.names[g]}^{exp}")
        return " ".join(parts)

    def parse_word(self, text: str) -> str:
        """Parse a word expression (relator-expr grammar); not reduced."""
        return _Parser(text, self).parse_expr_line()


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relators: tuple[str, ...] = ()

    def __post_init__(self):
        k = len(self.alphabet)
        for r in self.relators:
            if not r:
                raise PresentationError("relators must be nonempty")
            if cyclic_reduce(r) != r:
                raise PresentationError(f"relator {r!r} is not cyclically reduced")
            if any(symbol_of(ch).generator >= k for ch in r):
                raise PresentationError(f"relator {r!r} uses letters outside the alphabet")

    @classmethod
    def from_names(cls, names: Sequence[str], relators: Sequence[str] = ()) -> Presentation:
        return cls(Alphabet(tuple(names)), tuple(cyclic_reduce(r) for r in relators))

    @property
    def rank(self) -> int:
        return len(self.alphabet)

    def format(self) -> str:
        lines = ["generators: " + " ".join(self.alphabet.names), "relators:"]
        lines[-1] += (" " + self.alphabet.format(self.relators[0])) if self.relators else ""
        lines.extend(self.alphabet.format(r) for r in self.relators[1:])
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<int>-?\d+)|(?P<op>[()^]))")


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet, line: int = 1):
        self.text = text
        self.alphabet = alphabet
        self.line = line
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                self._fail(pos, f"unexpected character {text[pos:].lstrip()[:1]!r}")
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def _fail(self, col: int, msg: str):
        raise PresentationError(f"line {self.line}, column {col + 1}: {msg}")

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def parse_expr_line(self) -> str:
        if not self.tokens:
            self._fail(0, "empty word expression")
        w = self._terms(top=True)
        return w

    def _terms(self, top: bool) -> str:
        parts = []
        while True:
            tok = self._peek()
            if tok is None:
                if not top:
                    self._fail(len(self.text), "missing ')'")
                break
            if tok[1] == ")":
                if top:
                    self._fail(tok[2], "unbalanced ')'")
                break
            parts.append(self._term())
        if not parts:
            tok = self._peek()
            self._fail(tok[2] if tok else len(self.text), "empty parenthesized group")
        return "".join(parts)

    def _term(self) -> str:
        kind, val, col = self.tokens[self.i]
        self.i += 1
        if kind == "name":
            try:
                atom = letter(self.alphabet.index(val))
            except PresentationError as exc:
                self._fail(col, str(exc))
        elif val == "(":
            atom = self._terms(top=False)
            self.i += 1  # the ')'
        else:
            self._fail(col, f"unexpected {val!r}")
        tok = self._peek()
        if tok and tok[1] == "^":
            self.i += 1
            nxt = self._peek()
            if nxt is None or nxt[0] != "int":
                self._fail(tok[2], "expected integer exponent after '^'")
            self.i += 1
            n = int(nxt[1])
            atom = atom * n if n >= 0 else inverse(atom) * (-n)
        return atom


def parse_presentation(text: str) -> Presentation:
    """Parse the ``generators:`` / ``relators:`` text format.

    Relators are expanded, then cyclically reduced; a relator that reduces
    to the empty word is an error.
    """
    lines = text.splitlines()
    body = [(n, ln.split("#", 1)[0]) for n, ln in enumerate(lines, 1)]
    body = [(n, ln) for n, ln in body if ln.strip()]
    if not body or not body[0][1].lstrip().startswith("generators:"):
        raise PresentationError("line 1: expected 'generators:'")
    n0, first = body[0]
    names = first.split(":", 1)[1].split()
    if not names:
        raise PresentationError(f"line {n0}: no generators given")
    for nm in names:
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", nm):
            raise PresentationError(f"line {n0}: bad generator name {nm!r}")
    alphabet = Alphabet(tuple(names))
    if len(body) < 2 or not body[1][1].lstrip().startswith("relators:"):
        raise PresentationError(f"line {body[1][0] if len(body) > 1 else n0 + 1}: expected 'relators:'")
    exprs = []
    n1, second = body[1]
    head = second.split(":", 1)[1]
    offset = len(second) - len(head)
    if head.strip():
        exprs.append((n1, head, offset))
    exprs.extend((n, ln, 0) for n, ln in body[2:])
    relators = []
    for n, expr, off in exprs:
        w = _Parser(" " * off + expr, alphabet, line=n).parse_expr_line()
        r = cyclic_reduce(w)
        if not r:
            raise PresentationError(f"line {n}: empty relator after reduction")
        relators.append(r)
    return Presentation(alphabet, tuple(relators))


# ------------------------------------------------------------ symmetrization


@dataclass(frozen=True)
class SymmetrizedSet:
    elements: tuple[str, ...]
    origin: dict[str, tuple[int, int, bool]] = field(compare=False)
    relators: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def forms_of(self, relator_index: int) -> list[str]:
        return [e for e in self.elements if self.origin[e][0] == relator_index]


def symmetrize(p: Presentation | Sequence[str]) -> SymmetrizedSet:
    relators = tuple(p.relators if isinstance(p, Presentation) else p)
    elements: list[str] = []
    origin: dict[str, tuple[int, int, bool]] = {}
    for idx, r in enumerate(relators):
        for inverted, base in ((False, r), (True, inverse(r))):
            for shift in range(len(base)):
                e = base[shift:] + base[:shift]
                if e not in origin:
                    origin[e] = (idx, shift, inverted)
                    elements.append(e)
    return SymmetrizedSet(tuple(elements), origin, relators)


def _lcp(u: str, v: str) -> int:
    n = min(len(u), len(v))
    i = 0
    while i < n and u[i] == v[i]:
        i += 1
    return i


@dataclass
class PieceReport:
    max_piece_per_relator: list[int]
    # (piece, element, other element) with piece the longest common prefix
    witnesses: list[tuple[str, str, str]]
    longest: dict[str, tuple[str, str]]
    lambda_value: Fraction | None = None
    passed: bool | None = None
    failing: tuple[str, str] | None = None
    boundary: bool = False

    @property
    def max_piece(self) -> int:
        return max(self.max_piece_per_relator, default=0)


def compute_pieces(s: SymmetrizedSet) -> PieceReport:
    """Longest piece of every element of R_*.

    In sorted order the longest common prefix of an element with any other
    element is attained at one of its two neighbours.
    """
    elems = sorted(s.elements)
    longest: dict[str, tuple[str, str]] = {}
    for i, e in enumerate(elems):
        best, partner = 0, ""
        for j in (i - 1, i + 1):
            if 0 <= j < len(elems):
                n = _lcp(e, elems[j])
                if n > best:
                    best, partner = n, elems[j]
        longest[e] = (e[:best], partner)
    per_relator = []
    for r in s.relators:
        forms = {r[i:] + r[:i] for i in range(len(r))}
        forms |= {inverse(f) for f in forms}
        per_relator.append(max(len(longest[f][0]) for f in forms))
    witnesses = []
    seen = set()
    for e in s.elements:
        piece, partner = longest[e]
        if piece:
            key = (piece, *sorted((e, partner)))
            if key not in seen:
                seen.add(key)
                witnesses.append(key)
    return PieceReport(per_relator, witnesses, longest)


def check_small_cancellation(p: Presentation, lam: Fraction | int | str) -> tuple[bool, PieceReport]:
    """C'(lam): every piece u of every r in R_* has |u| < lam |r|."""
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    s = symmetrize(p)
    rep = compute_pieces(s)
    rep.lambda_value = lam
    worst = None
    for e in s.elements:
        piece, _ = rep.longest[e]
        if piece and len(piece) >= lam * len(e):
            slack = len(piece) - lam * len(e)
            if worst is None or slack > worst[0] or (slack == worst[0] and len(piece) > len(worst[1])):
                worst = (slack, piece, e)
    rep.passed = worst is None
    if worst is not None:
        rep.failing = (worst[1], worst[2])
        rep.boundary = worst[0] == 0
    return rep.passed, rep


BRIDGE_TEMPLATES = ("aba", "bab")


def bridge_words() -> list[str]:
    out = []
    for tpl in BRIDGE_TEMPLATES:
        for e1 in (1, -1):
            for e2 in (1, -1):
                for e3 in (1, -1):
                    out.append("".join(c if s == 1 else c.upper() for c, s in zip(tpl, (e1, e2, e3))))
    return out


def check_bridge_pieces(p: Presentation) -> tuple[bool, dict[str, bool]]:
    """No word x^e y^d x^z (x != y in {a, b}, any signs) may be a piece.

    Returns the overall verdict and, per pattern, whether it is a piece.
    """
    if p.rank != 2:
        raise PresentationError("bridge-piece check needs exactly two generators")
    s = symmetrize(p)
    counts: dict[str, int] = {}
    for e in s.elements:
        if len(e) >= 3:
            counts[e[:3]] = counts.get(e[:3], 0) + 1
    verdicts = {u: counts.get(u, 0) >= 2 for u in bridge_words()}
    return not any(verdicts.values()), verdicts
