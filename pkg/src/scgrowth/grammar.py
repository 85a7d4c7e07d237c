"""Finite word acceptors for normal-form languages ("Markov grammars").

An automaton has states ``0..n-1``, an initial state, and labelled edges;
every state accepts.  For a group the language is one geodesic word per
element, so path counts from the initial state are sphere sizes and the
Perron root of the adjacency matrix is the growth rate.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .cayley import GroupBall
from .presentation import Alphabet, PresentationError, letter
from . import spectra
from .spectra import SpectralEnclosure


class AutomatonError(ValueError):
    pass


@dataclass(frozen=True)
class GeodesicAutomaton:
    n_states: int
    initial: int
    edges: tuple[tuple[int, str, int], ...]
    labels: tuple[str, ...]
    alphabet: Alphabet | None = None
    notes: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        for s, ch, t in self.edges:
            if not (0 <= s < self.n_states and 0 <= t < self.n_states):
                raise AutomatonError(f"edge {(s, ch, t)} out of range")
            if ch not in self.labels:
                raise AutomatonError(f"edge label {ch!r} not in label alphabet")
        if self.n_states and not 0 <= self.initial < self.n_states:
            raise AutomatonError("initial state out of range")

    @property
    def k(self) -> int:
        return len(self.labels)

    @property
    def deterministic(self) -> bool:
        seen = set()
        for s, ch, _ in self.edges:
            if (s, ch) in seen:
                return False
            seen.add((s, ch))
        return True

    def delta(self) -> dict[tuple[int, str], list[int]]:
        out: dict[tuple[int, str], list[int]] = defaultdict(list)
        for s, ch, t in self.edges:
            out[(s, ch)].append(t)
        return out

    def successors(self) -> list[list[tuple[str, int]]]:
        out: list[list[tuple[str, int]]] = [[] for _ in range(self.n_states)]
        for s, ch, t in self.edges:
            out[s].append((ch, t))
        return out

    def reachable(self) -> set[int]:
        succ = self.successors()
        seen = {self.initial}
        queue = deque([self.initial])
        while queue:
            s = queue.popleft()
            for _, t in succ[s]:
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        return seen

    def label_name(self, ch: str) -> str:
        return self.alphabet.label(ch) if self.alphabet else ch

    def accepts(self, w: str) -> bool:
        d = self.delta()
        cur = {self.initial}
        for ch in w:
            cur = {t for s in cur for t in d.get((s, ch), ())}
            if not cur:
                return False
        return True

    def words(self, max_len: int) -> list[str]:
        """Labels of all paths from the initial state up to max_len (deterministic only)."""
        succ = self.successors()
        out = []
        stack = [(self.initial, "")]
        while stack:
            s, w = stack.pop()
            out.append(w)
            if len(w) < max_len:
                for ch, t in reversed(succ[s]):
                    stack.append((t, w + ch))
        return out


def pruned(a: GeodesicAutomaton) -> GeodesicAutomaton:
    """Restrict to states reachable from the initial state, renumbered in BFS order."""
    succ = a.successors()
    order_rank = {ch: i for i, ch in enumerate(a.labels)}
    ids = {a.initial: 0}
    queue = deque([a.initial])
    while queue:
        s = queue.popleft()
        for ch, t in sorted(succ[s], key=lambda e: (order_rank[e[0]], e[1])):
            if t not in ids:
                ids[t] = len(ids)
                queue.append(t)
    edges = tuple(sorted(((ids[s], ch, ids[t]) for s, ch, t in a.edges if s in ids),
                         key=lambda e: (e[0], order_rank[e[1]], e[2])))
    return GeodesicAutomaton(len(ids), 0, edges, a.labels, a.alphabet, dict(a.notes))


def free_group_automaton(generators: int, alphabet: Alphabet | None = None) -> GeodesicAutomaton:
    """Initial state plus one state per last letter; no immediate inverses."""
    if generators < 1:
        raise AutomatonError("need at least one generator")
    if alphabet is None:
        alphabet = Alphabet(tuple("abcdefghijklmnopqrstuvwxyz"[:generators]))
    labels = tuple(alphabet.letters())
    state = {ch: i + 1 for i, ch in enumerate(labels)}
    edges = [(0, ch, state[ch]) for ch in labels]
    for x in labels:
        for y in labels:
            if y != x.swapcase():
                edges.append((state[x], y, state[y]))
    return GeodesicAutomaton(len(labels) + 1, 0, tuple(edges), labels, alphabet)


# ------------------------------------------------------- cone automata


def build_cone_automaton(ball: GroupBall, rho: int) -> GeodesicAutomaton:
    """Automaton from ball data with lookahead rho.

    Two non-identity elements are merged when the same label sequences of
    length <= rho extend their normal forms to normal forms.  Only elements
    of length <= radius - rho have complete data and are classified.
    """
    R = ball.radius
    if rho < 0:
        raise AutomatonError("rho must be nonnegative")
    if R < 2 * rho + 2:
        raise AutomatonError(f"ball radius {R} too small for rho = {rho} (need >= {2 * rho + 2})")
    words = ball.words
    n = len(words)
    lengths = [len(w) for w in words]
    pos = {w: i for i, w in enumerate(words)}
    child = [[(ch, pos[words[i] + ch]) for ch in ball.children[i]] for i in range(n)]

    intern: dict = {}
    sig = [0] * n
    for d in range(1, rho + 1):
        nxt = [None] * n
        for i in range(n):
            if lengths[i] <= R - d:
                key = tuple((ch, sig[j]) for ch, j in child[i])
                nxt[i] = intern.setdefault(key, len(intern))
        prev_sig, sig = sig, nxt
    prev = prev_sig if rho >= 1 else None

    classes: dict = {}
    cls_of = [None] * n
    members: list[list[int]] = []
    for i in range(1, n):
        if lengths[i] <= R - rho:
            c = classes.get(sig[i])
            if c is None:
                c = classes[sig[i]] = len(members) + 1
                members.append([])
            cls_of[i] = c
            members[c - 1].append(i)

    # classes by their depth rho-1 signature, to place children lacking full data
    by_prev: dict = defaultdict(list)
    if rho >= 1:
        for c, mem in enumerate(members, 1):
            by_prev[prev[mem[0]]].append(c)

    edges = []
    conflicts = guessed = 0

    def target(j):
        nonlocal guessed
        if cls_of[j] is not None:
            return cls_of[j]
        if rho >= 1 and prev[j] is not None and by_prev.get(prev[j]):
            guessed += 1
            return by_prev[prev[j]][0]
        return None

    edges.extend((0, ch, target(j)) for ch, j in child[0] if target(j) is not None)
    for c, mem in enumerate(members, 1):
        full = [i for i in mem if lengths[i] <= R - rho - 1]
        rep = full[0] if full else mem[0]
        for ch, j in child[rep]:
            t = target(j)
            if t is None:
                continue
            edges.append((c, ch, t))
        if full:
            ref = {ch: cls_of[j] for ch, j in child[rep]}
            for i in full[1:]:
                if {ch: cls_of[j] for ch, j in child[i]} != ref:
                    conflicts += 1
    a = GeodesicAutomaton(len(members) + 1, 0, tuple(edges), tuple(ball.order), ball.presentation.alphabet,
                          {"rho": rho, "radius": R, "conflicts": conflicts, "guessed_transitions": guessed})
    return pruned(a)


@dataclass
class Validation:
    passed: bool
    first_mismatch: int | None
    path_counts: list[int]
    sphere_counts: list[int]
    language_match: bool | None = None


def path_counts(a: GeodesicAutomaton, length: int) -> list[int]:
    return spectra.path_counts(adjacency_matrix(a), a.initial, length)


def validate_automaton(a: GeodesicAutomaton, ball: GroupBall, *, check_language: bool = False) -> Validation:
    """Path counts from the initial state against sphere sizes, n <= radius."""
    counts = path_counts(a, ball.radius) if a.n_states else [1] + [0] * ball.radius
    bad = next((n for n, (x, y) in enumerate(zip(counts, ball.sphere_counts)) if x != y), None)
    v = Validation(bad is None, bad, counts, list(ball.sphere_counts))
    if check_language and v.passed and a.deterministic:
        v.language_match = sorted(a.words(ball.radius)) == sorted(ball.words)
        v.passed = v.language_match
    return v


def minimize(a: GeodesicAutomaton) -> GeodesicAutomaton:
    """Moore refinement of a deterministic all-accepting automaton (missing edges reject)."""
    if not a.deterministic:
        raise AutomatonError("minimize needs a deterministic automaton")
    a = pruned(a)
    d = {(s, ch): t for s, ch, t in a.edges}
    part = [0] * a.n_states
    count = 1
    while True:
        sigs: dict = {}
        nxt = [sigs.setdefault((part[s],) + tuple(part[d[(s, ch)]] if (s, ch) in d else -1 for ch in a.labels),
                               len(sigs)) for s in range(a.n_states)]
        if len(sigs) == count:
            break
        part, count = nxt, len(sigs)
    edges = {(part[s], ch, part[t]) for s, ch, t in a.edges}
    notes = dict(a.notes, unminimized_states=a.n_states)
    return pruned(GeodesicAutomaton(count, part[a.initial], tuple(sorted(edges, key=lambda e: (e[0], a.labels.index(e[1])))),
                                    a.labels, a.alphabet, notes))


def build_suffix_automaton(ball: GroupBall, t: int) -> GeodesicAutomaton:
    """Automaton whose state is the last t letters of the normal form.

    A letter may follow when the resulting (t+1)-letter window occurs as a
    factor of some normal form in the ball (for short words: when the word
    itself is a normal form).  The result is minimized.
    """
    if t < 1:
        raise AutomatonError("suffix length must be positive")
    if ball.radius < t + 2:
        raise AutomatonError(f"ball radius {ball.radius} too small for suffix length {t} (need >= {t + 2})")
    normal = set(ball.words)
    windows = {w[i:i + t + 1] for w in ball.words for i in range(len(w) - t)}
    ids = {"": 0}
    queue = deque([""])
    edges = []
    while queue:
        s = queue.popleft()
        for ch in ball.order:
            x = s + ch
            if not (x in normal if len(s) < t else x in windows):
                continue
            y = x[-t:]
            if y not in ids:
                ids[y] = len(ids)
                queue.append(y)
            edges.append((ids[s], ch, ids[y]))
    a = GeodesicAutomaton(len(ids), 0, tuple(edges), tuple(ball.order), ball.presentation.alphabet,
                          {"suffix": t, "radius": ball.radius})
    return minimize(a)


def growth_automaton(ball: GroupBall, max_rho: int | None = None) -> tuple[GeodesicAutomaton, Validation]:
    """First automaton validating against the ball: cone types by increasing
    lookahead, then suffix windows by increasing length."""
    top = (ball.radius - 2) // 2 if max_rho is None else max_rho
    last = None
    builders = [(build_cone_automaton, r) for r in range(0, top + 1)]
    builders += [(build_suffix_automaton, t) for t in range(1, ball.radius - 1)]
    for build, arg in builders:
        a = build(ball, arg)
        v = validate_automaton(a, ball, check_language=True)
        last = (a, v)
        if v.passed:
            return a, v
    if last is None:
        raise AutomatonError(f"ball radius {ball.radius} too small for any automaton")
    return last


# ------------------------------------------------------------- matrices


def adjacency_matrix(a: GeodesicAutomaton) -> list[list[int]]:
    m = [[0] * a.n_states for _ in range(a.n_states)]
    for s, _, t in a.edges:
        m[s][t] += 1
    return m


@dataclass
class Block:
    index: int
    states: list[int]
    enclosure: SpectralEnclosure
    important: bool = False


@dataclass
class BlockDecomposition:
    blocks: list[Block]
    v: SpectralEnclosure
    matrix: list[list[int]]

    def block_of(self) -> dict[int, int]:
        return {s: b.index for b in self.blocks for s in b.states}

    def order_ok(self) -> bool:
        """No edge from a later block to an earlier one."""
        where = self.block_of()
        return all(not x or where[i] <= where[j] for i, row in enumerate(self.matrix) for j, x in enumerate(row))


def decompose_blocks(m, tol: Fraction = spectra.DEFAULT_TOL) -> BlockDecomposition:
    """Strongly connected blocks in topological order, with Perron enclosures.

    Important blocks attain v(M); overlapping enclosures are settled by an
    exact comparison of characteristic polynomials.
    """
    if isinstance(m, GeodesicAutomaton):
        m = adjacency_matrix(m)
    m = spectra.as_matrix(m)
    pairs = spectra.block_enclosures(m, tol)
    blocks = [Block(i, comp, enc) for i, (comp, enc) in enumerate(pairs)]
    if not blocks:
        return BlockDecomposition([], SpectralEnclosure(Fraction(0), Fraction(0)), m)
    lo = max(b.enclosure.lo for b in blocks)
    hi = max(b.enclosure.hi for b in blocks)
    cands = [b for b in blocks if b.enclosure.hi >= lo]
    if len(cands) == 1:
        cands[0].important = True
    else:
        subs = {b.index: spectra.submatrix(m, b.states) for b in cands}
        best = max(cands, key=lambda b: b.enclosure.lo)
        for b in cands:
            # best might not attain the max; compare against every candidate
            b.important = all(spectra.compare_exact(subs[b.index], subs[c.index]) >= 0 for c in cands if c is not b)
        assert any(b.important for b in cands), best
    return BlockDecomposition(blocks, SpectralEnclosure(lo, hi, 0, "block-max"), m)


@dataclass
class BlockFlags:
    index: int
    important: bool
    good: bool
    path: tuple[int, int] | None


def _read_inside(a: GeodesicAutomaton, states: set[int], w: str) -> tuple[int, int] | None:
    d = a.delta()
    for x in sorted(states):
        cur = {x}
        for ch in w:
            cur = {t for s in cur for t in d.get((s, ch), ()) if t in states}
            if not cur:
                break
        if cur:
            return x, min(cur)
    return None


def classify_blocks(a: GeodesicAutomaton, d: BlockDecomposition, w: str) -> list[BlockFlags]:
    out = []
    for b in d.blocks:
        states = set(b.states)
        if not w:
            good, path = bool(states), (b.states[0], b.states[0])
        else:
            path = _read_inside(a, states, w)
            good = path is not None
        out.append(BlockFlags(b.index, b.important, good, path))
    return out


@dataclass
class BlockProof:
    index: int
    good: bool
    v_block: SpectralEnclosure
    v_forbidden: SpectralEnclosure | None = None
    gap_certified: bool = False
    power_certificate: spectra.StrictDecrease | None = None
    power_note: str = ""


@dataclass
class P2Report:
    word: str
    blocks: list[BlockProof]
    degenerate: bool
    hypothesis_holds: bool
    v: SpectralEnclosure
    v_forbidden: SpectralEnclosure | None = None
    notes: list[str] = field(default_factory=list)


def block_automaton(a: GeodesicAutomaton, states: Sequence[int]) -> tuple[GeodesicAutomaton, list[int]]:
    """Sub-automaton on one block (edges inside it only); states renumbered."""
    idx = {s: i for i, s in enumerate(states)}
    edges = tuple((idx[s], ch, idx[t]) for s, ch, t in a.edges if s in idx and t in idx)
    return GeodesicAutomaton(len(states), 0, edges, a.labels, a.alphabet), list(states)


def verify_important_implies_good(a: GeodesicAutomaton, d: BlockDecomposition, w: str,
                                  tol: Fraction = spectra.DEFAULT_TOL) -> P2Report:
    """Mechanized step: every important block can read w, and forbidding w
    inside a good block strictly lowers its growth."""
    from .forbidden import block_forbidden_growth

    flags = classify_blocks(a, d, w)
    proofs = []
    notes = []
    for b, f in zip(d.blocks, flags):
        if not b.important:
            continue
        bp = BlockProof(b.index, f.good, b.enclosure)
        if f.good and w and b.enclosure.hi > 0:
            sub, states = block_automaton(a, b.states)
            vf = block_forbidden_growth(sub, [w], tol)
            t = tol
            while not vf.below(b.enclosure) and t > Fraction(1, 10**40):
                t /= 10**4
                vf = block_forbidden_growth(sub, [w], t)
                b.enclosure = spectra.spectral_radius(spectra.submatrix(d.matrix, b.states), t)
            bp.v_forbidden = vf
            bp.v_block = b.enclosure
            bp.gap_certified = vf.below(b.enclosure)
            # A_i^L with the entry of the w-path decremented, L = |w|
            x, y = f.path
            loc = {s: i for i, s in enumerate(states)}
            power = spectra.matrix_power(spectra.submatrix(d.matrix, b.states), len(w))
            if spectra.is_irreducible(power):
                cert = spectra.strict_decrease(power, (loc[x], loc[y]), tol)
                bp.power_certificate = cert
                # words avoiding w split into |w|-blocks counted by the decremented power
                if vf.lo ** len(w) > cert.v_modified.hi:
                    bp.power_note = "inconsistent: forbidden growth exceeds decremented power bound"
                else:
                    bp.power_note = "forbidden growth^L <= v(decremented power) < v(block)^L"
            else:
                bp.power_note = f"block power of exponent {len(w)} is reducible; power route unavailable"
        proofs.append(bp)
    degenerate = not w
    if degenerate:
        notes.append("empty word: every nonempty block is trivially good")
    holds = all(p.good for p in proofs)
    if not holds:
        notes.append("hypothesis failure: an important block cannot read the word")
    vfs = [p.v_forbidden for p in proofs if p.v_forbidden is not None]
    vmax = None
    if vfs and holds:
        vmax = SpectralEnclosure(max(e.lo for e in vfs), max(e.hi for e in vfs), 0, "max over important blocks")
    return P2Report(w, proofs, degenerate, holds, d.v, vmax, notes)


# ---------------------------------------------------------------- formats


def write_automaton(a: GeodesicAutomaton) -> str:
    lines = []
    if a.alphabet is not None:
        lines.append("# generators " + " ".join(a.alphabet.names))
    lines.append(f"states {a.n_states} initial {a.initial} labels {a.k}")
    for s, ch, t in a.edges:
        lines.append(f"{s} {a.label_name(ch)} {t}")
    return "\n".join(lines) + "\n"


def read_automaton(text: str) -> GeodesicAutomaton:
    names: list[str] | None = None
    header = None
    raw_edges = []
    for n, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            parts = s[1:].split()
            if parts and parts[0] == "generators":
                names = parts[1:]
            continue
        toks = s.split()
        if header is None:
            if len(toks) != 6 or toks[0] != "states" or toks[2] != "initial" or toks[4] != "labels":
                raise AutomatonError(f"line {n}: expected 'states s initial i labels k'")
            header = (int(toks[1]), int(toks[3]), int(toks[5]))
            continue
        if len(toks) != 3:
            raise AutomatonError(f"line {n}: expected 'from label to'")
        raw_edges.append((n, int(toks[0]), toks[1], int(toks[2])))
    if header is None:
        raise AutomatonError("missing header line")
    if names is None:
        names = []
        for _, _, lab, _ in raw_edges:
            nm = lab.split("^")[0]
            if nm not in names:
                names.append(nm)
    try:
        alphabet = Alphabet(tuple(names))
        edges = tuple((s, alphabet.parse_label(lab), t) for _, s, lab, t in raw_edges)
    except PresentationError as exc:
        raise AutomatonError(str(exc)) from None
    s, i, k = header
    used = {ch for _, ch, _ in edges}
    labels = tuple(alphabet.letters())
    if k == len(names):
        labels = tuple(letter(g) for g in range(len(names)))
    elif k != len(labels):
        raise AutomatonError(f"labels {k} inconsistent with {len(names)} generators")
    if not used <= set(labels):
        raise AutomatonError("edge labels outside the declared label alphabet")
    return GeodesicAutomaton(s, i, edges, labels, alphabet)


def to_dot(a: GeodesicAutomaton, name: str = "automaton") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  start [shape=point, label=""];']
    for s in range(a.n_states):
        shape = "doublecircle" if s == a.initial else "circle"
        lines.append(f'  s{s} [shape={shape}, label="{s}"];')
    lines.append(f"  start -> s{a.initial};")
    for s, ch, t in a.edges:
        lines.append(f'  s{s} -> s{t} [label="{a.label_name(ch)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def automaton_from_matrix(rows: Iterable[Iterable[int]], initial: int = 0) -> GeodesicAutomaton:
    """Nondeterministic automaton with M(i, j) parallel edges labelled 'a'."""
    m = spectra.as_matrix(list(rows))
    edges = tuple((i, "a", j) for i, row in enumerate(m) for j, x in enumerate(row) for _ in range(x))
    return GeodesicAutomaton(len(m), initial, edges, ("a",))
