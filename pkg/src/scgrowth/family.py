"""The two-generator family G_J = <a, b | (a^E(j) b^E(j))^c, j in J> at desk scale."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from . import spectra
from .cayley import GroupBall, enumerate_ball
from .forbidden import gamma_threshold
from .grammar import GeodesicAutomaton, Validation, adjacency_matrix, growth_automaton
from .presentation import (
    PieceReport,
    Presentation,
    check_bridge_pieces,
    check_small_cancellation,
)
from .spectra import SpectralEnclosure

DESK_LIMIT = 10**6
L_PRIME_READING = "L' read as {m_1, ..., m_k, m_(k+1)}"


@dataclass(frozen=True)
class FamilyConfig:
    E: tuple[int, ...]
    c: int = 3

    def __post_init__(self):
        object.__setattr__(self, "E", tuple(int(x) for x in self.E))
        if any(x < 1 for x in self.E):
            raise ValueError("E values must be positive")
        if any(x >= y for x, y in zip(self.E, self.E[1:])):
            raise ValueError("E must be strictly increasing")
        if self.c < 1:
            raise ValueError("exponent c must be at least 1")

    def check_index_set(self, J: Sequence[int]) -> tuple[int, ...]:
        J = tuple(sorted(set(J)))
        bad = [j for j in J if not 1 <= j <= len(self.E)]
        if bad:
            raise ValueError(f"indices {bad} outside 1..{len(self.E)}")
        return J


def relator_for(N: int, c: int) -> str:
    if N < 1 or c < 1:
        raise ValueError("N and c must be positive")
    return ("a" * N + "b" * N) * c


def group_name(J: Sequence[int]) -> str:
    return "G_{" + ",".join(map(str, J)) + "}"


@dataclass
class FamilyMember:
    J: tuple[int, ...]
    config: FamilyConfig
    presentation: Presentation
    c16: bool
    c150: bool
    bridge: bool
    pieces: PieceReport

    @property
    def name(self) -> str:
        return group_name(self.J)

    @property
    def relator_lengths(self) -> list[int]:
        return [len(r) for r in self.presentation.relators]


def build_group(J: Sequence[int], cfg: FamilyConfig) -> FamilyMember:
    J = cfg.check_index_set(J)
    p = Presentation.from_names(("a", "b"), [relator_for(cfg.E[j - 1], cfg.c) for j in J])
    c16, report = check_small_cancellation(p, Fraction(1, 6))
    c150, _ = check_small_cancellation(p, Fraction(1, 50))
    bridge, _ = check_bridge_pieces(p)
    return FamilyMember(J, cfg, p, c16, c150, bridge, report)


# ------------------------------------------------------------ ladder


@dataclass
class LadderResult:
    i: int
    constraint: str
    passed: bool
    detail: str
    infeasible: bool = False


def _as_fn(x) -> Callable[[int], object]:
    return x if callable(x) else (lambda _n: x)


def ladder_check(cfg: FamilyConfig, alpha_hat, beta_hat, *, k: int = 2,
                 desk_limit: int = DESK_LIMIT) -> list[LadderResult]:
    """The three growth conditions on consecutive E values, with surrogates.

    alpha_hat is a growth gap (a rational) and beta_hat a state count; each
    may be a constant or a function of 200 E(i).
    """
    alpha, beta = _as_fn(alpha_hat), _as_fn(beta_hat)
    out = []
    for i in range(1, len(cfg.E)):
        e, f = cfg.E[i - 1], cfg.E[i]
        out.append(LadderResult(i, "E(i+1) > 400 E(i)", f > 400 * e, f"{f} > {400 * e}"))
        a = Fraction(alpha(200 * e))
        # 400/sqrt(f) < a  <=>  160000 < a^2 f, for a > 0
        ok = a > 0 and 160000 < a * a * f
        out.append(LadderResult(i, "400/sqrt(E(i+1)) < alpha(200 E(i))", ok,
                                f"400/sqrt({f}) ~ {400 / f ** 0.5:.6g} vs surrogate {float(a):.6g}"))
        b = int(beta(200 * e))
        g = gamma_threshold(b, k)
        out.append(LadderResult(i, "E(i+1) > gamma(beta(200 E(i)), 2)", f > g,
                                f"{f} > gamma({b}, {k}) = {g}", infeasible=g > desk_limit))
    return out


# ---------------------------------------------------------- growth data


@dataclass
class GroupData:
    member: FamilyMember
    ball: GroupBall
    automaton: GeodesicAutomaton | None
    validation: Validation | None
    enclosure: SpectralEnclosure | None
    note: str = ""

    @property
    def name(self) -> str:
        return self.member.name

    @property
    def ball_counts(self) -> list[int]:
        return self.ball.ball_counts


def group_data(member: FamilyMember, radius: int, *, tol: Fraction = spectra.DEFAULT_TOL, **kw) -> GroupData:
    """Ball through `radius` and, when the ball sees every relator (radius at
    least half the relator length plus 2), a validated automaton with its
    growth enclosure."""
    ball = enumerate_ball(member.presentation, radius, force=not member.c16, **kw)
    longest = max(member.relator_lengths, default=0)
    if radius < longest // 2 + 2:
        return GroupData(member, ball, None, None, None,
                         f"radius {radius} does not reach past half of relator length {longest}: no growth enclosure")
    if radius < 4:
        return GroupData(member, ball, None, None, None, "radius too small for an automaton")
    a, v = growth_automaton(ball)
    if not v.passed:
        return GroupData(member, ball, a, v, None, f"no automaton validated (first mismatch at n = {v.first_mismatch})")
    enc = spectra.spectral_radius(adjacency_matrix(a), tol)
    return GroupData(member, ball, a, v, enc, f"automaton with {a.n_states} states validated through radius {radius}")


# -------------------------------------------------------------- alpha gap


@dataclass
class AlphaGap:
    gap: Fraction | None
    pairs: list[tuple[int, int, str, Fraction | None]]
    unresolved: list[tuple[int, int]]
    equal: list[tuple[int, int]]


def alpha_gap(family: Sequence[Presentation], radius: int, tol: Fraction = spectra.DEFAULT_TOL) -> AlphaGap:
    """Least certified distance between growth rates of distinct family members.

    A surrogate for the gap function restricted to this family only.
    """
    if len(family) < 2:
        raise ValueError("alpha_gap needs at least two presentations")
    mats, encs = [], []
    for p in family:
        ball = enumerate_ball(p, radius)
        a, v = growth_automaton(ball)
        if not v.passed:
            raise ValueError(f"no validated automaton for {p.format()} at radius {radius}")
        m = adjacency_matrix(a)
        mats.append(m)
        encs.append(spectra.spectral_radius(m, tol))
    pairs, unresolved, equal = [], [], []
    for i, j in combinations(range(len(family)), 2):
        ei, ej = encs[i], encs[j]
        t = tol
        while ei.overlaps(ej) and t > Fraction(1, 10**30):
            if spectra.compare_exact(mats[i], mats[j]) == 0:
                break
            t /= 10**5
            ei, ej = spectra.spectral_radius(mats[i], t), spectra.spectral_radius(mats[j], t)
        if not ei.overlaps(ej):
            lo, hi = (ei, ej) if ei.hi < ej.lo else (ej, ei)
            pairs.append((i, j, "separated", hi.lo - lo.hi))
        elif spectra.compare_exact(mats[i], mats[j]) == 0:
            equal.append((i, j))
            pairs.append((i, j, "equal", Fraction(0)))
        else:
            unresolved.append((i, j))
            pairs.append((i, j, "unresolved", None))
    gaps = [g for *_, kind, g in pairs if kind == "separated"]
    gap = Fraction(0) if equal else (min(gaps) if gaps else None)
    return AlphaGap(gap, pairs, unresolved, equal)


# ------------------------------------------------------- separation run


@dataclass
class Claim:
    left: str
    relation: str
    right: str
    certificate: str
    scope: str
    strict: bool


@dataclass
class SeparationReport:
    config: FamilyConfig
    I: tuple[int, ...]
    J: tuple[int, ...]
    roles: dict[str, tuple[int, ...]]
    radius: int
    groups: dict[str, GroupData]
    claims: list[Claim]
    monotone_violations: list[tuple[str, str, int]]
    hypotheses: dict[str, dict[str, bool]]
    status: str
    notes: list[str] = field(default_factory=list)

    @property
    def chain(self) -> dict[str, bool]:
        """Which links of v2 <= v' < v1 were established."""
        v2, vp, v1 = (group_name(self.roles[r]) for r in ("M", "L'", "J"))
        first = v2 == vp or any(c.left == v2 and c.right == vp and c.scope.startswith("growth") for c in self.claims)
        second = any(c.left == vp and c.right == v1 and c.strict and c.scope.startswith("growth") for c in self.claims)
        return {"v2 <= v'": first, "v' < v1": second}


def split_roles(I: Sequence[int], J: Sequence[int]) -> dict[str, tuple[int, ...]]:
    """Common prefix L, the larger side (v1), the other side (v2) and L'."""
    I, J = tuple(sorted(set(I))), tuple(sorted(set(J)))
    if I == J:
        raise ValueError("index sets must differ")
    k = 0
    while k < min(len(I), len(J)) and I[k] == J[k]:
        k += 1
    inf = float("inf")
    ni = I[k] if k < len(I) else inf
    nj = J[k] if k < len(J) else inf
    big, small = (J, I) if nj > ni else (I, J)
    return {"L": big[:k], "J": big, "M": small, "L'": small[:k + 1]}


def separation_experiment(I: Sequence[int], J: Sequence[int], cfg: FamilyConfig, radius: int,
                          *, tol: Fraction = spectra.DEFAULT_TOL, **kw) -> SeparationReport:
    I, J = cfg.check_index_set(I), cfg.check_index_set(J)
    roles = split_roles(I, J)
    members = {}
    for role in ("L", "L'", "J", "M"):
        idx = roles[role]
        if group_name(idx) not in members:
            members[group_name(idx)] = build_group(idx, cfg)
    for m in members.values():
        if not m.c16:
            raise ValueError(f"{m.name} fails C'(1/6); Dehn-based enumeration would be unsound")
    groups = {name: group_data(m, radius, tol=tol, **kw) for name, m in members.items()}

    claims: list[Claim] = []
    violations = []
    names = list(groups)
    for x, y in ((x, y) for x in names for y in names if x != y):
        big, small = groups[x].member, groups[y].member
        if set(big.J) <= set(small.J):
            bx, by = groups[x].ball_counts, groups[y].ball_counts
            for n in range(radius + 1):
                if by[n] > bx[n]:
                    violations.append((y, x, n))
            strict = [n for n in range(radius + 1) if by[n] < bx[n]]
            claims.append(Claim(y, "<=", x, f"relator inclusion {list(big.J)} in {list(small.J)}", "growth", False))
            if strict:
                n = strict[0]
                claims.append(Claim(y, "<", x, f"#B({n}) = {by[n]} < {bx[n]}", f"ball radius {n}", True))

    vp, v1 = group_name(roles["L'"]), group_name(roles["J"])
    if vp != v1:
        bp, b1 = groups[vp].ball_counts, groups[v1].ball_counts
        strict = [n for n in range(radius + 1) if bp[n] < b1[n]]
        if strict and not any(c.left == vp and c.right == v1 and c.strict for c in claims):
            n = strict[0]
            claims.append(Claim(vp, "<", v1, f"#B({n}) = {bp[n]} < {b1[n]}", f"ball radius {n}", True))
        ep, e1 = groups[vp].enclosure, groups[v1].enclosure
        if ep is not None and e1 is not None and ep.below(e1):
            claims.append(Claim(vp, "<", v1, f"enclosures [{ep.lo}, {ep.hi}] < [{e1.lo}, {e1.hi}]",
                                f"growth; automata validated through radius {radius}", True))
    for x, y in ((x, y) for x in names for y in names if x != y):
        ex, ey = groups[x].enclosure, groups[y].enclosure
        if ex is not None and ey is not None and ex.below(ey) and not (x == vp and y == v1):
            claims.append(Claim(x, "<", y, f"enclosures [{ex.lo}, {ex.hi}] < [{ey.lo}, {ey.hi}]",
                                f"growth; automata validated through radius {radius}", True))

    hyps = {name: {"C'(1/6)": g.member.c16, "C'(1/50)": g.member.c150, "bridge pieces": g.member.bridge}
            for name, g in groups.items()}
    full = all(all(h.values()) for h in hyps.values())
    notes = [L_PRIME_READING, f"exponent c = {cfg.c} (the asymptotic construction uses c = 100)"]
    for g in groups.values():
        notes.append(f"{g.name}: {g.note}")
    status = "theorem instance" if full else "observational"
    return SeparationReport(cfg, I, J, roles, radius, groups, claims, violations, hyps, status, notes)
