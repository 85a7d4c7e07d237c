"""Plain-text renderings: TSV tables, structured text sections, DOT."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .cayley import BallComparison, GroupBall, growth_estimates
from .family import LadderResult, SeparationReport
from .forbidden import BoundReport, CorollaryReport
from .grammar import BlockDecomposition, GeodesicAutomaton, P2Report, Validation, to_dot
from .presentation import PieceReport, Presentation
from .spectra import SpectralEnclosure, StrictDecrease, decimal

DIGITS = 12


def rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def enclosure(e: SpectralEnclosure | None, digits: int = DIGITS) -> str:
    if e is None:
        return "unavailable"
    if e.exact:
        return f"{rational(e.lo)} (exact)"
    return f"[{rational(e.lo)}, {rational(e.hi)}] ~ [{decimal(e.lo, digits)}, {_ceil_decimal(e.hi, digits)}]"


def _ceil_decimal(x: Fraction, digits: int) -> str:
    """Fixed-point rendering rounded toward plus infinity."""
    scaled = math.ceil(Fraction(x) * 10**digits)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def inline(p: Presentation) -> str:
    rels = ", ".join(p.alphabet.format(r) for r in p.relators)
    return f"<{', '.join(p.alphabet.names)} | {rels}>"


def tsv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = ["\t".join(header)]
    lines += ["\t".join(str(x) for x in r) for r in rows]
    return "\n".join(lines) + "\n"


def witness(kind: str, **fields) -> str:
    """Machine-readable line accompanying a negative verdict."""
    return "WITNESS\t" + kind + "".join(f"\t{k}={v}" for k, v in fields.items())


def section(title: str, lines: Iterable[str]) -> str:
    body = "\n".join("  " + ln for ln in lines)
    return f"[{title}]\n{body}\n" if body else f"[{title}]\n"


# --------------------------------------------------------------- renderers


def ball_table(ball: GroupBall) -> str:
    sc, bc = ball.sphere_counts, ball.ball_counts
    est = growth_estimates(ball) if ball.radius >= 1 else None
    rows = []
    for n in range(ball.radius + 1):
        root = f"{est.root_sequence[n - 1]:.10f}" if est and n >= 1 else "NA"
        ratio = decimal(est.ratio_sequence[n - 1], 10) if est and 1 <= n < ball.radius else "NA"
        rows.append((n, sc[n], bc[n], root, ratio))
    head = f"# order {ball.order}" + ("  partial" if ball.partial else "") + "\n"
    return head + tsv(("n", "sphere", "ball", "root", "ratio"), rows)


def comparison_table(c: BallComparison) -> str:
    rows = [(n, x, y, x - y) for n, (x, y) in enumerate(c.counts)]
    return tsv(("n", "ball_1", "ball_2", "deficit"), rows) + f"# verdict: {c.verdict}\n"


def pieces_text(p: Presentation, lam: Fraction, ok: bool, rep: PieceReport) -> str:
    lines = [f"presentation: {inline(p)}", f"lambda: {rational(lam)}",
             f"max piece: {rep.max_piece}"]
    for i, r in enumerate(p.relators):
        lines.append(f"relator {i + 1}: length {len(r)}, longest piece {rep.max_piece_per_relator[i]}")
    lines.append(f"verdict: {'pass' if ok else 'fail'}" + (" (boundary: piece exactly lambda|r|)" if rep.boundary else ""))
    out = section("small cancellation", lines)
    if not ok and rep.failing:
        piece, elem = rep.failing
        out += witness("piece", piece=p.alphabet.format(piece), relator=p.alphabet.format(elem),
                       ratio=rational(Fraction(len(piece), len(elem)))) + "\n"
    return out


def validation_text(v: Validation) -> str:
    lines = [f"path counts: {' '.join(map(str, v.path_counts))}",
             f"sphere counts: {' '.join(map(str, v.sphere_counts))}",
             f"verdict: {'pass' if v.passed else 'fail'}"]
    if v.language_match is not None:
        lines.append(f"language equals ball normal forms: {v.language_match}")
    out = section("validation", lines)
    if not v.passed:
        n = v.first_mismatch
        if n is not None:
            out += witness("mismatch", n=n, paths=v.path_counts[n], sphere=v.sphere_counts[n]) + "\n"
        else:
            out += witness("language") + "\n"
    return out


def automaton_summary(a: GeodesicAutomaton) -> str:
    lines = [f"states: {a.n_states}", f"edges: {len(a.edges)}", f"labels: {a.k}",
             f"deterministic: {a.deterministic}"]
    lines += [f"{k}: {v}" for k, v in sorted(a.notes.items())]
    return section("automaton", lines)


def blocks_text(d: BlockDecomposition) -> str:
    lines = [f"v(M): {enclosure(d.v)}"]
    for b in d.blocks:
        lines.append(f"block {b.index}: states {' '.join(map(str, b.states))}; v = {enclosure(b.enclosure)}"
                     + ("; important" if b.important else ""))
    lines.append(f"no edge from a later block to an earlier one: {d.order_ok()}")
    return section("blocks", lines)


def p2_text(r: P2Report) -> str:
    lines = [f"word: {r.word or 'e'}", f"v(M): {enclosure(r.v)}"]
    if r.degenerate:
        lines.append("degenerate input: empty word")
    for b in r.blocks:
        lines.append(f"important block {b.index}: {'good' if b.good else 'not good'}; v = {enclosure(b.v_block)}")
        if b.v_forbidden is not None:
            lines.append(f"  forbidden growth: {enclosure(b.v_forbidden)}")
            lines.append(f"  strict gap certified by disjoint enclosures: {b.gap_certified}")
        if b.power_certificate is not None:
            c = b.power_certificate
            lines.append(f"  power matrix entry {c.entry} decremented: {enclosure(c.v_modified)} < {enclosure(c.v_original)} "
                         f"({'certified' if c.certified else 'not certified'}, {c.method})")
        if b.power_note:
            lines.append(f"  {b.power_note}")
    lines.append(f"all important blocks good: {r.hypothesis_holds}")
    lines += r.notes
    out = section("important blocks", lines)
    for b in r.blocks:
        if not b.good:
            out += witness("not-good", block=b.index) + "\n"
    return out


def strict_text(c: StrictDecrease) -> str:
    return section("strict decrease", [
        f"entry: {c.entry}",
        f"v(A): {enclosure(c.v_original)}",
        f"v(A'): {enclosure(c.v_modified)}",
        f"certified: {c.certified} ({c.method})",
    ])


def bound_text(r: BoundReport) -> str:
    lines = [f"s = {r.s}, k = {r.k}, N = {r.N}, p = {r.p}",
             f"v: {enclosure(r.v)}", f"v_new: {enclosure(r.v_new)}",
             f"bound at lower end of v: {rational(r.bound)} ~ {float(r.bound):.10g}",
             f"bound at upper end of v: {rational(r.bound_upper)} ~ {float(r.bound_upper):.10g}",
             f"v_new^N lower end: {float(r.v_new.lo ** r.N):.10g}",
             f"verdict: {'pass' if r.verdict else 'fail'}",
             f"theorem instance: {r.theorem_instance}"]
    out = section("counting bound", lines + r.notes)
    if not r.verdict:
        out += witness("bound", lhs=float(r.v_new.lo ** r.N), rhs=float(r.bound_upper)) + "\n"
    return out


def corollary_text(r: CorollaryReport) -> str:
    lines = [f"|w| = {r.length}, N = {r.N}, forbidden factors: {len(r.factors)}",
             f"s = {r.s}, generators = {r.generators}, gamma = {r.gamma}",
             f"v(H): {enclosure(r.v_h)}", f"v with factors forbidden: {enclosure(r.v_fb)}",
             f"v(H) - 200/sqrt|w|: [{float(r.bound[0]):.10g}, {float(r.bound[1]):.10g}]",
             f"forbidden growth meets the bound: {r.bound_met}",
             "status: " + ("observational (|w| not above gamma)" if r.observational else "theorem instance")]
    return section("length estimate", lines)


def ladder_text(results: Sequence[LadderResult]) -> str:
    lines = [f"i = {r.i}: {r.constraint}: {'pass' if r.passed else 'fail'} ({r.detail})"
             + ("; beyond desk scale" if r.infeasible else "") for r in results]
    return section("ladder (surrogates)", lines)


def separation_text(r: SeparationReport) -> str:
    parts = [section("configuration", [
        f"E = {list(r.config.E)}, c = {r.config.c}, radius = {r.radius}",
        f"I = {list(r.I)}, J = {list(r.J)}",
        "roles: " + ", ".join(f"{k} = {list(v)}" for k, v in r.roles.items()),
        f"status: {r.status}",
    ] + r.notes)]
    for name, g in r.groups.items():
        lines = [f"presentation: {inline(g.member.presentation)}",
                 "hypotheses: " + ", ".join(f"{k} {'holds' if v else 'fails'}" for k, v in r.hypotheses[name].items()),
                 f"ball: {' '.join(map(str, g.ball_counts))}",
                 f"growth: {enclosure(g.enclosure)}", g.note]
        parts.append(section(name, lines))
    claims = [f"{c.left} {c.relation} {c.right}  [{c.scope}]  certificate: {c.certificate}" for c in r.claims]
    chain = [f"{k}: {'established' if v else 'not established'}" for k, v in r.chain.items()]
    parts.append(section("claims", claims))
    parts.append(section("chain v2 <= v' < v1", chain))
    mono = [f"{a} > {b} at n = {n}" for a, b, n in r.monotone_violations] or ["none"]
    parts.append(section("subset monotonicity violations", mono))
    out = "\n".join(parts)
    for a, b, n in r.monotone_violations:
        out += witness("monotonicity", smaller=a, larger=b, n=n) + "\n"
    return out


def render_report(data, fmt: str = "text") -> str:
    """Render any report object of this package."""
    if fmt == "dot":
        if not isinstance(data, GeodesicAutomaton):
            raise ValueError("dot output is only available for automata")
        return to_dot(data)
    if fmt == "tsv":
        if isinstance(data, GroupBall):
            return ball_table(data)
        if isinstance(data, BallComparison):
            return comparison_table(data)
        raise ValueError(f"no tsv rendering for {type(data).__name__}")
    table = {
        GroupBall: ball_table, BallComparison: comparison_table, Validation: validation_text,
        GeodesicAutomaton: automaton_summary, BlockDecomposition: blocks_text, P2Report: p2_text,
        StrictDecrease: strict_text, BoundReport: bound_text, CorollaryReport: corollary_text,
        SeparationReport: separation_text, SpectralEnclosure: lambda e: enclosure(e) + "\n",
    }
    for cls, fn in table.items():
        if isinstance(data, cls):
            return fn(data)
    raise ValueError(f"no text rendering for {type(data).__name__}")
