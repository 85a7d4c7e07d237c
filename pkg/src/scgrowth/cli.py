"""Command-line entry point.

Exit codes: 0 success, 1 negative verdict (a WITNESS line is printed),
2 usage or input error, 3 ball budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import forbidden, grammar, report, spectra
from .cayley import BallBudgetExceeded, distance, enumerate_ball, free_presentation
from .family import FamilyConfig, separation_experiment
from .presentation import PresentationError, check_bridge_pieces, check_small_cancellation, parse_presentation
from .wordproblem import DehnOracle

OK, NEGATIVE, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        x = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if x <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _presentation(args):
    p = parse_presentation(_read(args.file))
    order = None
    if args.order:
        order = "".join(p.alphabet.parse_label(t.strip()) for t in args.order.split(","))
        p.alphabet.letters(order)
    return p, order


def _automaton(path: str) -> grammar.GeodesicAutomaton:
    return grammar.read_automaton(_read(path))


def _word(alphabet, text: str) -> str:
    return "" if text.strip() in ("", "e") else alphabet.parse_word(text)


# ----------------------------------------------------------- subcommands


def cmd_check(args) -> int:
    p, _ = _presentation(args)
    ok, rep = check_small_cancellation(p, args.lam)
    print(report.pieces_text(p, args.lam, ok, rep), end="")
    if args.bridge:
        bok, table = check_bridge_pieces(p)
        lines = [f"{p.alphabet.format(w)}: {'piece' if hit else 'not a piece'}" for w, hit in table.items()]
        print(report.section("bridge words", lines + [f"verdict: {'pass' if bok else 'fail'}"]), end="")
        if not bok:
            bad = next(w for w, hit in table.items() if hit)
            print(report.witness("bridge-piece", word=p.alphabet.format(bad)))
        ok = ok and bok
    return OK if ok else NEGATIVE


def cmd_reduce(args) -> int:
    p, _ = _presentation(args)
    oracle = DehnOracle(p, force=args.force)
    tr = oracle.trace(_word(p.alphabet, args.word))
    for st in tr.steps:
        print(f"step\tpos={st.position}\tlong={st.length}\trelator={p.alphabet.format(st.element)}"
              f"\treplacement={p.alphabet.format(st.replacement)}")
    print(p.alphabet.format(tr.final))
    if tr.final:
        print(report.witness("not-identity", final=p.alphabet.format(tr.final)))
        return NEGATIVE
    return OK


def cmd_ball(args) -> int:
    p, order = _presentation(args)
    try:
        ball = enumerate_ball(p, args.radius, order=order, force=args.force, budget=args.budget, workers=args.workers)
    except BallBudgetExceeded as exc:
        print(report.ball_table(exc.ball), end="")
        print(f"# budget {exc.budget} exceeded; table is partial", file=sys.stderr)
        return BUDGET
    print(report.ball_table(ball), end="")
    if args.plot:
        from .plotting import plot_ball
        plot_ball(ball, args.plot)
    return OK


def cmd_distance(args) -> int:
    p, _ = _presentation(args)
    w = _word(p.alphabet, args.word)
    try:
        print(distance(p, w, force=args.force, budget=args.budget))
    except BallBudgetExceeded as exc:
        print(f"budget {exc.budget} exceeded before the word was located", file=sys.stderr)
        return BUDGET
    return OK


def cmd_geodesic(args) -> int:
    p, _ = _presentation(args)
    w = _word(p.alphabet, args.word)
    try:
        d = distance(p, w, force=args.force, budget=args.budget)
    except BallBudgetExceeded as exc:
        print(f"budget {exc.budget} exceeded before the word was located", file=sys.stderr)
        return BUDGET
    from .presentation import free_reduce
    geo = free_reduce(w) == w and d == len(w)
    print(f"geodesic\t{str(geo).lower()}\tlength={len(w)}\tdistance={d}")
    if not geo:
        print(report.witness("shorter", length=len(w), distance=d))
    return OK if geo else NEGATIVE


def cmd_automaton(args) -> int:
    p, order = _presentation(args)
    try:
        ball = enumerate_ball(p, args.radius, order=order, force=args.force, budget=args.budget, workers=args.workers)
    except BallBudgetExceeded as exc:
        print(f"budget {exc.budget} exceeded", file=sys.stderr)
        return BUDGET
    if args.suffix:
        a = grammar.build_suffix_automaton(ball, args.suffix)
    else:
        a = grammar.build_cone_automaton(ball, args.rho)
    v = grammar.validate_automaton(a, ball, check_language=True)
    print(report.automaton_summary(a) + report.validation_text(v), end="")
    if not v.passed:
        print("# increase the lookahead or the radius", file=sys.stderr)
    if args.export:
        _write(args.export, grammar.write_automaton(a))
    if args.dot:
        _write(args.dot, grammar.to_dot(a))
    return OK if v.passed else NEGATIVE


def cmd_blocks(args) -> int:
    a = _automaton(args.file)
    d = grammar.decompose_blocks(a, args.tol)
    print(report.automaton_summary(a) + report.blocks_text(d), end="")
    return OK


def cmd_check_p2(args) -> int:
    a = _automaton(args.file)
    alphabet = a.alphabet
    w = _word(alphabet, args.word)
    d = grammar.decompose_blocks(a, args.tol)
    r = grammar.verify_important_implies_good(a, d, w, args.tol)
    print(report.p2_text(r), end="")
    ok = r.hypothesis_holds and all(b.gap_certified for b in r.blocks if b.v_forbidden is not None)
    return OK if ok else NEGATIVE


def cmd_spectra(args) -> int:
    m = spectra.read_matrix(_read(args.file))
    e = spectra.spectral_radius(m, args.tol)
    lines = [f"size: {len(m)}", f"irreducible: {spectra.is_irreducible(m)}",
             f"v: {report.enclosure(e)}", f"width: {report.rational(e.width)}", f"method: {e.method}"]
    print(report.section("spectral radius", lines), end="")
    if args.decrement:
        i, j = args.decrement
        c = spectra.strict_decrease(m, (i, j), args.tol)
        print(report.strict_text(c), end="")
        if not c.certified:
            print(report.witness("no-strict-decrease", entry=f"{i},{j}"))
            return NEGATIVE
    return OK


def _words_file(a, path: str) -> list[str]:
    out = []
    for ln in _read(path).splitlines():
        ln = ln.split("#", 1)[0].strip()
        if ln:
            out.append(_word(a.alphabet, ln) if a.alphabet else ln)
    return out


def cmd_forbid(args) -> int:
    a = _automaton(args.file)
    words = _words_file(a, args.words)
    v = forbidden.grammar_growth(a, args.tol)
    vn = forbidden.product_growth(a, words, args.tol)
    prod = forbidden.product_automaton(a, words)
    lines = [f"forbidden words: {len(words)}", f"product states: {prod.n_states}",
             f"v: {report.enclosure(v)}", f"v_new: {report.enclosure(vn)}",
             f"strictly smaller: {vn.below(v)}"]
    print(report.section("forbidden factors", lines), end="")
    return OK


def cmd_lemma3(args) -> int:
    a = _automaton(args.file)
    words = _words_file(a, args.words)
    r = forbidden.lemma3_check(a, words, args.N, unchecked=args.unchecked, tol=args.tol)
    print(report.bound_text(r), end="")
    return OK if r.verdict else NEGATIVE


def cmd_corollary1(args) -> int:
    a = _automaton(args.file)
    r = forbidden.corollary1_report(a, _word(a.alphabet, args.word), args.tol)
    print(report.corollary_text(r), end="")
    return OK


def cmd_family(args) -> int:
    cfg = FamilyConfig(tuple(args.E), args.c)
    try:
        r = separation_experiment(args.I, args.J, cfg, args.radius, tol=args.tol,
                                  budget=args.budget, workers=args.workers)
    except BallBudgetExceeded as exc:
        print(f"budget {exc.budget} exceeded", file=sys.stderr)
        return BUDGET
    text = report.separation_text(r)
    print(text, end="")
    if args.report:
        _write(args.report, text)
    if args.plot:
        from .plotting import plot_balls
        counts = {"free": enumerate_ball(free_presentation(2), args.radius).ball_counts}
        counts.update({name: g.ball_counts for name, g in r.groups.items()})
        plot_balls(counts, args.plot, title=f"E = {list(cfg.E)}, c = {cfg.c}")
    return NEGATIVE if r.monotone_violations else OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_fraction, default=spectra.DEFAULT_TOL,
                        help="enclosure width target (rational, default 1/10^10)")
    common.add_argument("--budget", type=_positive, default=None,
                        help="ball element cap (default from SCGROWTH_BUDGET or 5000000)")
    common.add_argument("--workers", type=_positive, default=1, help="processes for frontier expansion")
    common.add_argument("--order", default=None,
                        help="shortlex label order, e.g. 'a,a^-1,b,b^-1'")
    common.add_argument("--force", action="store_true", help="run the Dehn oracle without C'(1/6)")

    parser = argparse.ArgumentParser(prog="scgrowth", description="Growth of small cancellation groups.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        sp.set_defaults(func=fn)
        return sp

    sp = add("check", cmd_check, "small cancellation check of a presentation")
    sp.add_argument("file")
    sp.add_argument("--lambda", dest="lam", type=_fraction, default=Fraction(1, 6))
    sp.add_argument("--bridge", action="store_true", help="also test the 16 bridge words")

    sp = add("reduce", cmd_reduce, "Dehn reduction of a word")
    sp.add_argument("file")
    sp.add_argument("word")

    sp = add("ball", cmd_ball, "sphere and ball counts (TSV)")
    sp.add_argument("file")
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--plot", default=None, help="write a figure to this path")

    for name, fn in (("distance", cmd_distance), ("geodesic", cmd_geodesic)):
        sp = add(name, fn, f"{name} of a word in the group")
        sp.add_argument("file")
        sp.add_argument("word")

    sp = add("automaton", cmd_automaton, "build and validate a normal-form automaton from a ball")
    sp.add_argument("file")
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--rho", type=int, default=1)
    sp.add_argument("--suffix", type=int, default=None, help="use suffix windows of this length instead")
    sp.add_argument("--export", default=None)
    sp.add_argument("--dot", default=None)

    sp = add("blocks", cmd_blocks, "irreducible blocks of an automaton")
    sp.add_argument("file")

    sp = add("check-p2", cmd_check_p2, "check that every important block can read a word")
    sp.add_argument("file")
    sp.add_argument("--word", required=True)

    sp = add("spectra", cmd_spectra, "certified spectral radius of a matrix file")
    sp.add_argument("file")
    sp.add_argument("--decrement", type=_int_list, default=None, help="i,j entry to decrement (0-based)")

    sp = add("forbid", cmd_forbid, "growth with forbidden factors")
    sp.add_argument("file")
    sp.add_argument("--words", required=True)

    sp = add("lemma3", cmd_lemma3, "check the forbidden-factor counting bound")
    sp.add_argument("file")
    sp.add_argument("--words", required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--unchecked", action="store_true", help="allow inputs outside the hypotheses")

    sp = add("corollary1", cmd_corollary1, "growth estimate after adding a long relator")
    sp.add_argument("file")
    sp.add_argument("--word", required=True)

    sp = add("family", cmd_family, "growth separation experiment for the (a^N b^N)^c family")
    sp.add_argument("--E", type=_int_list, required=True)
    sp.add_argument("--c", type=_positive, default=3)
    sp.add_argument("--I", type=_int_list, required=True)
    sp.add_argument("--J", type=_int_list, required=True)
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--report", default=None)
    sp.add_argument("--plot", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else USAGE
    try:
        if args.command == "spectra" and args.decrement is not None and len(args.decrement) != 2:
            raise UsageError("--decrement takes two indices i,j")
        return args.func(args)
    except (UsageError, PresentationError, grammar.AutomatonError, spectra.SpectraError,
            forbidden.HypothesisError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    raise SystemExit(main())
