from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import brute_pieces, inv, reduce_word
from scgrowth.presentation import (
    Alphabet,
    Presentation,
    PresentationError,
    bridge_words,
    check_bridge_pieces,
    check_small_cancellation,
    compute_pieces,
    cyclic_reduce,
    free_reduce,
    inverse,
    is_freely_reduced,
    parse_presentation,
    symmetrize,
)

words = st.text(alphabet="aAbB", max_size=14)
reduced = words.map(reduce_word)


def P(*rels, names="ab"):
    return Presentation.from_names(tuple(names), list(rels))


def test_parse_expands_powers():
    p = parse_presentation("generators: a b\nrelators: (a^2 b^2)^3")
    assert p.relators == ("aabbaabbaabb",)


def test_parse_commutator_and_negative_powers():
    p = parse_presentation("generators: a b\nrelators: (a b a^-1 b^-1)")
    assert p.relators == ("abAB",)
    q = parse_presentation("generators: x y\nrelators: (x y)^-2")
    assert q.relators == ("BABA",)  # letters encode generator indices


def test_parse_empty_after_reduction():
    with pytest.raises(PresentationError, match="empty relator"):
        parse_presentation("generators: a b\nrelators: a a^-1")


def test_parse_relators_on_following_lines_and_comments():
    p = parse_presentation("# surface\ngenerators: a b\nrelators:\n  a^3 b   # first\n  a^3 b^-1\n")
    assert p.relators == ("aaab", "aaaB")


@pytest.mark.parametrize("text, where", [
    ("generators: a b\nrelators: a c", "line 2"),
    ("generators: a b\nrelators: (a b", "line 2"),
    ("relators: a", "line 1"),
    ("generators: a b\nrelators: a ^", "line 2"),
])
def test_parse_errors_report_position(text, where):
    with pytest.raises(PresentationError, match=where):
        parse_presentation(text)


def test_free_and_cyclic_reduce_examples():
    assert free_reduce("aAb") == "b"
    assert free_reduce("") == ""
    assert free_reduce("abBA") == ""
    assert cyclic_reduce("abA") == "b"
    assert cyclic_reduce("abab") == "abab"
    assert cyclic_reduce("A" + "ab" + "a") == "ba"


@given(words)
def test_free_reduce_matches_stack_oracle(w):
    r = free_reduce(w)
    assert r == reduce_word(w)
    assert is_freely_reduced(r)


@given(words)
def test_cyclic_reduce_is_cyclically_reduced_conjugate(w):
    r = cyclic_reduce(w)
    assert is_freely_reduced(r)
    assert not r or r[0] != r[-1].swapcase() or len(r) == 1
    assert len(r) <= len(reduce_word(w))


@given(words)
def test_inverse_is_involution(w):
    assert inverse(inverse(w)) == w
    assert reduce_word(w + inverse(w)) == ""


def test_alphabet_formatting_round_trip():
    al = Alphabet(("a", "b"))
    assert al.format("aaB") == "a^2 b^-1"
    assert al.format("") == "e"
    assert al.parse_word("a^2 b^-1") == "aaB"
    assert al.parse_label("b^-1") == "B"


def test_symmetrize_examples():
    assert set(symmetrize(P("aaa")).elements) == {"aaa", "AAA"}
    assert set(symmetrize(P("abab")).elements) == {"abab", "baba", "BABA", "ABAB"}
    assert len(symmetrize(P())) == 0


@given(st.lists(reduced.map(cyclic_reduce).filter(bool), min_size=1, max_size=3))
def test_symmetrize_closed_and_idempotent(rels):
    s = symmetrize(P(*rels))
    elems = set(s.elements)
    assert len(elems) == len(s.elements)
    for e in elems:
        assert e[1:] + e[:1] in elems
        assert inverse(e) in elems
    assert set(symmetrize(P(*sorted(elems))).elements) == elems
    assert len(elems) <= sum(2 * len(r) for r in rels)


def test_single_non_power_relator_has_full_symmetrization():
    assert len(symmetrize(P("aabbaB")).elements) == 12


def test_pieces_examples():
    assert compute_pieces(symmetrize(P("aaa"))).max_piece == 0
    rep = compute_pieces(symmetrize(P("aaab", "aaaB")))
    assert rep.max_piece == 3
    pieces = {w for w, *_ in rep.witnesses}
    assert {"aaa"} <= pieces or any(p.startswith("aaa") for p in pieces)
    surf = P("abABcdCD", names="abcd")
    assert compute_pieces(symmetrize(surf)).max_piece == 1


@given(st.lists(reduced.map(cyclic_reduce).filter(bool), min_size=1, max_size=3))
def test_pieces_match_brute_force(rels):
    p = P(*rels)
    rep = compute_pieces(symmetrize(p))
    best, per_elem = brute_pieces(list(p.relators))
    assert rep.max_piece == best
    for e, (piece, partner) in rep.longest.items():
        assert len(piece) == per_elem[e]
        assert e.startswith(piece) and partner.startswith(piece) and e != partner
    for i, r in enumerate(p.relators):
        forms = [e for e in per_elem if e in symmetrize([r]).elements]
        assert rep.max_piece_per_relator[i] == max(per_elem[e] for e in forms)


@given(st.lists(reduced.map(cyclic_reduce).filter(bool), min_size=1, max_size=3))
def test_witness_pieces_are_common_prefixes_and_prefix_closed(rels):
    s = symmetrize(P(*rels))
    rep = compute_pieces(s)
    elems = set(s.elements)
    for piece, e1, e2 in rep.witnesses:
        assert e1 != e2 and e1 in elems and e2 in elems
        assert e1.startswith(piece) and e2.startswith(piece)
        shorter = piece[:-1]
        assert not shorter or sum(x.startswith(shorter) for x in elems) >= 2


def test_small_cancellation_examples():
    ok, rep = check_small_cancellation(P("abABcdCD", names="abcd"), Fraction(1, 6))
    assert ok and rep.max_piece == 1
    ok, rep = check_small_cancellation(P("aaab", "aaaB"), Fraction(1, 6))
    assert not ok
    piece, elem = rep.failing
    assert piece == "aaa" and len(elem) == 4
    assert check_small_cancellation(P(), Fraction(1, 100))[0]


def test_boundary_case_is_a_flagged_failure():
    # (a^2 b^2)^3 has pieces of length 1 and |r| = 12; lambda = 1/12 hits equality
    ok, rep = check_small_cancellation(P("aabb" * 3), Fraction(1, 12))
    assert not ok and rep.boundary


@given(st.lists(reduced.map(cyclic_reduce).filter(bool), min_size=1, max_size=2),
       st.fractions(min_value=Fraction(1, 20), max_value=1), st.fractions(min_value=0, max_value=1))
def test_small_cancellation_monotone_in_lambda(rels, lam, extra):
    p = P(*rels)
    if check_small_cancellation(p, lam)[0]:
        assert check_small_cancellation(p, lam + extra + Fraction(1, 1000))[0]


def test_bridge_words_and_checks():
    ws = bridge_words()
    assert len(ws) == 16 and len(set(ws)) == 16
    assert check_bridge_pieces(P("aabb" * 3))[0]
    ok, table = check_bridge_pieces(P("abAb", "abAB"))
    assert not ok and table["abA"]
    assert check_bridge_pieces(P())[0]
    with pytest.raises(PresentationError):
        check_bridge_pieces(P("abc", names="abc"))


def test_presentation_validation():
    with pytest.raises(PresentationError):
        Presentation(Alphabet(("a", "b")), ("aA",))
    with pytest.raises(PresentationError):
        Alphabet(("a", "a"))
    assert inv("aB") == "bA"
