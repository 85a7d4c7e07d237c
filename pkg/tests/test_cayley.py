from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import ab6_normal_form, reduced_words
from scgrowth.cayley import (BallBudgetExceeded, compare_balls, distance, enumerate_ball,
                             free_presentation, growth_estimates, is_geodesic)
from scgrowth.presentation import Presentation

FREE = free_presentation(2)
AB6 = Presentation.from_names("ab", ["ab" * 6])
Q = Presentation.from_names("ab", ["aabb" * 3])


def power(N: int, c: int) -> Presentation:
    return Presentation.from_names("ab", [("a" * N + "b" * N) * c])


@pytest.fixture(scope="module")
def ab6_ball():
    return enumerate_ball(AB6, 8)


@pytest.fixture(scope="module")
def exact_ab6():
    """Distance and shortlex-least geodesic of every element of length <= 8, from the exact normal form."""
    first = {}
    for w in reduced_words("aAbB", 8):
        first.setdefault(ab6_normal_form(w), w)
    return first


def test_free_ball_counts():
    assert enumerate_ball(FREE, 3).ball_counts == [1, 5, 17, 53]


def test_relator_has_no_effect_below_half_length():
    assert enumerate_ball(AB6, 3).ball_counts[3] == 53


def test_radius_zero():
    for p in (FREE, AB6, Q):
        assert enumerate_ball(p, 0).ball_counts == [1]


def test_negative_radius_rejected():
    with pytest.raises(ValueError):
        enumerate_ball(FREE, -1)


def test_refuses_non_c16():
    bad = Presentation.from_names("ab", ["aaab", "aaaB"])
    with pytest.raises(ValueError):
        enumerate_ball(bad, 2)
    with pytest.warns(Warning):
        ball = enumerate_ball(bad, 2, force=True)
    assert not ball.sound


def test_budget_marks_partial():
    with pytest.raises(BallBudgetExceeded) as info:
        enumerate_ball(FREE, 6, budget=100)
    ball = info.value.ball
    assert ball.partial
    assert ball.ball_counts == [1, 5, 17, 53][: len(ball.ball_counts)]


def test_distance_examples():
    assert distance(AB6, "ab" * 3) == 6
    assert distance(AB6, "ab" * 4) == 4
    assert distance(AB6, "") == 0


def test_geodesic_examples():
    assert not is_geodesic(AB6, "ab" * 4)
    assert not is_geodesic(FREE, "aA")
    assert not is_geodesic(Q, "aA")
    assert is_geodesic(AB6, "ab" * 3)


def test_square_of_short_relator_root_is_not_geodesic():
    # (a^2 b^2)^2 is two thirds of the relator (a^2 b^2)^3, so Dehn shortens it to its
    # complement (b^-2 a^-2), which has length 4
    assert distance(Q, "aabb" * 2) == 4
    assert not is_geodesic(Q, "aabb" * 2)


@pytest.mark.parametrize("N", [2, 3])
@pytest.mark.parametrize("k", [1, 2])
def test_powers_of_root_geodesic_when_well_below_half(N, k):
    # with c = 5, (a^N b^N)^k for k <= 2 is at most 2/5 of the relator
    p = power(N, 5)
    assert is_geodesic(p, ("a" * N + "b" * N) * k)
    assert is_geodesic(p, "b" * k)


def test_growth_estimates_free():
    ball = enumerate_ball(FREE, 10)
    est = growth_estimates(ball)
    assert all(r == 3 for r in est.ratio_sequence)
    assert ball.ball_counts[10] == 118097
    assert est.root_sequence[-1] == pytest.approx(118097 ** 0.1)
    assert est.root_sequence[0] == 5
    with pytest.raises(ValueError):
        growth_estimates(enumerate_ball(FREE, 0))


def test_estimates_positive_and_bounded(ab6_ball):
    est = growth_estimates(ab6_ball)
    assert all(x > 0 for x in est.root_sequence)
    assert all(x > 0 for x in est.ratio_sequence)
    # #B(n)^(1/n) exceeds 2k - 1 for every finite n (already in the free group), so the
    # usable bound is the free group's own root sequence, which tends to 2k - 1
    free = growth_estimates(enumerate_ball(FREE, ab6_ball.radius))
    assert all(x <= y + 1e-12 for x, y in zip(est.root_sequence, free.root_sequence))
    assert free.root_sequence[-1] > 3


def test_compare_balls_identical_and_equal_below_half():
    assert compare_balls(AB6, AB6, 4).first_strict is None
    c = compare_balls(FREE, AB6, 5)
    assert c.monotone and c.first_strict is None


def test_compare_balls_deficit_at_half_length():
    c = compare_balls(FREE, AB6, 7)
    assert c.monotone and c.first_strict == 6
    free6, g6 = c.counts[6]
    assert free6 == 1457
    # the identified pairs at length 6 are (ab)^3 = (b^-1 a^-1)^3 and (ba)^3 = (a^-1 b^-1)^3
    assert free6 - g6 == 2


def test_compare_balls_rejects_wrong_direction():
    with pytest.raises(ValueError):
        compare_balls(AB6, FREE, 3)


def test_ball_matches_exact_normal_form(ab6_ball, exact_ab6):
    # sphere counts, geodesicity and shortlex-least representatives
    dist = {}
    for key, w in exact_ab6.items():
        dist.setdefault(len(w), []).append(w)
    for n in range(9):
        assert ab6_ball.sphere(n) == sorted(dist[n], key=lambda w: ["aAbB".index(ch) for ch in w])
    keys = [ab6_normal_form(w) for w in ab6_ball.words]
    assert len(set(keys)) == len(keys)


def test_ball_invariants(ab6_ball):
    b = ab6_ball
    assert b.sphere_counts[0] == 1
    acc = 0
    for s, t in zip(b.sphere_counts, b.ball_counts):
        acc += s
        assert t == acc
    for n in range(b.radius + 1):
        assert all(len(w) == n for w in b.sphere(n))


def test_locate_agrees_with_exact_partition(ab6_ball):
    rng = random.Random(3)
    for _ in range(300):
        w = "".join(rng.choice("aAbB") for _ in range(rng.randrange(13)))
        j = ab6_ball.locate(w)
        nf = ab6_normal_form(w)
        if j is None:
            assert all(ab6_normal_form(x) != nf for x in ab6_ball.words)
        else:
            assert ab6_normal_form(ab6_ball.words[j]) == nf


def test_worker_count_does_not_change_result():
    b1 = enumerate_ball(Q, 9)
    b2 = enumerate_ball(Q, 9, workers=3)
    assert b1.words == b2.words and b1.sphere_counts == b2.sphere_counts


def test_custom_order_is_recorded():
    b = enumerate_ball(FREE, 2, order="bBaA")
    assert b.order == "bBaA"
    assert b.sphere(1) == ["b", "B", "a", "A"]


@pytest.mark.parametrize("p", [AB6, Q, power(1, 7), Presentation.from_names("ab", ["aabb" * 7, "aaabbb" * 7])])
def test_free_agreement_below_half_length(p):
    half = min(min(len(r) for r in p.relators) // 2, 8)
    ball = enumerate_ball(p, half)
    free = enumerate_ball(free_presentation(len(p.alphabet.names)), half)
    assert ball.sphere_counts[:half] == free.sphere_counts[:half]


def test_odd_relators_use_full_checking():
    p = Presentation.from_names("ab", ["abababa" + "BBabAA" + "bab"])
    from scgrowth.presentation import check_small_cancellation
    from fractions import Fraction
    if check_small_cancellation(p, Fraction(1, 6))[0]:
        b = enumerate_ball(p, 7)
        assert b.ball_counts[:4] == [1, 5, 17, 53]


def test_monotonicity_adding_relators():
    two = Presentation.from_names("ab", ["aabb" * 7, "aaabbb" * 7])
    c = compare_balls(Presentation.from_names("ab", ["aabb" * 7]), two, 8)
    assert c.monotone
    c = compare_balls(FREE, Q, 8)
    assert c.monotone and c.first_strict == 6


words = st.text(alphabet="aAbB", max_size=5)


@pytest.fixture(scope="module")
def ab6_ball10():
    return enumerate_ball(AB6, 10)


@settings(max_examples=40)
@given(u=words, v=words)
def test_distance_triangle(ab6_ball10, u, v):
    d = lambda w: distance(AB6, w, ball=ab6_ball10)
    du, dv, duv = d(u), d(v), d(u + v)
    assert du <= len(u) and dv <= len(v)
    assert duv <= du + dv


@settings(max_examples=40)
@given(w=st.text(alphabet="aAbB", max_size=10))
def test_distance_matches_exact(exact_ab6, ab6_ball10, w):
    nf = ab6_normal_form(w)
    d = distance(AB6, w, ball=ab6_ball10)
    assert d <= len(w)
    if d <= 8:
        assert len(exact_ab6[nf]) == d
