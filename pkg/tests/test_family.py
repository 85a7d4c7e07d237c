from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from scgrowth.cayley import compare_counts, enumerate_ball
from scgrowth.family import (FamilyConfig, alpha_gap, build_group, group_data, group_name, ladder_check,
                             relator_for, separation_experiment, split_roles)
from scgrowth.forbidden import gamma_threshold
from scgrowth.presentation import Presentation

CFG = FamilyConfig((2, 5), 3)


def test_relator_examples():
    assert relator_for(2, 3) == "aabbaabbaabb"
    assert relator_for(1, 1) == "ab"
    with pytest.raises(ValueError):
        relator_for(0, 2)


@given(st.integers(1, 30), st.integers(1, 30))
def test_relator_length(N, c):
    assert len(relator_for(N, c)) == 2 * N * c


def test_config_validation():
    with pytest.raises(ValueError):
        FamilyConfig((3, 2))
    with pytest.raises(ValueError):
        FamilyConfig((1, 2), 0)
    with pytest.raises(ValueError):
        CFG.check_index_set([3])


def test_build_group_examples():
    free = build_group([], CFG)
    assert free.presentation.relators == () and free.c16
    g = build_group([1], FamilyConfig((2,), 3))
    assert g.presentation.relators == ("aabb" * 3,)
    both = build_group([1, 2], CFG)
    assert len(both.presentation.relators) == 2
    assert len(both.pieces.max_piece_per_relator) == 2
    assert isinstance(both.c16, bool) and isinstance(both.bridge, bool)
    assert group_name([1, 2]) == "G_{1,2}"


def test_ladder_examples():
    r = ladder_check(FamilyConfig((1, 500)), Fraction(1, 10), 5)
    assert r[0].passed
    r = ladder_check(FamilyConfig((1, 300)), Fraction(1, 10), 5)
    assert not r[0].passed
    gamma = [x for x in r if x.constraint.startswith("E(i+1) > gamma")][0]
    assert gamma.infeasible and not gamma.passed
    assert str(gamma_threshold(5, 2)) in gamma.detail


def test_ladder_alpha_exact_comparison():
    # 400/sqrt(160000) = 1 exactly: a gap of 1 must not pass, a gap just above must
    cfg = FamilyConfig((1, 160000))
    alpha = [x for x in ladder_check(cfg, 1, 1) if "alpha" in x.constraint][0]
    assert not alpha.passed
    alpha = [x for x in ladder_check(cfg, Fraction(1001, 1000), 1) if "alpha" in x.constraint][0]
    assert alpha.passed


@given(st.lists(st.integers(1, 50), min_size=2, max_size=4, unique=True))
def test_relator_lengths_scale_with_ladder(E):
    E = sorted(E)
    cfg = FamilyConfig(tuple(E), 3)
    lengths = [len(relator_for(e, cfg.c)) for e in E]
    for (e, f), (x, y) in zip(zip(E, E[1:]), zip(lengths, lengths[1:])):
        if f > 400 * e:
            assert y > 400 * x


def test_alpha_gap_examples():
    free = Presentation.from_names("ab")
    with pytest.raises(ValueError):
        alpha_gap([free], 6)
    ab6 = Presentation.from_names("ab", ["ab" * 6])
    g = alpha_gap([free, ab6], 10)
    assert g.gap is not None and g.gap > 0 and g.pairs[0][2] == "separated"
    g = alpha_gap([ab6, ab6], 10)
    assert g.gap == 0 and g.equal == [(0, 1)]


def test_split_roles():
    assert split_roles([1], [2]) == {"L": (), "J": (2,), "M": (1,), "L'": (1,)}
    r = split_roles([1, 2, 4], [1, 2, 3])
    assert r == {"L": (1, 2), "J": (1, 2, 4), "M": (1, 2, 3), "L'": (1, 2, 3)}
    r = split_roles([1], [1, 3])
    assert r["J"] == (1,) and r["M"] == (1, 3) and r["L'"] == (1, 3)
    with pytest.raises(ValueError):
        split_roles([1], [1])


def test_subset_monotonicity_of_balls():
    cfg = FamilyConfig((1, 2), 7)
    balls = {J: enumerate_ball(build_group(J, cfg).presentation, 8).ball_counts
             for J in [(), (1,), (2,), (1, 2)]}
    for small in balls:
        for big in balls:
            if set(small) <= set(big):
                assert compare_counts(balls[small], balls[big]).monotone


@pytest.fixture(scope="module")
def report():
    return separation_experiment([1], [2], CFG, 10)


def test_separation_example(report):
    assert report.roles["L'"] == (1,)
    gi = report.groups["G_{1}"]
    free = enumerate_ball(Presentation.from_names("ab"), 10).ball_counts
    assert all(x <= y for x, y in zip(gi.ball_counts, free))
    assert [n for n in range(11) if gi.ball_counts[n] < free[n]][0] == 6
    assert not report.monotone_violations
    assert report.status == "observational"
    assert report.hypotheses["G_{1}"]["C'(1/6)"]


def test_every_strict_claim_has_certificate(report):
    for c in report.claims:
        if c.strict:
            assert c.certificate.startswith("#B(") or c.certificate.startswith("enclosures")


def test_chain_on_empty_vs_single():
    r = separation_experiment([], [1], CFG, 8)
    assert r.roles["J"] == ()
    g = r.groups["G_{1}"]
    assert g.enclosure is not None and g.enclosure.hi < 3
    assert r.chain["v' < v1"]


def test_identical_sets_rejected():
    with pytest.raises(ValueError):
        separation_experiment([1], [1], CFG, 4)


def test_group_data_needs_radius():
    d = group_data(build_group([2], CFG), 6)
    assert d.enclosure is None and "does not reach" in d.note
