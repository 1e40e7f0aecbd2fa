import math

import pytest
from hypothesis import given, strategies as st

from whittle_kf.errors import ClassificationInconclusive, InvalidArgument
from whittle_kf.moebius import ArmParams, fixed_point, phi_word, y0, y1
from whittle_kf.threshold import (orbit_pair, rho, threshold_word_by_orbit, threshold_word_by_tree,
                                  word_interval)
from whittle_kf.words import OmegaWord, christoffel_from_slope, enumerate_tree, is_christoffel

from conftest import arm_params

P = ArmParams(0.2, 1.0)


def test_orbit_pair_below_y1():
    orb = orbit_pair(0.3, P, 6)
    assert orb.lower_actions == [1] * 6
    assert orb.upper_actions == [0] + [1] * 5


def test_orbit_pair_rejects_bad_input():
    with pytest.raises(InvalidArgument):
        orbit_pair(-1.0, P, 3)
    with pytest.raises(InvalidArgument):
        orbit_pair(1.0, P, 0)


@given(st.floats(0, 20), arm_params(), st.integers(1, 60))
def test_orbit_invariants_and_telescope(x, p, T):
    orb = orbit_pair(x, p, T)
    assert orb.upper_states[0] == orb.lower_states[0] == x
    assert len(orb.upper_states) == T + 1 and len(orb.lower_actions) == T
    # x + 1 alone is not a bound: below y_1 the active steps climb towards y_1
    cap = max(x + 1, y1(p)) * (1 + 1e-12)
    assert all(0 < s <= cap for s in orb.upper_states[1:] + orb.lower_states[1:])
    run = 0
    for lo, up in zip(orb.lower_actions, orb.upper_actions):
        run += lo - up
        assert run in (0, 1)


def test_orbit_near_left_endpoint_is_periodic():
    # the endpoint itself is a float tie, so step just inside it
    for word in enumerate_tree(4)[1:-1]:
        lo, hi = word_interval(word, P)
        m = len(word)
        orb = orbit_pair(lo + 1e-6 * (hi - lo), P, 3 * m)
        assert orb.upper_word == OmegaWord("01" + word[1:-1]).prefix(3 * m)
        assert orb.lower_word == OmegaWord("10" + word[1:-1]).prefix(3 * m)


def test_boundary_words():
    assert threshold_word_by_orbit(0.3, P).word == "1"
    assert threshold_word_by_orbit(5.0, P).word == "0"
    assert threshold_word_by_tree(0.3, P).word == "1"
    assert threshold_word_by_tree(5.0, P).word == "0"
    assert threshold_word_by_tree(y1(P), P).word == "1"
    assert threshold_word_by_tree(y0(P), P).word == "0"


def test_midpoint_of_01():
    lo, hi = fixed_point("01", P).value, fixed_point("10", P).value
    cls = threshold_word_by_tree((lo + hi) / 2, P)
    assert cls.word == "01" and cls.period == 2
    assert math.isclose(cls.lo, lo, rel_tol=1e-12) and math.isclose(cls.hi, hi, rel_tol=1e-12)
    assert cls.to_json()["period"] == 2


def test_t3_intervals_disjoint_and_ordered():
    ivs = [word_interval(w, P) for w in enumerate_tree(3)[1:-1]]
    for lo, hi in ivs:
        assert lo < hi
    # slope rises left to right, so intervals move down
    for (lo1, _), (_, hi2) in zip(ivs, ivs[1:]):
        assert hi2 < lo1


def test_phi_w_zero_below_interval():
    for word in enumerate_tree(6)[1:-1]:
        lo, _ = word_interval(word, P)
        assert phi_word(word[1:-1], 0.0, P) <= lo


@given(st.floats(1e-6, 1.2), arm_params(a_min=0.01))
def test_orbit_and_tree_agree(u, p):
    x = y1(p) + u * (y0(p) - y1(p))
    t = threshold_word_by_tree(x, p)
    try:
        o = threshold_word_by_orbit(x, p)
    except ClassificationInconclusive:
        return
    if t.conclusive:
        assert t.word == o.word
        assert t.lo <= x <= t.hi or t.is_boundary
        assert t.is_boundary or is_christoffel(t.word)


def test_rho_monotone_in_x():
    xs = [i * 2.5 / 400 for i in range(401)]
    rs = [rho(threshold_word_by_tree(x, P).word) for x in xs]
    assert all(r1 <= r2 for r1, r2 in zip(rs, rs[1:]))


def test_tree_inconclusive_flag():
    # a Fibonacci slope has all continued-fraction runs of length one, so a
    # shallow run budget cannot reach it
    word = christoffel_from_slope(13, 21)
    lo, hi = word_interval(word, P)
    x = (lo + hi) / 2
    cls = threshold_word_by_tree(x, P, max_depth=2)
    assert not cls.conclusive
    assert cls.below[1] < x < cls.above[1]
    # at this length the interval collapses in double precision, so only
    # containment is checked for the full-depth answer
    full = threshold_word_by_tree(x, P)
    assert full.conclusive and full.lo <= x <= full.hi


def test_long_runs_resolve_quickly():
    # tiny a: words 0^k 1 with large k sit on one long run
    p = ArmParams(0.001, 1.001)
    x = 0.875 * y0(p)
    cls = threshold_word_by_tree(x, p, max_depth=2)
    assert cls.conclusive and cls.lo <= x <= cls.hi
    assert cls.word == "0" * (len(cls.word) - 1) + "1"
    assert threshold_word_by_orbit(x, p, max_len=256).word == cls.word
