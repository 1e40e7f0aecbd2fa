import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from whittle_kf.errors import InvalidArgument, SingularityError
from whittle_kf.moebius import (ArmParams, F, G, I2, K, Mat2, fixed_point, fixed_point_by_iteration,
                                matrix_of_word, mobius_apply, mobius_derivative, phi_apply, phi_word,
                                prefix_sum_matrix, y0, y1)

from conftest import approx, arm_params, binary_words

P = ArmParams(0.2, 1.0)
P0 = ArmParams(0.0, 1.0)


def test_params_validation():
    with pytest.raises(InvalidArgument):
        ArmParams(1.0, 0.5)
    with pytest.raises(InvalidArgument):
        ArmParams(0.0, 1.0, beta=1.0)
    with pytest.raises(InvalidArgument):
        ArmParams(0.0, 1.0, weight=-1)


def test_phi_examples():
    assert approx(phi_apply(0, 0.0, P), 1 / 1.2)
    assert phi_apply(0, 3.5, P0) == 4.5
    assert phi_apply(1, 0.0, P) == 0.5
    with pytest.raises(InvalidArgument):
        phi_apply(0, -0.1, P)


def test_phi_word_examples():
    assert phi_word("", 0.7, P) == 0.7
    assert approx(phi_word("01", 0.0, P0), 2 / 3)


@given(binary_words, binary_words, st.floats(0, 50), arm_params())
def test_phi_word_composition(u, v, x, p):
    assert approx(phi_word(u + v, x, p), phi_word(v, phi_word(u, x, p), p), rel=1e-9)
    assert approx(phi_word(u + v, x, p), mobius_apply(matrix_of_word(u + v, p), x), rel=1e-9)


def test_matrix_examples():
    assert matrix_of_word("0", P).allclose(Mat2(1, 1, 0.2, 1.2))
    m = matrix_of_word("01", P0)
    assert m.to_tuple() == (1, 2, 1, 3) and m.det() == 1
    assert matrix_of_word("", P) == I2


def test_prefix_sum_examples():
    s = prefix_sum_matrix("0", P)
    assert s.allclose(Mat2(1, 1, 0.2, 1.2))
    assert approx(s.m21, matrix_of_word("0", P).m22 - 1)
    assert prefix_sum_matrix("01", P0).to_tuple() == (2, 3, 1, 4)
    assert prefix_sum_matrix("", P).to_tuple() == (0, 0, 0, 0)


def test_fixed_point_examples():
    assert approx(fixed_point("1", P).value, (math.sqrt(5) - 1) / 2)
    assert approx(fixed_point("0", P).value, (math.sqrt(21) - 1) / 2)
    assert fixed_point("0", P0).value == math.inf
    assert fixed_point("00", P0).to_json()["value"] == "inf"


@given(st.text(alphabet="01", min_size=1, max_size=10), arm_params(a_min=0.01))
def test_fixed_point_is_fixed_and_matches_iteration(w, p):
    y = fixed_point(w, p).value
    assert abs(phi_word(w, y, p) - y) < 1e-10
    assert approx(y, fixed_point_by_iteration(w, p), rel=1e-7)


@given(st.text(alphabet="01", min_size=2, max_size=10), arm_params(a_min=0.01))
def test_mixed_fixed_point_between_extremes(w, p):
    if "0" not in w or "1" not in w:
        return
    y = fixed_point(w, p).value
    assert y1(p) < y < y0(p)


@given(binary_words, st.floats(0, 50), arm_params(a_min=0.01))
def test_trichotomy(w, x, p):
    if not w:
        return
    y = fixed_point(w, p).value
    d = phi_word(w, x, p) - x
    if abs(x - y) > 1e-6 * (1 + y):
        assert (d > 0) == (x < y)


def test_mobius_apply_and_derivative():
    assert mobius_apply(I2, 2.5) == 2.5
    assert approx(mobius_apply(F(P), 0.0), 1 / 1.2)
    g = G(ArmParams(0.0, 1.0))
    h = 1e-5
    fd = (mobius_apply(g, 1 + h) - mobius_apply(g, 1 - h)) / (2 * h)
    assert approx(mobius_derivative(g, 1.0), 1 / 9)
    assert abs(fd - 1 / 9) < 1e-6
    with pytest.raises(SingularityError):
        mobius_apply(Mat2(1, 0, 1, -1), 1.0)


@given(st.floats(0, 100), st.floats(0, 100), arm_params())
def test_a2_increasing_nonexpansive(x, z, p):
    x, z = min(x, z), max(x, z)
    if z - x < 1e-9:
        return
    for letter in (0, 1):
        fx, fz = phi_apply(letter, x, p), phi_apply(letter, z, p)
        assert fx < fz
        # phi_0 is a translation when a = 0, so contraction is only weak there
        if letter == 0 and p.a < 1e-6:
            assert fz - fx <= z - x + 1e-12 * (z + 1)
        else:
            assert fz - fx < z - x
    assert y1(p) < y0(p)


@given(st.text(alphabet="01", max_size=30), arm_params())
def test_det_one_and_entry_order(w, p):
    m = matrix_of_word(w, p)
    assert abs(m.det() - 1) < 1e-9 * max(1.0, m.m11 * m.m22)
    assert m.m22 >= m.m21 >= 0 and m.is_nonnegative()


@given(st.text(alphabet="01", max_size=12), st.fractions(0, 3, max_denominator=10),
       st.fractions(Fraction(1, 10), 3, max_denominator=10))
def test_reverse_word_matrix(w, a, d):
    # exact: K M^-1 K involves cancellation that floats do not survive at length 12
    p = ArmParams(a, a + d, Fraction(1), Fraction(0), Fraction(1, 2))
    assert matrix_of_word(w[::-1], p) == K @ matrix_of_word(w, p).inverse() @ K


@given(st.text(alphabet="01", max_size=6), arm_params())
def test_reverse_word_matrix_float(w, p):
    lhs = matrix_of_word(w[::-1], p)
    rhs = K @ matrix_of_word(w, p).inverse() @ K
    scale = max(map(abs, lhs.to_tuple())) ** 2
    assert all(abs(u - v) <= 1e-8 * scale for u, v in zip(lhs.to_tuple(), rhs.to_tuple()))


@given(st.fractions(0, 5, max_denominator=20), st.fractions(Fraction(1, 20), 5, max_denominator=20))
def test_commutator_exact(a, d):
    p = ArmParams(a, a + d, Fraction(1), Fraction(0), Fraction(1, 2))
    assert G(p) @ F(p) - F(p) @ G(p) == K * (p.b - p.a)
