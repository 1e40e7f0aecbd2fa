"""Variance updates as Moebius maps and their 2x2 matrix representation.

The cheap/expensive variance updates are

    phi_0(x) = (x + 1) / (a x + a + 1),   phi_1(x) = (x + 1) / (b x + b + 1)

represented by ``F = [[1, 1], [a, 1 + a]]`` and ``G = [[1, 1], [b, 1 + b]]``.
For a word ``w`` the map ``phi_w`` applies letters left to right, so its
matrix is ``M(w) = M(w_n) ... M(w_1)``.

Every function works on ``float`` or on ``fractions.Fraction`` entries; use
:meth:`ArmParams.exact` to get the rational version of a parameter set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Union

from .errors import InvalidArgument, ResourceLimitError, SingularityError
from .words import check_word

Number = Union[float, Fraction, int]


@dataclass(frozen=True)
class ArmParams:
    """One arm: precisions ``a < b``, variance weight, observation cost, discount."""

    a: Number
    b: Number
    weight: Number = 1.0
    cost: Number = 0.0
    beta: Number = 0.5

    def __post_init__(self):
        if not 0 <= self.a < self.b:
            raise InvalidArgument(f"need 0 <= a < b, got a={self.a}, b={self.b}")
        if not 0 < self.beta < 1:
            raise InvalidArgument(f"need 0 < beta < 1, got {self.beta}")
        if self.weight < 0:
            raise InvalidArgument("weight must be non-negative")

    def exact(self) -> "ArmParams":
        return ArmParams(*(Fraction(v) for v in (self.a, self.b, self.weight, self.cost, self.beta)))

    def unit(self) -> "ArmParams":
        """Same dynamics with weight 1 and cost 0."""
        return replace(self, weight=type(self.weight)(1), cost=type(self.cost)(0))

    def to_dict(self) -> dict:
        return {"a": float(self.a), "b": float(self.b), "w": float(self.weight),
                "h": float(self.cost), "beta": float(self.beta)}


@dataclass(frozen=True)
class Mat2:
    m11: Number
    m12: Number
    m21: Number
    m22: Number

    @classmethod
    def identity(cls, one=1) -> "Mat2":
        return cls(one, 0 * one, 0 * one, one)

    @classmethod
    def zero(cls) -> "Mat2":
        return cls(0, 0, 0, 0)

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.m11 * o.m11 + self.m12 * o.m21, self.m11 * o.m12 + self.m12 * o.m22,
                    self.m21 * o.m11 + self.m22 * o.m21, self.m21 * o.m12 + self.m22 * o.m22)

    def __add__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.m11 + o.m11, self.m12 + o.m12, self.m21 + o.m21, self.m22 + o.m22)

    def __sub__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.m11 - o.m11, self.m12 - o.m12, self.m21 - o.m21, self.m22 - o.m22)

    def __mul__(self, c: Number) -> "Mat2":
        return Mat2(self.m11 * c, self.m12 * c, self.m21 * c, self.m22 * c)

    __rmul__ = __mul__

    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    def trace(self):
        return self.m11 + self.m22

    def inverse(self) -> "Mat2":
        d = self.det()
        if d == 0:
            raise SingularityError("singular matrix")
        return Mat2(self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d)

    def apply(self, v: tuple) -> tuple:
        return (self.m11 * v[0] + self.m12 * v[1], self.m21 * v[0] + self.m22 * v[1])

    def is_nonnegative(self) -> bool:
        return min(self.to_tuple()) >= 0

    def max_abs(self):
        return max(abs(e) for e in self.to_tuple())

    def normalized(self) -> "Mat2":
        """Scaled to unit max-entry; Moebius action and fixed points are unchanged."""
        s = float(self.max_abs())
        return Mat2(*(float(e) / s for e in self.to_tuple()))

    def to_tuple(self) -> tuple:
        return (self.m11, self.m12, self.m21, self.m22)

    def to_json(self) -> list:
        return [float(e) for e in self.to_tuple()]

    def allclose(self, o: "Mat2", rtol: float = 1e-8, atol: float = 0.0) -> bool:
        return all(abs(x - y) <= atol + rtol * max(abs(x), abs(y))
                   for x, y in zip(self.to_tuple(), o.to_tuple()))


K = Mat2(-1, -1, 0, 1)
E = Mat2(0, 0, 1, 1)
I2 = Mat2.identity()


def F(params: ArmParams) -> Mat2:
    a = params.a
    return Mat2(1 + 0 * a, 1 + 0 * a, a, 1 + a)


def G(params: ArmParams) -> Mat2:
    b = params.b
    return Mat2(1 + 0 * b, 1 + 0 * b, b, 1 + b)


def letter_matrix(letter: str, params: ArmParams) -> Mat2:
    if letter == "0":
        return F(params)
    if letter == "1":
        return G(params)
    raise InvalidArgument(f"bad letter {letter!r}")


def _precision(letter, params: ArmParams):
    if letter in (0, "0", False):
        return params.a
    if letter in (1, "1", True):
        return params.b
    raise InvalidArgument(f"bad letter {letter!r}")


def phi_apply(letter, x: Number, params: ArmParams) -> Number:
    """One variance update: ``phi_letter(x) = (x + 1) / (c x + c + 1)``."""
    if x < 0:
        raise InvalidArgument(f"variance must be non-negative, got {x}")
    c = _precision(letter, params)
    return (x + 1) / (c * x + c + 1)


def phi_word(w: str, x: Number, params: ArmParams) -> Number:
    if x < 0:
        raise InvalidArgument(f"variance must be non-negative, got {x}")
    for letter in check_word(w):
        c = params.a if letter == "0" else params.b
        x = (x + 1) / (c * x + c + 1)
    return x


def matrix_of_word(w: str, params: ArmParams) -> Mat2:
    """``M(w) = M(w_n) ... M(w_1)`` with ``M(0) = F``, ``M(1) = G``."""
    f, g = F(params), G(params)
    m = Mat2.identity(f.m11)
    for letter in check_word(w):
        m = (f if letter == "0" else g) @ m
    _check_finite(m)
    return m


def prefix_sum_matrix(w: str, params: ArmParams) -> Mat2:
    """``S(w) = sum_{k=1}^{|w|} M(w_{1:k})``; the zero matrix for the empty word."""
    f, g = F(params), G(params)
    m = Mat2.identity(f.m11)
    s = Mat2.zero()
    for letter in check_word(w):
        m = (f if letter == "0" else g) @ m
        s = s + m
    _check_finite(s)
    return s


def _check_finite(m: Mat2) -> None:
    if any(isinstance(e, float) and not math.isfinite(e) for e in m.to_tuple()):
        raise ResourceLimitError("matrix entries overflowed double precision; use exact mode")


def mobius_apply(A: Mat2, x: Number) -> Number:
    den = A.m21 * x + A.m22
    if den == 0:
        raise SingularityError("Moebius denominator vanishes")
    return (A.m11 * x + A.m12) / den


def mobius_derivative(A: Mat2, x: Number) -> Number:
    """``d/dx mu_A(x) = det(A) / (A21 x + A22)^2``."""
    den = A.m21 * x + A.m22
    if den == 0:
        raise SingularityError("Moebius denominator vanishes")
    return A.det() / (den * den)


def fixed_point_of_matrix(A: Mat2) -> float:
    """Non-negative root of ``A21 y^2 + (A22 - A11) y - A12 = 0``.

    Returns ``inf`` when ``A21 == 0`` and ``A11 > A22``-style growth leaves no
    finite root (the ``a = 0`` all-zeros case).
    """
    A = A.normalized()
    p = A.m11 - A.m22
    if A.m21 == 0:
        if p == 0:
            return math.inf if A.m12 > 0 else 0.0
        y = A.m12 / (-p) if p < 0 else math.inf
        return y if y >= 0 else math.inf
    s = math.sqrt(p * p + 4.0 * A.m21 * A.m12)
    # pick the cancellation-free form of the larger root
    return (p + s) / (2.0 * A.m21) if p >= 0 else 2.0 * A.m12 / (s - p)


@dataclass(frozen=True)
class FixedPoint:
    word: str
    value: float

    def to_json(self) -> dict:
        return {"word": self.word, "value": "inf" if math.isinf(self.value) else self.value}


def fixed_point(w: str, params: ArmParams) -> FixedPoint:
    """The unique fixed point ``y_w >= 0`` of ``phi_w``."""
    if not check_word(w):
        raise InvalidArgument("fixed point of the empty word is undefined")
    return FixedPoint(w, fixed_point_of_matrix(_normalized_product(w, params)))


def _normalized_product(w: str, params: ArmParams) -> Mat2:
    # rescales as it goes so long words never overflow
    f, g = F(params), G(params)
    if isinstance(params.a, Fraction) or isinstance(params.b, Fraction):
        f, g = Mat2(*map(float, f.to_tuple())), Mat2(*map(float, g.to_tuple()))
    m = Mat2.identity(1.0)
    for i, letter in enumerate(w):
        m = (f if letter == "0" else g) @ m
        if i % 32 == 31:
            m = m.normalized()
    return m


def fixed_point_by_iteration(w: str, params: ArmParams, iters: int = 100_000,
                             tol: float = 1e-14) -> float:
    """Cross-check oracle: iterate ``phi_w`` from ``y_1``-ish start until it settles."""
    x = float(fixed_point_of_matrix(G(params)))
    for _ in range(iters):
        nxt = phi_word(w, x, params)
        if abs(nxt - x) <= tol * max(1.0, abs(x)):
            return nxt
        x = nxt
    return x


def y0(params: ArmParams) -> float:
    return fixed_point("0", params).value


def y1(params: ArmParams) -> float:
    return fixed_point("1", params).value
