"""Whittle index of the scalar Kalman-filter arm.

With orbits as in :mod:`whittle_kf.threshold` (actions indexed from ``t=1``),

    lambda(x) = w * sum_{t>=1} beta^t (x^up_t - x^lo_t)
                  / sum_{t>=1} beta^t (u^lo_t - u^up_t)  - h.

Two evaluation routes are provided: :func:`whittle_index_series` simulates
the threshold orbits and sums both series directly; :func:`whittle_index_closed`
uses the classifying word, whose periodic structure fixes the denominator at
``beta (1 - beta) / (1 - beta^m)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ConditioningError, InvalidArgument
from .moebius import ArmParams, y1
from .threshold import (DEFAULT_MAX_DEPTH, ThresholdClassification, classify)

DEFAULT_TOL = 1e-9
CURVE_TOL = 1e-7
DENOMINATOR_FLOOR = 1e-12


@dataclass(frozen=True)
class IndexPoint:
    x: float
    lam: float
    word: Optional[str]
    method: str  # "series" | "closed" | "bracketed"
    bound: float

    def to_json(self) -> dict:
        return {"x": self.x, "lambda": self.lam, "word": self.word,
                "method": self.method, "bound": self.bound}


# --- series route -----------------------------------------------------------

def _series_horizon(xmax: float, beta: float, tol_unit: float) -> int:
    # |N| <= C beta/(1-beta), D >= beta(1-beta); make both truncation errors tiny
    c = xmax + 1.0
    lam_max = c / (1 - beta) ** 2
    d_min = beta * (1 - beta) / 2
    target = tol_unit * d_min * (1 - beta) / (c + lam_max)
    target = min(target, d_min * (1 - beta))
    return max(1, math.ceil(math.log(target) / math.log(beta)))


def series_batch(xs, params: ArmParams, tol: float = DEFAULT_TOL):
    """Vectorised series evaluation; returns ``(lam, bound)`` arrays."""
    xs = np.asarray(xs, dtype=float)
    if np.any(xs < 0):
        raise InvalidArgument("thresholds must be non-negative")
    if tol <= 0:
        raise InvalidArgument("tol must be positive")
    a, b, beta = float(params.a), float(params.b), float(params.beta)
    w, h = float(params.weight), float(params.cost)
    T = _series_horizon(float(xs.max(initial=0.0)), beta, tol / max(w, 1e-300))
    up = xs.copy()
    lo = xs.copy()
    num = np.zeros_like(xs)
    den = np.zeros_like(xs)
    disc = 1.0
    for _ in range(T):
        disc *= beta
        ua = up > xs
        la = lo >= xs
        up = np.where(ua, (up + 1) / (b * up + b + 1), (up + 1) / (a * up + a + 1))
        lo = np.where(la, (lo + 1) / (b * lo + b + 1), (lo + 1) / (a * lo + a + 1))
        num += disc * (up - lo)
        den += disc * (la.astype(float) - ua.astype(float))
    tail = disc * beta / (1 - beta)
    err_den = tail
    err_num = (xs + 1) * tail
    if np.any(den - err_den < DENOMINATOR_FLOOR):
        raise ConditioningError("index denominator is not bounded away from zero")
    lam_unit = num / den
    bound_unit = (err_num + np.abs(lam_unit) * err_den) / (den - err_den)
    return w * lam_unit - h, w * bound_unit


def whittle_index_series(x: float, params: ArmParams, tol: float = DEFAULT_TOL) -> IndexPoint:
    lam, bound = series_batch([x], params, tol)
    return IndexPoint(float(x), float(lam[0]), None, "series", float(bound[0]))


# --- closed-form route ------------------------------------------------------

def _closed_unit(x: float, cls: ThresholdClassification, params: ArmParams, tol_unit: float):
    beta = float(params.beta)
    a, b = float(params.a), float(params.b)
    m = cls.period
    pref = (1 - beta**m) / (1 - beta)
    up_word, lo_word = cls.upper_word(), cls.lower_word()
    # tail after K letters <= pref (x+1) beta^K / (1-beta)
    K = max(1, math.ceil(math.log(tol_unit * (1 - beta) / (pref * (x + 1))) / math.log(beta)))
    up = lo = x
    total = 0.0
    disc = 1.0
    for k in range(K):
        cu = b if up_word[k] == "1" else a
        cl = b if lo_word[k] == "1" else a
        up = (up + 1) / (cu * up + cu + 1)
        lo = (lo + 1) / (cl * lo + cl + 1)
        total += disc * (up - lo)
        disc *= beta
    bound = pref * (x + 1) * disc / (1 - beta)
    return pref * total, bound


def whittle_index_closed(x: float, classification: ThresholdClassification, params: ArmParams,
                         tol: float = DEFAULT_TOL) -> IndexPoint:
    """Index from the classifying word ``0w1`` (or ``0``/``1``).

    ``lambda = w (1 - beta^m)/(1 - beta) sum_{k>=1} beta^{k-1}
    (phi_{u_{1:k}}(x) - phi_{l_{1:k}}(x)) - h`` with ``u = (01w)^omega``,
    ``l = (10w)^omega``; boundary words use ``m = 1``.  An inconclusive
    classification is bracketed between the index values at the end points of
    its two neighbouring intervals.
    """
    w, h = float(params.weight), float(params.cost)
    tol_unit = tol / max(w, 1e-300)
    if not classification.conclusive:
        return _bracketed(x, classification, params, tol)
    lam, bound = _closed_unit(float(x), classification, params, tol_unit)
    return IndexPoint(float(x), w * lam - h, classification.word, "closed", w * bound)


def _bracketed(x, cls: ThresholdClassification, params: ArmParams, tol: float) -> IndexPoint:
    (wb, xb), (wa, xa) = cls.below, cls.above
    lo_pt = whittle_index_closed(xb, classify(xb, params), params, tol)
    hi_pt = whittle_index_closed(xa, classify(xa, params), params, tol)
    lo_v, hi_v = lo_pt.lam - lo_pt.bound, hi_pt.lam + hi_pt.bound
    return IndexPoint(float(x), (lo_v + hi_v) / 2, cls.word, "bracketed", (hi_v - lo_v) / 2)


def whittle_index(x: float, params: ArmParams, tol: float = DEFAULT_TOL,
                  method: str = "closed", max_depth: int = DEFAULT_MAX_DEPTH) -> IndexPoint:
    if not 0 <= x < math.inf:
        raise InvalidArgument(f"x must be finite and non-negative, got {x}")
    if method == "series":
        return whittle_index_series(x, params, tol)
    if method == "closed":
        return whittle_index_closed(x, classify(x, params, max_depth), params, tol)
    raise InvalidArgument(f"unknown method {method!r}")


# --- curves -----------------------------------------------------------------

@dataclass
class IndexCurve:
    params: ArmParams
    points: list
    violations: list = field(default_factory=list)  # indices i with lam[i] > lam[i+1] + tol

    @property
    def monotone(self) -> bool:
        return not self.violations

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    @property
    def xs(self) -> np.ndarray:
        return np.array([p.x for p in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([p.lam for p in self.points])


def index_curve(params: ArmParams, grid: Sequence[float], tol: float = DEFAULT_TOL,
                method: str = "series", words: bool = True,
                monotone_tol: float = CURVE_TOL) -> IndexCurve:
    grid = [float(g) for g in grid]
    if not grid:
        raise InvalidArgument("empty grid")
    if any(g2 < g1 for g1, g2 in zip(grid, grid[1:])):
        raise InvalidArgument("grid must be ascending")
    if method == "series":
        lam, bound = series_batch(grid, params, tol)
        pts = [IndexPoint(x, float(l), classify(x, params).word if words else None, "series", float(e))
               for x, l, e in zip(grid, lam, bound)]
    else:
        pts = [whittle_index(x, params, tol, method) for x in grid]
    viol = [i for i in range(len(pts) - 1) if pts[i].lam > pts[i + 1].lam + monotone_tol]
    return IndexCurve(params, pts, viol)


def curve_grid(params: ArmParams, n: int = 1000, cap: float = 100.0) -> np.ndarray:
    """``n`` points on ``[0, min(2 y_0, cap)]``."""
    from .moebius import y0
    top = min(2 * y0(params), cap)
    return np.linspace(0.0, top, n)


# --- single-arm problem -----------------------------------------------------

@dataclass(frozen=True)
class SingleArmProblem:
    params: ArmParams
    nu: float
    x0: float
    threshold: float


@dataclass(frozen=True)
class CostEstimate:
    value: float
    tail_bound: float


def single_arm_cost(problem: SingleArmProblem, first_action: int, T: int) -> CostEstimate:
    """Truncated discounted cost of playing ``first_action`` then the threshold policy.

    The cost is ``w x_0 + sum_{t=1}^T beta^t ((h + nu) u_t + w x_t)`` where
    ``x_t = phi_{u_t}(x_{t-1})``; ties at the threshold follow ``first_action``.
    """
    if T < 1:
        raise InvalidArgument("T must be >= 1")
    if first_action not in (0, 1):
        raise InvalidArgument("first_action must be 0 or 1")
    p = problem.params
    a, b, beta = float(p.a), float(p.b), float(p.beta)
    w, price = float(p.weight), float(p.cost) + float(problem.nu)
    thr, x = float(problem.threshold), float(problem.x0)
    total = w * x
    disc = 1.0
    for t in range(1, T + 1):
        if t == 1:
            u = first_action
        else:
            u = int(x >= thr) if first_action == 1 else int(x > thr)
        c = b if u else a
        x = (x + 1) / (c * x + c + 1)
        disc *= beta
        total += disc * (price * u + w * x)
    state_cap = max(float(problem.x0), thr + 1, y1(p))
    tail = disc * beta / (1 - beta) * (abs(price) + w * state_cap)
    return CostEstimate(total, tail)


@dataclass(frozen=True)
class AmbivalenceResult:
    x: float
    lam: float
    q_passive: float
    q_active: float
    allowance: float

    @property
    def gap(self) -> float:
        return abs(self.q_passive - self.q_active)

    @property
    def ok(self) -> bool:
        return self.gap < self.allowance


def ambivalence_gap(x: float, params: ArmParams, tol: float = 1e-6, nu: Optional[float] = None,
                    T: Optional[int] = None) -> AmbivalenceResult:
    """Evaluate ``Q(x, 0 | nu)`` and ``Q(x, 1 | nu)``; ``nu`` defaults to the index at ``x``."""
    pt = whittle_index(x, params, min(tol, DEFAULT_TOL))
    if nu is None:
        nu = pt.lam
    beta = float(params.beta)
    if T is None:
        T = math.ceil(math.log(tol * 1e-3 * (1 - beta)) / math.log(beta)) + 1
    prob = SingleArmProblem(params, nu, x, x)
    q0 = single_arm_cost(prob, 0, T)
    q1 = single_arm_cost(prob, 1, T)
    # an index error e shifts the gap by e * (action-difference sum) <= e * beta
    allowance = tol + q0.tail_bound + q1.tail_bound + pt.bound * beta
    return AmbivalenceResult(float(x), pt.lam, q0.value, q1.value, allowance)


def ambivalence_check(x: float, params: ArmParams, tol: float = 1e-6) -> bool:
    return ambivalence_gap(x, params, tol).ok
