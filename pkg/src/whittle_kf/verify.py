"""Executable checks of the structural identities behind indexability.

All checks accept float or ``Fraction`` parameters.  With ``Fraction`` inputs
comparisons are exact; otherwise a relative slack ``FLOAT_RTOL`` applies.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence

from .errors import InvalidArgument
from .moebius import (E, ArmParams, F, G, K, Mat2, matrix_of_word, phi_word,
                      prefix_sum_matrix, y0, y1)
from .words import (interior_tree_words, is_palindrome, palindromes, standard_pairs)

FLOAT_RTOL = 1e-8


def _exact(*vals) -> bool:
    return all(isinstance(v, (Fraction, int)) for v in vals)


def _eq(x, y, rtol=FLOAT_RTOL) -> bool:
    if _exact(x, y):
        return x == y
    return abs(x - y) <= rtol * max(1.0, abs(x), abs(y))


def _le(x, y, rtol=FLOAT_RTOL) -> bool:
    if _exact(x, y):
        return x <= y
    return x <= y + rtol * max(1.0, abs(x), abs(y))


@dataclass
class ClaimResult:
    claim: str
    passed: bool
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"claim": self.claim, "passed": self.passed,
                "witness": {k: str(v) for k, v in self.witness.items()}}


@dataclass
class Report:
    name: str
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list:
        return [r for r in self.results if not r.passed]

    def add(self, claim: str, passed: bool, **witness) -> bool:
        # keep witnesses for failures only; passing checks are counted
        self.results.append(ClaimResult(claim, bool(passed), witness if not passed else {}))
        return passed

    def extend(self, other: "Report") -> "Report":
        self.results.extend(other.results)
        return self

    def summary(self) -> dict:
        counts: dict = {}
        for r in self.results:
            c = counts.setdefault(r.claim, {"passed": 0, "total": 0})
            c["passed"] += r.passed
            c["total"] += 1
        return counts

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checks": len(self.results),
                "summary": self.summary(),
                "failures": [r.to_json() for r in self.failures]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


# --- majorisation -----------------------------------------------------------

@dataclass(frozen=True)
class MajorisationReport:
    holds: bool
    partial_sums: list  # sum_{k<=j} u_(k) - sum_{k<=j} v_(k), ascending order
    witness_j: Optional[int]  # 1-based first violated index


def check_weak_supermajorisation(u: Sequence, v: Sequence, tol: float = 1e-10) -> MajorisationReport:
    """Is ``u`` weakly supermajorised by ``v``?

    True iff every ascending-order prefix sum of ``u`` is at least the
    corresponding prefix sum of ``v``.  ``tol`` is ignored for exact input.
    """
    if len(u) != len(v):
        raise InvalidArgument("vectors must have equal length")
    us, vs = sorted(u), sorted(v)
    diffs, su, sv = [], 0, 0
    witness = None
    for j, (x, y) in enumerate(zip(us, vs), start=1):
        su += x
        sv += y
        d = su - sv
        diffs.append(d)
        ok = d >= 0 if _exact(d) else d >= -tol * max(1.0, abs(su), abs(sv))
        if not ok and witness is None:
            witness = j
    return MajorisationReport(witness is None, diffs, witness)


def schur_weighted_sum_check(u: Sequence, v: Sequence, beta, tol: float = 1e-10) -> bool:
    """Discounted sums of ``f(z) = 1/z^2`` under weak supermajorisation.

    With ``u`` weakly supermajorised by ``v`` (both positive) and ascending
    orders ``u_(i)``, ``v_(i)``:
    ``sum_i beta^i f(u_(i)) <= sum_i beta^i f(v_(i))`` for ``beta`` in [0, 1].
    """
    if not 0 <= beta <= 1:
        raise InvalidArgument("beta must lie in [0, 1]")
    if min(list(u) + list(v)) <= 0:
        raise InvalidArgument("entries must be positive")
    if not check_weak_supermajorisation(u, v, tol).holds:
        raise InvalidArgument("u is not weakly supermajorised by v")
    lhs = sum(beta ** i / z ** 2 for i, z in enumerate(sorted(u), start=1))
    rhs = sum(beta ** i / z ** 2 for i, z in enumerate(sorted(v), start=1))
    return _le(lhs, rhs, tol)


# --- palindrome matrix claims -----------------------------------------------

def _require_palindrome(p: str) -> None:
    if not is_palindrome(p):
        raise InvalidArgument(f"{p!r} is not a palindrome")


def _claim5_words(p: str) -> list:
    short = ["".join(t) for n in range(4) for t in product("01", repeat=n)]
    return sorted(set(short) | {p[:k] for k in range(len(p) + 1)}, key=lambda s: (len(s), s))


def palindrome_matrix_claims(p: str, params: ArmParams, n: int = 2) -> Report:
    """The six palindrome identities/inequalities for ``M(p)``, for every ``n' <= n``."""
    _require_palindrome(p)
    rep = Report(f"palindrome[{p or 'eps'}]")
    M = lambda w: matrix_of_word(w, params)
    mp = M(p)
    f, h = mp.m12, mp.m22
    rep.add("claim1", _eq(mp.m11, (f * h + 1) / (h + f)) and _eq(mp.m21, (h * h - 1) / (h + f)),
            p=p, M=mp)
    rep.add("claim2", _eq(M("10" + p).trace(), M("01" + p).trace()), p=p)
    for k in range(n + 1):
        for u in (p + ("10" + p) * k, ("10" + p) * k + "10"):
            d = M(u) - M(u[::-1])
            ok = (_eq(d.m21, 0 * d.m21) and _eq(d.m11, d.m12) and _eq(d.m11, -d.m22)
                  and _le(d.m22, 0 * d.m22))
            rep.add("claim3", ok, u=u, diff=d)
        for i in range(len(p) + 1):
            w = p[:i]
            lhs = M(p + ("10" + p) * k + "10" + w).m22
            rhs = M(p + ("01" + p) * k + "01" + w).m22
            rep.add("claim4", _le(lhs, rhs), p=p, n=k, w=w, lhs=lhs, rhs=rhs)
        for w in _claim5_words(p):
            lhs = M(("10" + p) * k + "10" + w).m21
            rhs = M(("01" + p) * k + "01" + w).m21
            rep.add("claim5", _le(rhs, lhs), p=p, n=k, w=w, lhs=lhs, rhs=rhs)
        lhs = M(("10" + p) * k + "1").m21
        rhs = M(("01" + p) * k + "0").m21
        rep.add("claim6", _le(rhs, lhs), p=p, n=k, lhs=lhs, rhs=rhs)
    return rep


def general_matrix_claims(w: str, params: ArmParams) -> Report:
    """Identities valid for every word: det 1, reversal through ``K``, ``M22 >= M21 >= 0``."""
    rep = Report(f"word[{w or 'eps'}]")
    m = matrix_of_word(w, params)
    rep.add("det", _eq(m.det(), 1 + 0 * m.m11), w=w, det=m.det())
    rev = K @ m.inverse() @ K
    mr = matrix_of_word(w[::-1], params)
    rep.add("reversal", all(_eq(x, y) for x, y in zip(mr.to_tuple(), rev.to_tuple())), w=w)
    rep.add("m22>=m21>=0", _le(m.m21, m.m22) and _le(0 * m.m21, m.m21), w=w, M=m)
    return rep


def commutator_check(params: ArmParams) -> bool:
    """``GF - FG == (b - a) K``."""
    f, g = F(params), G(params)
    lhs = g @ f - f @ g
    rhs = K * (params.b - params.a)
    return all(_eq(x, y) for x, y in zip(lhs.to_tuple(), rhs.to_tuple()))


# --- prefix sums ------------------------------------------------------------

def delta(p: str, params: ArmParams, k: int):
    """``[S(10p) M(p(10p)^k) - S(01p) M(p(01p)^k)]_22``."""
    return (prefix_sum_matrix("10" + p, params) @ matrix_of_word(p + ("10" + p) * k, params)
            - prefix_sum_matrix("01" + p, params) @ matrix_of_word(p + ("01" + p) * k, params)).m22


def prefix_sum_identities(p: str, params: ArmParams, K_max: int = 6) -> Report:
    """``S21 = M22 - 1``, ``S22 = M12 + S21`` for ``p`` and the vanishing differences for ``k <= K_max``."""
    _require_palindrome(p)
    rep = Report(f"prefix_sums[{p or 'eps'}]")
    m, s = matrix_of_word(p, params), prefix_sum_matrix(p, params)
    rep.add("S21=M22-1", _eq(s.m21, m.m22 - 1), p=p, S=s, M=m)
    rep.add("S22=M12+S21", _eq(s.m22, m.m12 + s.m21), p=p, S=s, M=m)
    s10, s01 = prefix_sum_matrix("10" + p, params), prefix_sum_matrix("01" + p, params)
    m10, m01 = matrix_of_word("10" + p, params), matrix_of_word("01" + p, params)
    a10 = a01 = m
    for k in range(K_max + 1):
        d = (s10 @ a10 - s01 @ a01).m22
        scale = max(abs((s10 @ a10).m22), 1)
        rep.add("delta_k=0", _eq(d, 0 * d) if _exact(d) else abs(d) <= FLOAT_RTOL * scale,
                p=p, k=k, delta=d)
        a10, a01 = m10 @ a10, m01 @ a01
    return rep


# --- orbit blocks and the majorisation point ----------------------------------

@dataclass(frozen=True)
class OrbitBlock:
    """Denominators ``[M((10w)^n (10w)_{1:k}) v(x)]_2`` (and the ``01w`` analogue), ``k = 1..m``."""

    n: int
    word: str
    x: object
    sigma_x: list
    sigma_y: list

    def partial_differences(self) -> list:
        out, t = [], 0
        for a, b in zip(self.sigma_x, self.sigma_y):
            t += a - b
            out.append(t)
        return out


def orbit_block(w: str, x, n: int, params: ArmParams) -> OrbitBlock:
    lower, upper = "10" + w, "01" + w
    v = (x, 1 + 0 * x)
    base_x = matrix_of_word(lower * n, params).apply(v)
    base_y = matrix_of_word(upper * n, params).apply(v)
    f, g = F(params), G(params)
    sx, sy = [], []
    for cl, cu in zip(lower, upper):
        base_x = (g if cl == "1" else f).apply(base_x)
        base_y = (g if cu == "1" else f).apply(base_y)
        sx.append(base_x[1])
        sy.append(base_y[1])
    return OrbitBlock(n, w, x, sx, sy)


def majorisation_point(w: str, params: ArmParams):
    """``phi_w(0) = M(w)_12 / M(w)_22`` (exact for rational parameters)."""
    m = matrix_of_word(w, params)
    return m.m12 / m.m22


def _ascending_nonneg(seq) -> bool:
    return _le(0 * seq[0], seq[0]) and all(_le(a, b) for a, b in zip(seq, seq[1:]))


def _block_checks(rep: Report, blk: OrbitBlock, at_point: bool) -> None:
    rep.add("ascending", _ascending_nonneg(blk.sigma_x) and _ascending_nonneg(blk.sigma_y),
            w=blk.word, n=blk.n, x=blk.x)
    tol = 0 if _exact(blk.x) else 1e-9
    maj = check_weak_supermajorisation(blk.sigma_x, blk.sigma_y, tol)
    rep.add("weak_supermajorisation", maj.holds, w=blk.word, n=blk.n, x=blk.x, j=maj.witness_j)
    if at_point:
        t = blk.partial_differences()
        scale = max(1, abs(sum(blk.sigma_x)))
        zero = t[-1] == 0 if _exact(t[-1]) else abs(t[-1]) <= 1e-9 * scale
        rep.add("T_m=0", zero, w=blk.word, n=blk.n, T_m=t[-1])


def majorisation_point_check(w: str, params: ArmParams, n: int = 2, samples: int = 20,
                             seed: int = 0) -> Report:
    """Ascent and weak supermajorisation of the orbit blocks at and above ``phi_w(0)``.

    At ``x = phi_w(0)`` the block sums also balance exactly (``T_m = 0``).
    Sample points are ``phi_w(0)`` plus non-negative offsets up to ``2 y_0``
    (capped at 100), rational when the parameters are.
    """
    _require_palindrome(w)
    rep = Report(f"majorisation[{w or 'eps'}]")
    x0 = majorisation_point(w, params)
    rng = random.Random(f"{seed}:{w}")
    top = min(2 * y0(params), 100.0)
    exact = _exact(x0)
    offsets = [0]
    for _ in range(samples):
        r = rng.random() * top
        offsets.append(Fraction(r).limit_denominator(10**6) if exact else r)
    for i, off in enumerate(offsets):
        x = x0 + off
        for k in range(n + 1):
            _block_checks(rep, orbit_block(w, x, k, params), at_point=(i == 0))
    return rep


def majorisation_counterexamples(w: str, params: ArmParams, n: int = 0, probes: int = 20) -> list:
    """Points below ``phi_w(0)`` where weak supermajorisation fails.

    Informational only: nothing is claimed about ``x < phi_w(0)``.
    """
    x0 = float(majorisation_point(w, params))
    found = []
    fparams = ArmParams(*(float(v) for v in (params.a, params.b, params.weight, params.cost, params.beta)))
    for i in range(1, probes + 1):
        x = x0 - (x0 + 1) * i / probes  # reaches -1
        blk = orbit_block(w, x, n, fparams)
        if not check_weak_supermajorisation(blk.sigma_x, blk.sigma_y).holds:
            found.append(x)
    return found


# --- boundary words ---------------------------------------------------------

def boundary_case_check(params: ArmParams, K_max: int = 10, xs: Optional[Iterable] = None) -> Report:
    """Linear systems for the words ``0`` and ``1``.

    ``(M(1^{k+1}) - M(01^k)) v(x) = G^k (G - F) v(x) >= 0`` and
    ``(M(10^k) - M(0^{k+1})) v(x) = F^k (G - F) v(x) >= 0`` for ``x >= y_1``,
    plus ``F v(-1) = G v(-1) = v(0)`` and ``E v(-1) = 0``.
    """
    rep = Report("boundary")
    f, g = F(params), G(params)
    one = 1 + 0 * params.a
    if xs is None:
        lo = Fraction(y1(params)).limit_denominator(10**6) if _exact(params.a) else y1(params)
        xs = [lo + one * i / 2 for i in range(6)]
    for x in xs:
        v = (x, one)
        gk = fk = Mat2.identity(one)
        for k in range(K_max + 1):
            for name, top, bot, pw in (("G", "1" * (k + 1), "0" + "1" * k, gk),
                                       ("F", "1" + "0" * k, "0" * (k + 1), fk)):
                lhs = (matrix_of_word(top, params) - matrix_of_word(bot, params)).apply(v)
                rhs = (pw @ (g - f)).apply(v)
                rep.add("identity", _eq(lhs[0], rhs[0]) and _eq(lhs[1], rhs[1]), x=x, k=k, case=name)
                rep.add("nonnegative", _le(0 * rhs[0], rhs[0]) and _le(0 * rhs[1], rhs[1]),
                        x=x, k=k, case=name)
            gk, fk = g @ gk, f @ fk
    vm1 = (-one, one)
    rep.add("Fv(-1)=v(0)", f.apply(vm1) == (0 * one, one))
    rep.add("Gv(-1)=v(0)", g.apply(vm1) == (0 * one, one))
    rep.add("Ev(-1)=0", E.apply(vm1) == (0 * one, 0 * one))
    gk = fk = Mat2.identity(one)
    for k in range(K_max + 1):
        eg, ef = (E @ gk).apply(vm1), (E @ fk).apply(vm1)
        rep.add("EG^kv(-1)>=EF^kv(-1)>=0", all(_le(q, p) and _le(0 * q, q) for p, q in zip(eg, ef)), k=k)
        gk, fk = g @ gk, f @ fk
    return rep


# --- lemmas -----------------------------------------------------------------

def phi0110_gap_closed_form(x, params: ArmParams):
    """Closed form of ``phi_10(x) - phi_01(x)``."""
    a, b = params.a, params.b
    s = a * b + b + a
    num = (b - a) * (s * x * x + (2 * a * b + 3 * b + 3 * a + 2) * x + a * b + 2 * b + 2 * a + 3)
    den = (s * x + a * b + b + 2 * a + 1) * (s * x + a * b + 2 * b + a + 1)
    return num / den


def lemma_phi0110(params: ArmParams, xs: Iterable) -> Report:
    rep = Report("phi01<phi10")
    for x in xs:
        gap = phi_word("10", x, params) - phi_word("01", x, params)
        rep.add("phi01<phi10", gap > 0, x=x, gap=gap)
        rep.add("closed_form", _eq(gap, phi0110_gap_closed_form(x, params)), x=x)
    return rep


def lemma_a10b(depth: int) -> Report:
    """For adjacent tree words ``0a1, 0b1``: ``a10b == b01a`` and it is a palindrome."""
    rep = Report("a10b=b01a")
    for u, v in standard_pairs(depth):
        a, b = u[1:-1], v[1:-1]
        rep.add("a10b=b01a", a + "10" + b == b + "01" + a, u=u, v=v)
        rep.add("palindrome", is_palindrome(a + "10" + b), u=u, v=v)
    return rep


# --- suites -----------------------------------------------------------------

def random_rational_params(count: int = 5, seed: int = 0) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        a = Fraction(rng.randint(0, 12), rng.randint(1, 6))
        b = a + Fraction(rng.randint(1, 12), rng.randint(1, 6))
        out.append(ArmParams(a, b, Fraction(1), Fraction(0), Fraction(1, 2)))
    return out


SUITES = ("palindrome", "delta", "major", "boundary", "lemmas")


def certify(suite: str = "all", params_list: Optional[list] = None, max_pal_len: int = 9,
            n: int = 2, K_max: int = 6, major_depth: int = 5, samples: int = 20,
            seed: int = 0) -> Report:
    """Run one or all certification suites in exact arithmetic."""
    if suite != "all" and suite not in SUITES:
        raise InvalidArgument(f"unknown suite {suite!r}")
    chosen = SUITES if suite == "all" else (suite,)
    params_list = params_list or random_rational_params(5, seed)
    rep = Report(f"certify[{suite}]")
    for prm in params_list:
        if "palindrome" in chosen:
            rep.add("commutator", commutator_check(prm), params=prm)
            for p in palindromes(max_pal_len):
                rep.extend(general_matrix_claims(p, prm))
                rep.extend(palindrome_matrix_claims(p, prm, n))
        if "delta" in chosen:
            for p in palindromes(max_pal_len):
                rep.extend(prefix_sum_identities(p, prm, K_max))
        if "major" in chosen:
            for word in interior_tree_words(major_depth):
                rep.extend(majorisation_point_check(word[1:-1], prm, n, samples, seed))
        if "boundary" in chosen:
            rep.extend(boundary_case_check(prm))
        if "lemmas" in chosen:
            rng = random.Random(seed)
            rep.extend(lemma_phi0110(prm, [Fraction(rng.randint(0, 10**4), 100) for _ in range(50)]))
    if "lemmas" in chosen:
        rep.extend(lemma_a10b(6))
    return rep
