"""Threshold-policy orbits and their classification by mechanical words.

For a threshold ``x`` two orbits start at ``x_0 = x``:

* the *upper* orbit plays passive on ties (``u_t = 1`` iff ``x_{t-1} > x``),
* the *lower* orbit plays active on ties (``u_t = 1`` iff ``x_{t-1} >= x``),

and ``x_t = phi_{u_t}(x_{t-1})``.  Actions are indexed from ``t = 1``.  When
``x`` lies in ``[y_{01w}, y_{10w}]`` the upper actions are ``(01w)^omega`` and
the lower actions ``(10w)^omega``; ``x <= y_1`` gives the word ``1`` and
``x >= y_0`` the word ``0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import ClassificationInconclusive, InvalidArgument
from .moebius import ArmParams, F, G, Mat2, fixed_point_of_matrix, y0, y1
from .words import OmegaWord, christoffel_conjugate, is_christoffel

DEFAULT_MAX_DEPTH = 32
DEFAULT_MAX_LEN = 64
RUN_CAP = 2**20  # longest single run of tree moves


@dataclass(frozen=True)
class OrbitPair:
    x: float
    upper_states: list
    lower_states: list
    upper_actions: list
    lower_actions: list

    @property
    def upper_word(self) -> str:
        return "".join(map(str, self.upper_actions))

    @property
    def lower_word(self) -> str:
        return "".join(map(str, self.lower_actions))


def orbit_pair(x: float, params: ArmParams, T: int) -> OrbitPair:
    """Both ``x``-threshold orbits for ``T`` steps (states ``x_0..x_T``, actions ``u_1..u_T``)."""
    if x < 0:
        raise InvalidArgument("threshold must be non-negative")
    if T < 1:
        raise InvalidArgument("T must be >= 1")
    a, b = params.a, params.b
    up, lo = [x], [x]
    ua, la = [], []
    for _ in range(T):
        s = up[-1]
        u = 1 if s > x else 0
        c = b if u else a
        up.append((s + 1) / (c * s + c + 1))
        ua.append(u)
        s = lo[-1]
        u = 1 if s >= x else 0
        c = b if u else a
        lo.append((s + 1) / (c * s + c + 1))
        la.append(u)
    return OrbitPair(x, up, lo, ua, la)


@dataclass(frozen=True)
class ThresholdClassification:
    """The ``x``-threshold word with its interval ``[lo, hi]``.

    For boundary words ``lo``/``hi`` are ``0``/``y_1`` (word ``1``) or
    ``y_0``/``inf`` (word ``0``).  An inconclusive classification keeps the
    tightest bracketing words found: ``below`` has its interval under ``x``
    and ``above`` over it.
    """

    x: float
    word: str
    lo: float
    hi: float
    is_boundary: bool = False
    conclusive: bool = True
    below: Optional[tuple] = None  # (word, hi endpoint)
    above: Optional[tuple] = None  # (word, lo endpoint)

    @property
    def period(self) -> int:
        return len(self.word)

    @property
    def inner(self) -> str:
        """``w`` for a word ``0w1``."""
        return self.word[1:-1]

    def upper_word(self) -> OmegaWord:
        """Action word of the upper (passive-on-tie) orbit."""
        if self.word == "1":
            return _Prefixed("0", "1")
        if self.word == "0":
            return OmegaWord("0")
        return OmegaWord("01" + self.inner)

    def lower_word(self) -> OmegaWord:
        if self.word == "1":
            return OmegaWord("1")
        if self.word == "0":
            return _Prefixed("1", "0")
        return OmegaWord("10" + self.inner)

    def to_json(self) -> dict:
        def enc(v):
            return "inf" if math.isinf(v) else v
        return {"x": self.x, "word": self.word, "lo": enc(self.lo), "hi": enc(self.hi),
                "period": self.period, "boundary": self.is_boundary,
                "conclusive": self.conclusive}


@dataclass(frozen=True)
class _Prefixed:
    """``head + tail^omega`` for the boundary orbits ``01^omega`` and ``10^omega``."""

    head: str
    tail: str

    def __getitem__(self, k: int) -> str:
        return self.head[k] if k < len(self.head) else self.tail[(k - len(self.head)) % len(self.tail)]

    def __iter__(self):
        yield from self.head
        while True:
            yield from self.tail

    def prefix(self, n: int) -> str:
        return "".join(self[k] for k in range(n))


def boundary_classification(x: float, params: ArmParams) -> Optional[ThresholdClassification]:
    lo1, hi0 = y1(params), y0(params)
    if x <= lo1:
        return ThresholdClassification(x, "1", 0.0, lo1, is_boundary=True)
    if x >= hi0:
        return ThresholdClassification(x, "0", hi0, math.inf, is_boundary=True)
    return None


def _min_period(s: list) -> int:
    # smallest p with s[i] == s[i+p] for all i, from the KMP failure function
    n = len(s)
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and s[i] != s[k]:
            k = fail[k - 1]
        if s[i] == s[k]:
            k += 1
        fail[i] = k
    return n - fail[-1]


def threshold_word_by_orbit(x: float, params: ArmParams,
                            max_len: int = DEFAULT_MAX_LEN) -> ThresholdClassification:
    """Classify ``x`` by simulating its orbits and reading off the action period.

    Raises :class:`ClassificationInconclusive` if the lower orbit's actions are
    not periodic with period ``<= max_len`` over ``3 * max_len`` steps.
    """
    T = 3 * max_len
    orb = orbit_pair(x, params, T)
    if not any(orb.upper_actions):
        return ThresholdClassification(x, "0", y0(params), math.inf, is_boundary=True)
    if all(orb.lower_actions):
        return ThresholdClassification(x, "1", 0.0, y1(params), is_boundary=True)
    p = _min_period(orb.lower_actions)
    if p > max_len:
        raise ClassificationInconclusive(f"no action period <= {max_len} at x={x}")
    lower = orb.lower_word[:p]
    word = lower[1:] + lower[0]  # 10w -> 0w1
    if not is_christoffel(word) or orb.upper_word != OmegaWord("01" + word[1:-1]).prefix(T):
        raise ClassificationInconclusive(f"orbit actions at x={x} are not a mechanical pair")
    lo, hi = word_interval(word, params)
    return ThresholdClassification(x, word, lo, hi)


# --- tree descent -----------------------------------------------------------

@dataclass(frozen=True)
class _Tracked:
    """A tree word ``z`` with (normalised) ``M(z)``, ``M(z minus first)``, ``M(z minus last)``."""

    word: str
    full: Mat2
    tail: Mat2
    head: Mat2

    def concat(self, other: "_Tracked") -> "_Tracked":
        return _Tracked(self.word + other.word,
                        (other.full @ self.full).normalized(),
                        (other.full @ self.tail).normalized(),
                        (other.head @ self.full).normalized())


def _leaves(params: ArmParams) -> tuple[_Tracked, _Tracked]:
    f = Mat2(*map(float, F(params).to_tuple()))
    g = Mat2(*map(float, G(params).to_tuple()))
    one = Mat2.identity(1.0)
    return _Tracked("0", f, one, one), _Tracked("1", g, one, one)


def _interval_from_pair(u: _Tracked, v: _Tracked, params: ArmParams) -> tuple[float, float]:
    # uv = 0c1 with c = (u minus first)(v minus last); 01c = 0 1 (u-) (v-), 10c = 1 u (v-)
    f = Mat2(*map(float, F(params).to_tuple()))
    g = Mat2(*map(float, G(params).to_tuple()))
    m01 = v.head @ u.tail @ g @ f
    m10 = v.head @ u.full @ g
    return fixed_point_of_matrix(m01), fixed_point_of_matrix(m10)


def word_interval(word: str, params: ArmParams) -> tuple[float, float]:
    """``(y_{01w}, y_{10w})`` for a word ``0w1``."""
    if len(word) < 2 or word[0] != "0" or word[-1] != "1":
        raise InvalidArgument(f"expected a word of the form 0w1, got {word!r}")
    from .moebius import _normalized_product
    inner = word[1:-1]
    return (fixed_point_of_matrix(_normalized_product("01" + inner, params)),
            fixed_point_of_matrix(_normalized_product("10" + inner, params)))


def _power(z: _Tracked, j: int) -> _Tracked:
    out = None
    base = z
    while j:
        if j & 1:
            out = base if out is None else out.concat(base)
        j >>= 1
        if j:
            base = base.concat(base)
    return out


def _run_length(pred, cap: int) -> int:
    """Smallest ``j >= 1`` with ``pred(j)`` false, given ``pred(0)`` true; 0 if beyond ``cap``."""
    hi = 1
    while pred(hi):
        if hi > cap:
            return 0
        hi *= 2
    lo = hi // 2  # pred(lo) true (or lo == 0)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return hi


def threshold_word_by_tree(x: float, params: ArmParams,
                           max_depth: int = DEFAULT_MAX_DEPTH) -> ThresholdClassification:
    """Classify ``x`` by descending the Christoffel tree.

    Fixed points increase with the ratio of zeros to ones, so ``x`` below the
    current interval moves to the child with more ones and vice versa.  Runs
    of moves in one direction (``u -> u v^j`` or ``v -> u^j v``) are taken in
    one go by galloping over ``j``; ``max_depth`` bounds the number of runs.
    """
    if not 0 <= x < math.inf:
        raise InvalidArgument("threshold must be finite and non-negative")
    edge = boundary_classification(x, params)
    if edge is not None:
        return edge
    u, v = _leaves(params)
    below = ("1", y1(params))
    above = ("0", y0(params))
    for _ in range(max_depth + 1):
        lo, hi = _interval_from_pair(u, v, params)
        word = u.word + v.word
        if lo <= x <= hi:
            return ThresholdClassification(x, word, lo, hi)
        if x < lo:
            def left(j, u=u, v=v):
                return j == 0 or x < _interval_from_pair(u.concat(_power(v, j)), v, params)[0]
            j = _run_length(left, RUN_CAP)
            if j == 0:
                break
            prev = u.concat(_power(v, j - 1)) if j > 1 else u
            above = (prev.word + v.word, _interval_from_pair(prev, v, params)[0])
            u = prev.concat(v)
        else:
            def right(j, u=u, v=v):
                return j == 0 or x > _interval_from_pair(u, _power(u, j).concat(v), params)[1]
            j = _run_length(right, RUN_CAP)
            if j == 0:
                break
            prev = _power(u, j - 1).concat(v) if j > 1 else v
            below = (u.word + prev.word, _interval_from_pair(u, prev, params)[1])
            v = u.concat(prev)
    return ThresholdClassification(x, word, lo, hi, conclusive=False, below=below, above=above)


def classify(x: float, params: ArmParams, max_depth: int = DEFAULT_MAX_DEPTH) -> ThresholdClassification:
    return threshold_word_by_tree(x, params, max_depth)


def rho(word: str) -> float:
    """Ratio of zeros to ones of ``01w`` (``inf`` for the word ``0``)."""
    ones = word.count("1")
    return math.inf if ones == 0 else word.count("0") / ones
