"""Binary words, the Christoffel tree and mechanical words.

Words are plain ``str`` objects over the alphabet ``{"0", "1"}``; the empty
word is ``""``.  Infinite periodic words are represented lazily by
:class:`OmegaWord`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from typing import Iterator

from .errors import InvalidArgument, ResourceLimitError

EPSILON = ""
MAX_TREE_DEPTH = 24
MAX_TREE_WORDS = 2**20


def check_word(w: str) -> str:
    if not isinstance(w, str) or any(c not in "01" for c in w):
        raise InvalidArgument(f"not a binary word: {w!r}")
    return w


def reverse(w: str) -> str:
    return w[::-1]


def is_palindrome(w: str) -> bool:
    return w == w[::-1]


def factor_count(w: str, u: str) -> int:
    """Number of occurrences of ``u`` in ``w``, overlaps included."""
    if not u:
        return len(w) + 1
    return sum(1 for i in range(len(w) - len(u) + 1) if w.startswith(u, i))


def power(w: str, n: int) -> str:
    return w * n


@dataclass(frozen=True)
class WordAlgebra:
    word: str

    @property
    def reverse(self) -> str:
        return reverse(self.word)

    @property
    def is_palindrome(self) -> bool:
        return is_palindrome(self.word)

    def factor_count(self, u: str) -> int:
        return factor_count(self.word, u)


def word_algebra(w: str) -> WordAlgebra:
    return WordAlgebra(check_word(w))


@dataclass(frozen=True)
class OmegaWord:
    """The infinite word ``period^omega``, never materialised."""

    period: str

    def __post_init__(self):
        check_word(self.period)
        if not self.period:
            raise InvalidArgument("omega power of the empty word")

    def __getitem__(self, k: int) -> str:
        # 0-based letter access
        return self.period[k % len(self.period)]

    def __iter__(self) -> Iterator[str]:
        while True:
            yield from self.period

    def prefix(self, n: int) -> str:
        q, r = divmod(n, len(self.period))
        return self.period * q + self.period[:r]

    def letters(self, n: int) -> Iterator[str]:
        return islice(iter(self), n)


# --- Christoffel tree -------------------------------------------------------

@dataclass(frozen=True)
class ChristoffelNode:
    left: str
    right: str

    @property
    def word(self) -> str:
        return self.left + self.right

    @property
    def ones(self) -> int:
        return self.word.count("1")

    @property
    def zeros(self) -> int:
        return self.word.count("0")

    @property
    def slope(self) -> Fraction:
        """|uv|_1 / |uv|_0 as an exact fraction."""
        return Fraction(self.ones, self.zeros)

    def slope_str(self) -> str:
        return f"{self.ones}/{self.zeros}"


ROOT = ChristoffelNode("0", "1")


def christoffel_children(node: ChristoffelNode) -> tuple[ChristoffelNode, ChristoffelNode]:
    uv = node.word
    return ChristoffelNode(node.left, uv), ChristoffelNode(uv, node.right)


def enumerate_tree(depth: int, max_depth: int = MAX_TREE_DEPTH,
                   max_words: int = MAX_TREE_WORDS) -> list[str]:
    """Return ``t_depth``: words in increasing slope order.

    ``t_0 = (0, 1)`` and each level inserts the concatenation of every pair
    of neighbours between them, so ``len(t_k) == 2**k + 1``.
    """
    if depth < 0:
        raise InvalidArgument("depth must be non-negative")
    if depth > max_depth or 2**depth + 1 > max_words:
        raise ResourceLimitError(f"tree depth {depth} exceeds the configured cap")
    seq = ["0", "1"]
    for _ in range(depth):
        nxt = [seq[0]]
        for u, v in zip(seq, seq[1:]):
            nxt.append(u + v)
            nxt.append(v)
        seq = nxt
    return seq


def iter_tree_nodes(depth: int) -> Iterator[tuple[int, ChristoffelNode]]:
    """Breadth-first (depth, node) pairs for all nodes with depth < ``depth``."""
    level = [ROOT]
    for d in range(depth):
        for node in level:
            yield d, node
        level = [c for node in level for c in christoffel_children(node)]


def christoffel_from_slope(p: int, q: int) -> str:
    """Lower Christoffel word with ``p`` ones and ``q`` zeros.

    Letter ``k`` (from 0) is ``floor((k+1)p/n) - floor(kp/n)`` with ``n = p+q``.
    """
    if p < 0 or q < 0 or p + q == 0:
        raise InvalidArgument("need p, q >= 0 with p + q > 0")
    if math.gcd(p, q) != 1:
        raise InvalidArgument(f"gcd({p}, {q}) != 1")
    n = p + q
    return "".join(str((k + 1) * p // n - k * p // n) for k in range(n))


def is_christoffel(w: str) -> bool:
    p, q = w.count("1"), w.count("0")
    if p + q == 0 or math.gcd(p, q) != 1:
        return False
    return w == christoffel_from_slope(p, q)


def christoffel_conjugate(w: str) -> str:
    """Rotate a primitive periodic word to its Christoffel conjugate.

    Raises if no rotation is a Christoffel word.
    """
    check_word(w)
    if len(w) == 1:
        return w
    p, q = w.count("1"), w.count("0")
    if p == 0 or q == 0 or math.gcd(p, q) != 1:
        raise InvalidArgument(f"{w!r} has no Christoffel conjugate")
    target = christoffel_from_slope(p, q)
    if target not in w + w:
        raise InvalidArgument(f"{w!r} has no Christoffel conjugate")
    return target


_MORPHISMS = {
    "L": lambda p: {"0": "0" * (p + 1) + "1", "1": "0" * p + "1"},
    "R": lambda p: {"0": "0" + "1" * p, "1": "0" + "1" * (p + 1)},
}


def apply_morphism(kind: str, p: int, w: str) -> str:
    """Letterwise substitution by ``L_p`` (0->0^{p+1}1, 1->0^p 1) or
    ``R_p`` (0->01^p, 1->01^{p+1})."""
    if kind not in _MORPHISMS:
        raise InvalidArgument(f"unknown morphism {kind!r}")
    if p < 1:
        raise InvalidArgument("morphism exponent must be >= 1")
    table = _MORPHISMS[kind](p)
    return "".join(table[c] for c in check_word(w))


def sturmian_prefix(alpha, length: int) -> str:
    """First ``length`` letters of the mechanical word of slope ``alpha``.

    ``alpha`` is converted to an exact fraction first (a float is taken at
    its exact binary value) so the floors are never rounded.
    """
    if length < 1:
        raise InvalidArgument("length must be >= 1")
    a = Fraction(alpha)
    if not 0 < a < 1:
        raise InvalidArgument("alpha must lie in (0, 1)")
    return "".join(str(math.floor((k + 1) * a) - math.floor(k * a)) for k in range(length))


def palindromes(max_len: int) -> Iterator[str]:
    """All binary palindromes up to ``max_len``, by length then lexicographic."""
    for n in range(max_len + 1):
        half = (n + 1) // 2
        for i in range(2**half):
            left = format(i, f"0{half}b") if half else ""
            yield left + left[: n // 2][::-1]


def interior_tree_words(depth: int) -> list[str]:
    """Words ``0w1`` of ``t_depth`` other than the end points ``0`` and ``1``."""
    return enumerate_tree(depth)[1:-1]


def standard_pairs(depth: int) -> Iterator[tuple[str, str]]:
    """Adjacent pairs ``(0a1, 0b1)`` of interior words in ``t_depth``."""
    inner = interior_tree_words(depth)
    yield from zip(inner, inner[1:])
