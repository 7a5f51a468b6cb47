"""Multiple harmonic q-sums and restricted nested sums.

Every sum here is a nested sum over 1 <= j_1 (<|<=) j_2 ... (<|<=) j_w <= N
of a product of per-position terms.  One dynamic program evaluates all of
them in O(N * w) field operations; the relation between consecutive
positions (strict or weak) is the only thing that changes between H, H*
and the restricted sums.

The engine is generic over the field of ``q``: it only needs ``+``, ``*``,
``/``, ``**`` with integer exponents and comparison with 0.  Exact rationals
(:class:`fractions.Fraction`), cyclotomic elements and Python ``complex``
all qualify.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .exactfield import (
    CyclotomicElement,
    SingularEvaluationError,
    get_context,
    q_integer,
)
from .results import VerificationResult, compare, timed

__all__ = [
    "IndexTuple",
    "StrictPattern",
    "nested_sum",
    "mhs",
    "mhs_naive",
    "zn",
    "q_binomial",
    "q_binomial_row",
    "restricted_sum",
    "restricted_sum_naive",
    "duality_pattern",
    "theorem3_rhs",
    "lemma1_reverse",
    "theoremA_sides",
    "theoremA_check",
    "compositions",
]

STRICT = "strict"
STAR = "star"


@dataclass(frozen=True)
class IndexTuple:
    """Exponents ``s`` of the q-integers and exponents ``t`` of q**k.

    ``t`` may be negative; that only makes sense where q is invertible,
    e.g. at a root of unity.
    """

    s: tuple[int, ...]
    t: tuple[int, ...]

    def __post_init__(self):
        s, t = tuple(int(x) for x in self.s), tuple(int(x) for x in self.t)
        if len(s) != len(t):
            raise ValueError(f"s and t must have equal length, got {len(s)} and {len(t)}")
        if any(x < 0 for x in s):
            raise ValueError(f"entries of s must be non-negative, got {s}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    @classmethod
    def for_z(cls, s: Sequence[int]) -> "IndexTuple":
        """The tuple (s; s - {1}^r) used by z_n."""
        s = tuple(s)
        if any(x < 1 for x in s):
            raise ValueError(f"z-values need every s_j >= 1, got {s}")
        return cls(s, tuple(x - 1 for x in s))

    @property
    def depth(self) -> int:
        return len(self.s)

    @property
    def weight(self) -> int:
        return sum(self.s)

    def reversed(self) -> "IndexTuple":
        """(s-bar; s-bar - t-bar)"""
        rs, rt = self.s[::-1], self.t[::-1]
        return IndexTuple(rs, tuple(a - b for a, b in zip(rs, rt)))


@dataclass(frozen=True)
class StrictPattern:
    """w summation variables; position i in ``strict_positions`` forces j_i < j_{i+1}."""

    w: int
    strict_positions: frozenset[int] = frozenset()

    def __post_init__(self):
        if self.w < 0:
            raise ValueError("w must be non-negative")
        positions = frozenset(int(i) for i in self.strict_positions)
        bad = [i for i in positions if not 1 <= i <= self.w - 1]
        if bad:
            raise ValueError(f"strict positions must lie in [1, {self.w - 1}], got {sorted(bad)}")
        object.__setattr__(self, "strict_positions", positions)

    def links(self) -> list[bool]:
        """links[i] is True when j_i < j_{i+1} is required (0-based, length w-1)."""
        return [(i + 1) in self.strict_positions for i in range(self.w - 1)]


def duality_pattern(s: Sequence[int]) -> StrictPattern:
    """Pattern with strict positions at the partial sums s_1, s_1+s_2, ..., s_1+...+s_{r-1}."""
    partial = list(itertools.accumulate(s))
    return StrictPattern(sum(s), frozenset(partial[:-1]))


def compositions(weight: int) -> Iterable[tuple[int, ...]]:
    """All compositions of ``weight`` into positive parts."""
    if weight == 0:
        yield ()
        return
    for first in range(1, weight + 1):
        for rest in compositions(weight - first):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# the engine


def nested_sum(N: int, terms: Callable[[int], Sequence], links: Sequence[bool], one):
    """Sum over 1 <= j_1 ~ j_2 ~ ... ~ j_w <= N of prod_i terms(j_i)[i].

    ``links[i]`` selects ``<`` (True) or ``<=`` (False) between positions i
    and i+1.  ``terms(k)`` returns the w per-position values at index k.

    acc[i] holds the sum over all admissible (j_1..j_i) with j_i <= k.  A
    strict link reads acc[i-1] as it was before k was folded in, a weak
    link reads it after.
    """
    w = len(links) + 1
    zero = one * 0
    acc = [one] + [zero] * w
    for k in range(1, N + 1):
        vals = terms(k)
        prev_old = acc[0]
        for i in range(1, w + 1):
            cur_old = acc[i]
            src = prev_old if i > 1 and links[i - 2] else acc[i - 1]
            if src != 0:
                acc[i] = cur_old + src * vals[i - 1]
            prev_old = cur_old
    return acc[w]


def _root_order(q) -> int | None:
    """n if q is the canonical generator of Q(zeta_n), else None."""
    if isinstance(q, CyclotomicElement) and q == q.context.generator:
        return q.context.order
    return None


def _one(q):
    return q * 0 + 1


class _TermTable:
    """Per-k building blocks q**(k*t) and 1/[k]_q**s, with root-of-unity caching."""

    def __init__(self, q):
        self.q = q
        self.order = _root_order(q)
        self.ctx = q.context if self.order else None
        self._k = None
        self._inv = None
        self._qk = None
        self._inv_pows: dict[int, object] = {}

    def _advance(self, k: int):
        if self._k == k:
            return
        if self.ctx is not None:
            if k % self.order == 0:
                raise SingularEvaluationError(k)
            self._inv = self.ctx.q_integer_inverse(k)
        else:
            qint = q_integer(k, self.q)
            if qint == 0:
                raise SingularEvaluationError(k)
            self._inv = 1 / qint
            self._qk = self.q ** k
        self._k = k
        self._inv_pows = {0: _one(self.q), 1: self._inv}

    def power(self, k: int, t: int):
        """q**(k*t)"""
        if self.ctx is not None:
            return self.ctx.root_power(k * t)
        self._advance(k)
        if t >= 0:
            return self._qk ** t
        return 1 / self._qk ** (-t)

    def inv_power(self, k: int, s: int):
        """1/[k]_q**s"""
        self._advance(k)
        v = self._inv_pows.get(s)
        if v is None:
            v = self._inv ** s
            self._inv_pows[s] = v
        return v


def mhs(idx: IndexTuple, N: int, q, mode: str = STRICT):
    """H_N(s; t; q) (``mode='strict'``) or H*_N(s; t; q) (``mode='star'``)."""
    if mode not in (STRICT, STAR):
        raise ValueError(f"mode must be 'strict' or 'star', got {mode!r}")
    one = _one(q)
    r = idx.depth
    if r == 0:
        return one
    if N <= 0 or (mode == STRICT and N < r):
        return one * 0
    table = _TermTable(q)
    pairs = list(zip(idx.s, idx.t))

    def terms(k):
        cache = {}
        out = []
        for s, t in pairs:
            v = cache.get((s, t))
            if v is None:
                v = table.power(k, t) * table.inv_power(k, s)
                cache[(s, t)] = v
            out.append(v)
        return out

    return nested_sum(N, terms, [mode == STRICT] * (r - 1), one)


@lru_cache(maxsize=65536)
def _naive_inverse_q_integer(q, k: int):
    qint = q_integer(k, q)
    if qint == 0:
        raise SingularEvaluationError(k)
    return 1 / qint


def mhs_naive(idx: IndexTuple, N: int, q, mode: str = STRICT):
    """Brute-force enumeration of H_N / H*_N over every index tuple; shares no code with :func:`mhs`."""
    one = _one(q)
    r = idx.depth
    factors: dict = {}

    def factor(k, s, t):
        key = (k, s, t)
        v = factors.get(key)
        if v is None:
            e = k * t
            v = (q ** e if e >= 0 else 1 / q ** (-e)) * _naive_inverse_q_integer(q, k) ** s
            factors[key] = v
        return v

    strict = mode == STRICT

    # depth-first over every admissible (k_1, ..., k_r), carrying the prefix product
    def walk(pos, lo, prefix):
        s, t = idx.s[pos], idx.t[pos]
        out = one * 0
        for k in range(lo, N + 1):
            term = prefix * factor(k, s, t)
            if pos + 1 == r:
                out = out + term
            else:
                out = out + walk(pos + 1, k + 1 if strict else k, term)
        return out

    if r == 0:
        return one
    return walk(0, 1, one)


def zn(s: Sequence[int], n: int, star: bool = False) -> CyclotomicElement:
    """z_n(s; zeta_n) = H_{n-1}(s; s - {1}^r; zeta_n), or the star version."""
    idx = IndexTuple.for_z(s)
    ctx = get_context(n)
    return mhs(idx, n - 1, ctx.generator, STAR if star else STRICT)


def q_binomial(m: int, k: int, q):
    """Gaussian coefficient prod_{j=1}^{k} [m-k+j]_q / [j]_q."""
    if not 0 <= k <= m:
        raise ValueError(f"q-binomial needs 0 <= k <= m, got m={m}, k={k}")
    table = _TermTable(q)
    num = _one(q)
    den_inv = _one(q)
    for j in range(1, k + 1):
        num = num * q_integer(m - k + j, q)
        den_inv = den_inv * table.inv_power(j, 1)
    return num * den_inv


def q_binomial_row(m: int, q) -> list:
    """[m choose k]_q for k = 0..m via the ratio [m-k+1]_q/[k]_q."""
    table = _TermTable(q)
    row = [_one(q)]
    for k in range(1, m + 1):
        row.append(row[-1] * q_integer(m - k + 1, q) * table.inv_power(k, 1))
    return row


def restricted_sum(pat: StrictPattern, N: int, q):
    """Sum over 1 <= j_1 <= ... <= j_w <= N, strict at ``pat``, of prod q**j_i / [j_i]_q."""
    one = _one(q)
    if pat.w == 0:
        return one
    if N <= 0:
        return one * 0
    table = _TermTable(q)
    w = pat.w

    def terms(k):
        return [table.power(k, 1) * table.inv_power(k, 1)] * w

    return nested_sum(N, terms, pat.links(), one)


def restricted_sum_naive(pat: StrictPattern, N: int, q):
    one = _one(q)
    links = pat.links()
    total = one * 0
    for js in itertools.combinations_with_replacement(range(1, N + 1), pat.w):
        if any(strict and a == b for strict, a, b in zip(links, js, js[1:])):
            continue
        term = one
        for j in js:
            term = term * q ** j / q_integer(j, q)
        total = total + term
    return total


def theorem3_rhs(s: Sequence[int], n: int) -> CyclotomicElement:
    """(-1)^r times the restricted sum with strict positions at the partial sums of s, N = n-1."""
    s = tuple(s)
    if any(x < 1 for x in s):
        raise ValueError(f"composition parts must be positive, got {s}")
    value = restricted_sum(duality_pattern(s), n - 1, get_context(n).generator)
    return -value if len(s) % 2 else value


def lemma1_reverse(idx: IndexTuple, n: int, star: bool = False) -> tuple[CyclotomicElement, CyclotomicElement]:
    """(H_{n-1}(s;t;zeta), (-1)^w H_{n-1}(s-bar; s-bar - t-bar; zeta)); the two must agree."""
    mode = STAR if star else STRICT
    zeta = get_context(n).generator
    lhs = mhs(idx, n - 1, zeta, mode)
    rhs = mhs(idx.reversed(), n - 1, zeta, mode)
    if idx.weight % 2:
        rhs = -rhs
    return lhs, rhs


def theoremA_sides(s: Sequence[int], n: int, q) -> tuple:
    """Both sides of the multiple q-binomial identity at a fixed value of q.

    Left: sum_k [n choose k]_q (-1)^k q^C(k+1,2) * sum_{k_1<...<k_r=k} prod q^((s_i-1)k_i)/[k_i]^s_i.
    Right: (-1)^r * restricted_sum(partial sums of s, n, q).
    """
    s = tuple(s)
    if not s or any(x < 1 for x in s):
        raise ValueError(f"Theorem A needs a non-empty composition of positive integers, got {s}")
    r = len(s)
    one = _one(q)
    zero = one * 0
    table = _TermTable(q)
    for k in range(1, n + 1):
        table.inv_power(k, 1)  # raises on a singular q before any work is done
    qbin = q_binomial_row(n, q)
    # acc[i]: sum over k_1 < ... < k_i <= current k of the first i factors
    acc = [one] + [zero] * (r - 1)
    lhs = zero
    for k in range(1, n + 1):
        vals = [table.power(k, x - 1) * table.inv_power(k, x) for x in s]
        inner = acc[r - 1] * vals[r - 1]
        sign = -1 if k % 2 else 1
        lhs = lhs + qbin[k] * sign * q ** (k * (k + 1) // 2) * inner
        for i in range(r - 1, 0, -1):
            acc[i] = acc[i] + acc[i - 1] * vals[i - 1]
    rhs = restricted_sum(duality_pattern(s), n, q)
    if r % 2:
        rhs = -rhs
    return lhs, rhs


def theoremA_check(s: Sequence[int], n: int, q) -> VerificationResult:
    q = Fraction(q)
    params = {"s": list(s), "n": n, "q": q}
    with timed() as ms:
        lhs, rhs = theoremA_sides(s, n, q)
    return compare("theoremA", params, lhs, rhs, runtime_ms=ms[0])
