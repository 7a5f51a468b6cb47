"""Exact arithmetic in the cyclotomic field Q(zeta_n).

Elements are stored modulo the n-th cyclotomic polynomial, so two elements
are equal exactly when their coefficient vectors agree.  Internally each
element keeps integer numerators over one positive common denominator;
``coeffs`` exposes them as :class:`fractions.Fraction` values.

Rationals are plain :class:`fractions.Fraction` objects, which are always
kept in lowest terms with a positive denominator.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

__all__ = [
    "Rational",
    "IntPoly",
    "FieldContext",
    "CyclotomicElement",
    "SingularEvaluationError",
    "phi_cyclotomic",
    "get_context",
    "field_new",
    "element_arith",
    "element_invert",
    "power_of_root",
    "q_integer",
    "binomial_big",
    "parse_rational",
    "format_rational",
]

Rational = Fraction
IntPoly = tuple  # coefficient of x**i at index i, no trailing zeros

Number = Union[int, Fraction]


class SingularEvaluationError(ZeroDivisionError):
    """A q-integer that must be inverted evaluated to zero."""

    def __init__(self, k: int, message: str | None = None):
        self.k = k
        super().__init__(message or f"[{k}]_q vanishes; evaluation is singular at k={k}")


def parse_rational(text: str | int | Fraction) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(str(text).strip())


def format_rational(x: Number) -> str:
    return str(Fraction(x))


# ---------------------------------------------------------------------------
# integer polynomials


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    nz = [(j, y) for j, y in enumerate(b) if y]
    for i, x in enumerate(a):
        if x:
            for j, y in nz:
                out[i + j] += x * y
    return out


def _poly_exact_div(num: Sequence[int], den: Sequence[int]) -> list[int]:
    """Divide integer polynomials where ``den`` is monic and divides ``num``."""
    rem = list(num)
    d = len(den) - 1
    assert den[-1] == 1
    quot = [0] * (len(rem) - d)
    for i in range(len(rem) - 1, d - 1, -1):
        c = rem[i]
        if c:
            quot[i - d] = c
            for j, y in enumerate(den):
                rem[i - d + j] -= c * y
    if any(rem[:d]):
        raise ArithmeticError("polynomial division is not exact")
    return quot


@lru_cache(maxsize=None)
def phi_cyclotomic(n: int) -> IntPoly:
    """Return the coefficients of the n-th cyclotomic polynomial.

    Computed as (x**n - 1) divided by the product of Phi_d over the proper
    divisors d of n.

    >>> phi_cyclotomic(6)
    (1, -1, 1)
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"cyclotomic polynomial needs n >= 1, got {n!r}")
    num = [-1] + [0] * (n - 1) + [1]
    den: list[int] = [1]
    for d in range(1, n):
        if n % d == 0:
            den = _poly_mul(den, phi_cyclotomic(d))
    return tuple(_poly_exact_div(num, den))


def euler_phi(n: int) -> int:
    return len(phi_cyclotomic(n)) - 1


# ---------------------------------------------------------------------------
# field context


@dataclass(frozen=True, eq=False)
class FieldContext:
    """The field Q(zeta_n) for a fixed order n >= 2."""

    order: int
    cyclotomic_poly: IntPoly = field(init=False, repr=False)
    degree: int = field(init=False)
    _reduction: tuple = field(init=False, repr=False)
    _cache: dict = field(init=False, repr=False, compare=False)
    _lock: threading.Lock = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.order
        if not isinstance(n, int) or n < 2:
            raise ValueError(f"Q(zeta_n) needs an integer n >= 2, got {n!r}")
        phi = phi_cyclotomic(n)
        d = len(phi) - 1
        # x**m mod Phi_n for 0 <= m < n; exponents are first folded mod n.
        table = []
        cur = [0] * d
        cur[0] = 1
        for _ in range(n):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(d):
                    cur[j] -= top * phi[j]
        object.__setattr__(self, "cyclotomic_poly", phi)
        object.__setattr__(self, "degree", d)
        object.__setattr__(self, "_reduction", tuple(table))
        object.__setattr__(self, "_cache", {})
        object.__setattr__(self, "_lock", threading.Lock())

    def __repr__(self):
        return f"FieldContext(order={self.order}, degree={self.degree})"

    def __reduce__(self):
        return (get_context, (self.order,))

    def _reduce_ints(self, poly: Sequence[int]) -> list[int]:
        """Reduce an integer polynomial in zeta to the canonical basis."""
        n, d = self.order, self.degree
        if len(poly) > n:
            folded = [0] * n
            for i, c in enumerate(poly):
                if c:
                    folded[i % n] += c
            poly = folded
        out = list(poly[:d]) + [0] * max(0, d - len(poly))
        table = self._reduction
        for m in range(d, len(poly)):
            c = poly[m]
            if c:
                row = table[m]
                for j in range(d):
                    if row[j]:
                        out[j] += c * row[j]
        return out

    def _cached(self, key, build):
        # concurrent readers are fine; inserts are serialized
        try:
            return self._cache[key]
        except KeyError:
            pass
        value = build()
        with self._lock:
            return self._cache.setdefault(key, value)

    def element(self, poly_coeffs: Iterable[Number]) -> "CyclotomicElement":
        return field_new(self, poly_coeffs)

    @property
    def zero(self) -> "CyclotomicElement":
        return self._cached("zero", lambda: CyclotomicElement._raw(self, [0] * self.degree, 1))

    @property
    def one(self) -> "CyclotomicElement":
        return self.from_rational(1)

    @property
    def generator(self) -> "CyclotomicElement":
        return self.root_power(1)

    def from_rational(self, x: Number) -> "CyclotomicElement":
        x = Fraction(x)
        nums = [0] * self.degree
        nums[0] = x.numerator
        return CyclotomicElement._raw(self, nums, x.denominator)

    def root_power(self, e: int) -> "CyclotomicElement":
        """zeta_n ** e for any signed integer e."""
        e %= self.order
        return self._cached(("pow", e), lambda: CyclotomicElement._raw(self, list(self._reduction[e]), 1))

    def q_integer_inverse(self, k: int) -> "CyclotomicElement":
        """Cached 1/[k]_zeta for 1 <= k < n."""
        return self._cached(("qinv", k), lambda: element_invert(q_integer(k, self.generator)))

    def embed(self, x: "CyclotomicElement") -> complex:
        """Image of ``x`` under zeta_n -> exp(2 pi i / n)."""
        total = 0j
        for i, c in enumerate(x._nums):
            if c:
                total += float(Fraction(c, x._den)) * _unit_root(self.order, i)
        return total


@lru_cache(maxsize=4096)
def _unit_root(n: int, k: int) -> complex:
    theta = 2.0 * math.pi * (k % n) / n
    return complex(math.cos(theta), math.sin(theta))


_contexts: dict[int, FieldContext] = {}
_contexts_lock = threading.Lock()


def get_context(n: int) -> FieldContext:
    """Shared FieldContext for order n."""
    ctx = _contexts.get(n)
    if ctx is None:
        new = FieldContext(n)
        with _contexts_lock:
            ctx = _contexts.setdefault(n, new)
    return ctx


# ---------------------------------------------------------------------------
# elements


class CyclotomicElement:
    """An immutable element of Q(zeta_n) in the basis 1, zeta, ..., zeta**(phi(n)-1)."""

    __slots__ = ("context", "_nums", "_den", "_hash")

    def __init__(self, context: FieldContext, coeffs: Iterable[Number]):
        fracs = [Fraction(c) for c in coeffs]
        if len(fracs) != context.degree:
            raise ValueError(f"expected {context.degree} coefficients, got {len(fracs)}")
        den = 1
        for c in fracs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        self._set(context, [c.numerator * (den // c.denominator) for c in fracs], den)

    @classmethod
    def _raw(cls, context: FieldContext, nums: list[int], den: int) -> "CyclotomicElement":
        obj = cls.__new__(cls)
        obj._set(context, nums, den)
        return obj

    def _set(self, context, nums, den):
        if den < 0:
            nums, den = [-c for c in nums], -den
        if not any(nums):
            den = 1
        elif den != 1 and (g := math.gcd(den, *nums)) != 1:
            nums = [c // g for c in nums]
            den //= g
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "_nums", tuple(nums))
        object.__setattr__(self, "_den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicElement is immutable")

    def __reduce__(self):
        return (_rebuild_element, (self.context.order, self._nums, self._den))

    # -- views --------------------------------------------------------------
    @property
    def n(self) -> int:
        return self.context.order

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._nums)

    def is_zero(self) -> bool:
        return not any(self._nums)

    def is_rational(self) -> bool:
        return not any(self._nums[1:])

    def rational_part(self) -> Fraction:
        return Fraction(self._nums[0], self._den)

    def to_json(self) -> dict:
        return {"n": self.n, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "CyclotomicElement":
        return cls(get_context(int(obj["n"])), [parse_rational(c) for c in obj["coeffs"]])

    def __complex__(self) -> complex:
        return self.context.embed(self)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"({c})*z^{i}")
        body = " + ".join(terms) or "0"
        return f"<{body} in Q(zeta_{self.n})>"

    # -- equality -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, CyclotomicElement):
            return self.context.order == other.context.order and self._den == other._den and self._nums == other._nums
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self._nums[0], self._den) == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.context.order, self._nums, self._den))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "CyclotomicElement | None":
        if isinstance(other, CyclotomicElement):
            if other.context.order != self.context.order:
                raise ValueError(
                    f"cannot combine elements of Q(zeta_{self.n}) and Q(zeta_{other.n})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.context.from_rational(other)
        return None

    def _addsub(self, other, sign):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, da, b, db = self._nums, self._den, o._nums, o._den
        if da == db:
            nums = [x + sign * y for x, y in zip(a, b)]
            return CyclotomicElement._raw(self.context, nums, da)
        nums = [x * db + sign * y * da for x, y in zip(a, b)]
        return CyclotomicElement._raw(self.context, nums, da * db)

    def __add__(self, other):
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._addsub(other, -1)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return CyclotomicElement._raw(self.context, [-c for c in self._nums], self._den)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if type(other) is CyclotomicElement and other.context is self.context:
            prod = _poly_mul(self._nums, other._nums)
            return CyclotomicElement._raw(self.context, self.context._reduce_ints(prod), self._den * other._den)
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CyclotomicElement._raw(
                self.context, [c * other.numerator for c in self._nums], self._den * other.denominator
            )
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prod = _poly_mul(self._nums, o._nums)
        return CyclotomicElement._raw(self.context, self.context._reduce_ints(prod), self._den * o._den)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicElement":
        return element_invert(self)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(zeta_n)")
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * element_invert(o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * element_invert(self)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return element_invert(self) ** (-e)
        result = self.context.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result


def _rebuild_element(n: int, nums, den: int) -> CyclotomicElement:
    return CyclotomicElement._raw(get_context(n), list(nums), den)


# ---------------------------------------------------------------------------
# operations


def field_new(ctx: FieldContext, poly_coeffs: Iterable[Number]) -> CyclotomicElement:
    """Reduce a polynomial in zeta (any degree) to canonical form."""
    fracs = [Fraction(c) for c in poly_coeffs]
    den = 1
    for c in fracs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    nums = [c.numerator * (den // c.denominator) for c in fracs]
    return CyclotomicElement._raw(ctx, ctx._reduce_ints(nums), den)


def element_arith(a: CyclotomicElement, b: CyclotomicElement, op: str) -> CyclotomicElement:
    if a.context.order != b.context.order:
        raise ValueError(f"mismatched fields Q(zeta_{a.n}) and Q(zeta_{b.n})")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def _qpoly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(a) - 1 < db:
        return [], _trim(a)
    q = [Fraction(0)] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            f = c / lead
            q[i - db] = f
            for j in range(db + 1):
                a[i - db + j] -= f * b[j]
    return _trim(q), _trim(a[:db])


def _qpoly_sub_mul(a: list[Fraction], q: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """a - q*b"""
    out = list(a) + [Fraction(0)] * max(0, len(q) + len(b) - 1 - len(a))
    for i, x in enumerate(q):
        if x:
            for j, y in enumerate(b):
                out[i + j] -= x * y
    return _trim(out)


def element_invert(a: CyclotomicElement) -> CyclotomicElement:
    """Multiplicative inverse by the extended Euclidean algorithm in Q[x] against Phi_n."""
    if a.is_zero():
        raise ZeroDivisionError("zero has no inverse in Q(zeta_n)")
    ctx = a.context
    # track s with s*a = r (mod Phi_n); scale of a's denominator applied at the end
    r0 = [Fraction(c) for c in ctx.cyclotomic_poly]
    r1 = _trim([Fraction(c) for c in a._nums])
    s0: list[Fraction] = []
    s1: list[Fraction] = [Fraction(1)]
    while len(r1) > 1:
        q, rem = _qpoly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _qpoly_sub_mul(s0, q, s1)
    # r1 is now a nonzero constant since Phi_n is irreducible
    c = r1[0]
    scale = Fraction(a._den) / c
    return field_new(ctx, [x * scale for x in s1])


def power_of_root(ctx: FieldContext, e: int) -> CyclotomicElement:
    return ctx.root_power(e)


def q_integer(k: int, q):
    """[k]_q = 1 + q + ... + q**(k-1) by direct summation."""
    if k < 1:
        raise ValueError(f"q-integer needs k >= 1, got {k}")
    total = q * 0 + 1
    power = total
    for _ in range(k - 1):
        power = power * q
        total = total + power
    return total


def binomial_big(m: int, k: int) -> int:
    if k < 0:
        raise ValueError(f"binomial lower index must be >= 0, got {k}")
    if m < 0:
        raise ValueError(f"binomial upper index must be >= 0, got {m}")
    return math.comb(m, k)
