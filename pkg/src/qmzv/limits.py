"""Floating-point z-values at exp(2 pi i / n) and their n -> infinity limits."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

from .qsums import IndexTuple, nested_sum
from .results import COUNTEREXAMPLE, VERIFIED, VerificationResult, timed

LAST_VALUE = "last_value"
RICHARDSON = "richardson"


class NumericFailure(ArithmeticError):
    pass


@dataclass
class XiEstimate:
    value: complex
    n_sequence: list[int]
    raw_values: list[complex]
    error_estimate: float
    scheme: str = RICHARDSON
    corrections: list[float] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "value": {"re": self.value.real, "im": self.value.imag},
            "n_sequence": list(self.n_sequence),
            "raw_values": [{"re": z.real, "im": z.imag} for z in self.raw_values],
            "error_estimate": self.error_estimate,
            "scheme": self.scheme,
        }


def _root_tables(n: int) -> tuple[list[complex], list[complex]]:
    # zeta^e for 0 <= e < n, and 1/[k] for 1 <= k < n from
    # 1 - zeta^k = -2i sin(pi k/n) exp(i pi k/n), which avoids cancellation
    roots = [cmath.exp(2j * math.pi * e / n) for e in range(n)]
    s1 = math.sin(math.pi / n)
    inv = [0j] + [s1 / math.sin(math.pi * k / n) * cmath.exp(1j * math.pi * (1 - k) / n) for k in range(1, n)]
    return roots, inv


def zn_complex(s: Sequence[int], n: int) -> complex:
    """z_n(s; exp(2 pi i/n)) in double precision, via the shared nested-sum engine."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    idx = IndexTuple.for_z(s)
    if idx.depth == 0:
        return 1 + 0j
    roots, inv = _root_tables(n)
    pairs = list(zip(idx.s, idx.t))

    def terms(k):
        return [roots[(k * t) % n] * inv[k] ** sv for sv, t in pairs]

    value = nested_sum(n - 1, terms, [True] * (idx.depth - 1), 1 + 0j)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NumericFailure(f"non-finite z-value for s={tuple(s)}, n={n}")
    return value


def doubling_ladder(n_max: int, n_start: int = 16) -> list[int]:
    if n_max < n_start:
        raise ValueError(f"n_max must be >= {n_start}, got {n_max}")
    ladder = [n_start]
    while ladder[-1] * 2 <= n_max:
        ladder.append(ladder[-1] * 2)
    return ladder


def _sum_z(indices: Sequence[Sequence[int]], n: int) -> complex:
    return sum((zn_complex(s, n) for s in indices), 0j)


def extrapolate(ns: Sequence[int], values: Sequence[complex], scheme: str) -> tuple[complex, float, list[float]]:
    """Apply ``scheme`` along the ladder; returns (value, last correction size, all correction sizes).

    Richardson assumes the error is c/n + O(1/n^2) and uses the last two
    rungs: 2*z_{2n} - z_n.
    """
    if scheme == LAST_VALUE:
        diffs = [abs(b - a) for a, b in zip(values, values[1:])]
        return values[-1], (diffs[-1] if diffs else abs(values[-1])), diffs
    if scheme != RICHARDSON:
        raise ValueError(f"unknown scheme {scheme!r}")
    corrections = []
    for (n0, a), (n1, b) in zip(zip(ns, values), zip(ns[1:], values[1:])):
        ratio = n1 / n0
        acc = (ratio * b - a) / (ratio - 1)
        corrections.append(abs(acc - b))
    if len(values) < 2:
        # nothing to extrapolate from; report the value's own size
        return values[-1], abs(values[-1]), corrections
    n0, n1 = ns[-2], ns[-1]
    ratio = n1 / n0
    value = (ratio * values[-1] - values[-2]) / (ratio - 1)
    return value, corrections[-1], corrections


def xi_estimate_sum(indices: Sequence[Sequence[int]], n_max: int, scheme: str = RICHARDSON) -> XiEstimate:
    """Estimate the limit of a sum of z-values along n = 16, 32, ..., n_max."""
    ns = doubling_ladder(n_max)
    raw = [_sum_z(indices, n) for n in ns]
    value, err, corrections = extrapolate(ns, raw, scheme)
    return XiEstimate(value, ns, raw, err, scheme, corrections)


def xi_estimate(s: Sequence[int], n_max: int, scheme: str = RICHARDSON) -> XiEstimate:
    return xi_estimate_sum([tuple(s)], n_max, scheme)


def corollary1_targets(a: int, b: int) -> tuple[complex, complex]:
    """Limits of the two symmetric sums: -(-2 pi i)^(a+b+2)/(a+b+3)! and 0."""
    m = a + b
    return -((-2j * math.pi) ** (m + 2)) / math.factorial(m + 3), 0j


def corollary1_check(a: int, b: int, n_max: int = 8192, tol: float = 5e-3, scheme: str = RICHARDSON) -> VerificationResult:
    """Numerical check of both limit identities for the pair (a, b)."""
    params = {"a": a, "b": b, "n_max": n_max, "scheme": scheme}
    one = [(1,) * a + (2,) + (1,) * b, (1,) * b + (2,) + (1,) * a]
    two = [(2,) * a + (3,) + (2,) * b, (2,) * b + (3,) + (2,) * a]
    with timed() as ms:
        first = xi_estimate_sum(one, n_max, scheme)
        second = xi_estimate_sum(two, n_max, scheme)
    t1, t2 = corollary1_targets(a, b)
    res1, res2 = abs(first.value - t1), abs(second.value - t2)
    status = VERIFIED if max(res1, res2) <= tol else COUNTEREXAMPLE
    note = (
        f"residuals {res1:.3e} (1-2-1 sum), {res2:.3e} (2-3-2 sum); tol {tol:g}; "
        f"error estimates {first.error_estimate:.3e}, {second.error_estimate:.3e}"
    )
    result = VerificationResult("corollary1", params, status, [first.value, second.value], [t1, t2], note, ms[0])
    result.extra.update(residuals=(res1, res2), estimates=(first, second))
    return result
