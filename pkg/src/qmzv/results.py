"""Verification result records and their JSON form."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exactfield import CyclotomicElement, format_rational

VERIFIED = "verified"
COUNTEREXAMPLE = "counterexample"
SKIPPED = "skipped"
ERROR = "error"
STATUSES = (VERIFIED, COUNTEREXAMPLE, SKIPPED, ERROR)


def serialize_value(x: Any) -> Any:
    """JSON form of a field value.

    Cyclotomic elements use ``{"n", "coeffs"}``; a plain rational is written
    the same way as an element of Q = Q(zeta_1).  Complex approximations
    become ``{"re", "im"}``.
    """
    if x is None:
        return None
    if isinstance(x, CyclotomicElement):
        return x.to_json()
    if isinstance(x, bool):
        return x
    if isinstance(x, (int, Fraction)):
        return {"n": 1, "coeffs": [format_rational(x)]}
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, float):
        return {"re": x, "im": 0.0}
    if isinstance(x, (list, tuple)):
        return [serialize_value(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _param_json(v: Any) -> Any:
    if isinstance(v, (list, tuple)):
        return [_param_json(x) for x in v]
    if isinstance(v, Fraction):
        return format_rational(v)
    return v


def _param_key(v: Any) -> Any:
    if isinstance(v, (list, tuple)):
        return (len(v), tuple(_param_key(x) for x in v))
    if isinstance(v, str):
        return (0, v)
    return v


@dataclass
class VerificationResult:
    kind: str
    params: dict
    status: str
    lhs: Any = None
    rhs: Any = None
    note: str = ""
    runtime_ms: int = 0
    extra: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status in (VERIFIED, SKIPPED)

    def sort_key(self):
        return (self.kind, tuple((k, _param_key(v)) for k, v in self.params.items()))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": {k: _param_json(v) for k, v in self.params.items()},
            "status": self.status,
            "lhs": serialize_value(self.lhs),
            "rhs": serialize_value(self.rhs),
            "note": self.note,
            "runtime_ms": int(self.runtime_ms),
        }


@contextmanager
def timed():
    """Yields a one-element list that receives the elapsed milliseconds."""
    box = [0]
    start = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = int(round((time.perf_counter() - start) * 1000))


def compare(kind: str, params: dict, lhs, rhs, note: str = "", runtime_ms: int = 0) -> VerificationResult:
    status = VERIFIED if lhs == rhs else COUNTEREXAMPLE
    return VerificationResult(kind, params, status, lhs, rhs, note, runtime_ms)
