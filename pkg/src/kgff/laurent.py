"""Truncated fractional Laurent series over F.

A :class:`Frac` with precision ``t`` stores the coefficients of
``X^-1, ..., X^-t`` and stands for the cylinder of every element of the open
unit ball ``{x : |x| < 1}`` sharing them. Products with polynomials only
expose coefficients that do not depend on the unknown tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .algebra import FieldSpec, Poly, format_elem, parse_elem, poly_abs
from .errors import PrecisionExhausted


@dataclass(frozen=True)
class Exact:
    """Absolute value exactly ``k**-v``."""

    v: int


@dataclass(frozen=True)
class BelowPrecision:
    """Absolute value ``< k**-t``; the known window is all zero."""

    t: int


ValuationResult = Union[Exact, BelowPrecision]


@dataclass(frozen=True)
class Frac:
    field: FieldSpec
    a: tuple[int, ...]  # a[i] is the coefficient of X^-(i+1)

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(c) for c in self.a))
        for c in self.a:
            if not 0 <= c < self.field.k:
                raise ValueError(f"coefficient code {c} out of range for {self.field}")

    @property
    def t(self) -> int:
        return len(self.a)

    def __add__(self, other: Frac) -> Frac:
        F = self.field
        t = min(self.t, other.t)
        return Frac(F, tuple(F.add(x, y) for x, y in zip(self.a[:t], other.a[:t])))

    def truncate(self, t: int) -> Frac:
        return Frac(self.field, self.a[:t])

    def __str__(self) -> str:
        return format_frac(self)


FracVec = tuple  # tuple[Frac, ...]


class FracMatrix:
    """An m x n matrix of fractional series sharing one precision ``t``.

    ``coeffs[i, j, u]`` is the code of the X^-(u+1) coefficient of entry
    (i, j). The array is read-only.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs):
        arr = np.array(coeffs, dtype=np.int64)
        if arr.ndim != 3 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("FracMatrix needs an (m, n, t) coefficient array with m, n >= 1")
        if arr.size and (arr.min() < 0 or arr.max() >= field.k):
            raise ValueError(f"coefficient codes out of range for {field}")
        arr.setflags(write=False)
        self.field = field
        self.coeffs = arr

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[Frac]]) -> FracMatrix:
        F = entries[0][0].field
        ts = {x.t for row in entries for x in row}
        if len(ts) != 1:
            raise ValueError("all entries of a FracMatrix must share one precision")
        return cls(F, [[list(x.a) for x in row] for row in entries])

    @property
    def m(self) -> int:
        return self.coeffs.shape[0]

    @property
    def n(self) -> int:
        return self.coeffs.shape[1]

    @property
    def t(self) -> int:
        return self.coeffs.shape[2]

    def entry(self, i: int, j: int) -> Frac:
        return Frac(self.field, tuple(self.coeffs[i, j].tolist()))

    def column(self, j: int) -> tuple[Frac, ...]:
        return tuple(self.entry(i, j) for i in range(self.m))

    def __eq__(self, other) -> bool:
        return (isinstance(other, FracMatrix) and self.field == other.field
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.field, self.coeffs.shape, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        return f"FracMatrix({self.field}, m={self.m}, n={self.n}, t={self.t})"


def frac_abs(x: Frac) -> ValuationResult:
    for i, c in enumerate(x.a):
        if c:
            return Exact(i + 1)
    return BelowPrecision(x.t)


def poly_frac_mul(q: Poly, x: Frac) -> tuple[Poly, Frac]:
    """Split ``q*x`` into its polynomial part and its exactly-known tail."""
    F = x.field
    t = x.t
    dq = max(q.deg, 0)
    if dq > t:
        raise PrecisionExhausted(f"deg q = {q.deg} exceeds precision t = {t}")
    # X^d * X^-(i+1) = X^(d-i-1): polynomial part when i < d
    integer = []
    for e in range(dq):
        acc = 0
        for d in range(e + 1, dq + 1):
            qd = q.coeff(d)
            if qd:
                acc = F.add(acc, F.mul(qd, x.a[d - e - 1]))
        integer.append(acc)
    tail = []
    for j in range(t - dq):
        acc = 0
        for d, qd in enumerate(q.coeffs):
            if qd:
                acc = F.add(acc, F.mul(qd, x.a[j + d]))
        tail.append(acc)
    return Poly(F, tuple(integer)), Frac(F, tuple(tail))


def qa_fracpart(q: Sequence[Poly], A: FracMatrix) -> tuple[Frac, ...]:
    """The fractional part of ``q A``; its norm is the distance from qA to F[X]^n."""
    if len(q) != A.m:
        raise ValueError(f"vector of length {len(q)} against {A.m} matrix rows")
    F = A.field
    width = A.t - max(max(qi.deg for qi in q), 0)
    if width < 0:
        raise PrecisionExhausted("polynomial degree exceeds matrix precision")
    out = []
    for j in range(A.n):
        acc = Frac(F, (0,) * width)
        for i, qi in enumerate(q):
            if not qi.is_zero():
                _, tail = poly_frac_mul(qi, A.entry(i, j))
                acc = acc + tail.truncate(width)
        out.append(acc)
    return tuple(out)


def inf_norm_polyvec(q: Sequence[Poly]) -> int:
    return max((poly_abs(qi) for qi in q), default=0)


def inf_norm_frac(v: Sequence[Frac]) -> ValuationResult:
    best = None
    for x in v:
        r = frac_abs(x)
        if isinstance(r, Exact) and (best is None or r.v < best):
            best = r.v
    if best is not None:
        return Exact(best)
    return BelowPrecision(min(x.t for x in v))


def format_frac(x: Frac) -> str:
    return f"{x.t}:" + ",".join(format_elem(x.field, c) for c in x.a)


def parse_frac(text: str, F: FieldSpec) -> Frac:
    head, _, body = text.strip().partition(":")
    t = int(head)
    parts = [s for s in body.split(",") if s.strip()] if body.strip() else []
    if len(parts) != t:
        raise ValueError(f"{text!r} declares precision {t} but lists {len(parts)} coefficients")
    return Frac(F, tuple(parse_elem(F, s) for s in parts))
