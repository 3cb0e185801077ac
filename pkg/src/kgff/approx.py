"""Error functions, the V-valued floor, B_q membership and N(Q, A).

An error function psi with values in ``{k**-s}`` is stored through its
exponent: ``psi(k**r) = k**-s(r)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from . import _kernels
from .algebra import FieldSpec, Poly
from .errors import InsufficientPrecision, NonPositiveInput, OutOfRange, ZeroVector
from .laurent import FracMatrix, qa_fracpart


@dataclass(frozen=True)
class Psi:
    """Exponent map r -> s(r), either ``a*r + b`` or an explicit table.

    ``allow_zero`` admits s(r) = 0 (psi = 1); by default exponents must be
    at least 1.
    """

    kind: str
    a: int = 0
    b: int = 0
    table: tuple[int, ...] = ()
    allow_zero: bool = False

    def __post_init__(self):
        lo = 0 if self.allow_zero else 1
        if self.kind == "linear":
            a = Fraction(self.a)
            if a.denominator != 1 or a < 0:
                raise ValueError("linear psi needs a nonnegative integer slope")
            object.__setattr__(self, "a", int(a))
            if int(self.b) != self.b:
                raise ValueError("linear psi needs an integer offset")
            object.__setattr__(self, "b", int(self.b))
            if self.b < lo:
                raise ValueError(f"s(0) = {self.b} < {lo}")
        elif self.kind == "table":
            tab = tuple(int(s) for s in self.table)
            if not tab:
                raise ValueError("table psi needs at least one entry")
            if min(tab) < lo:
                raise ValueError(f"table psi has an exponent below {lo}")
            if any(x > y for x, y in zip(tab, tab[1:])):
                raise ValueError("psi must be non-increasing, so s(r) must be nondecreasing")
            object.__setattr__(self, "table", tab)
        else:
            raise ValueError(f"unknown psi kind {self.kind!r}")

    @classmethod
    def linear(cls, a: int | Rational, b: int, allow_zero: bool = False) -> Psi:
        return cls("linear", a=a, b=b, allow_zero=allow_zero)

    @classmethod
    def from_table(cls, table: Sequence[int], allow_zero: bool = False) -> Psi:
        return cls("table", table=tuple(table), allow_zero=allow_zero)

    @property
    def max_r(self) -> int | None:
        return len(self.table) - 1 if self.kind == "table" else None

    def s(self, r: int) -> int:
        return psi_eval(self, r)

    def value(self, r: int, k: int) -> Fraction:
        """psi(k**r) as an exact rational."""
        return Fraction(1, k ** self.s(r))

    def __str__(self) -> str:
        if self.kind == "linear":
            return f"linear:{self.a},{self.b}"
        return "table:" + ",".join(map(str, self.table))


def psi_eval(psi: Psi, r: int) -> int:
    if r < 0:
        raise OutOfRange(f"r = {r} is negative")
    if psi.kind == "linear":
        return psi.a * r + psi.b
    if r >= len(psi.table):
        raise OutOfRange(f"r = {r} beyond the psi table (max {len(psi.table) - 1})")
    return psi.table[r]


def parse_psi(text: str, allow_zero: bool = False) -> Psi:
    """Parse ``linear:a,b`` or ``table:s0,s1,...``."""
    kind, _, body = text.strip().partition(":")
    try:
        vals = [int(v) for v in body.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"bad psi string {text!r}") from None
    if kind == "linear":
        if len(vals) != 2:
            raise ValueError("linear psi takes exactly two integers: linear:a,b")
        return Psi.linear(vals[0], vals[1], allow_zero=allow_zero)
    if kind == "table":
        return Psi.from_table(vals, allow_zero=allow_zero)
    raise ValueError(f"bad psi string {text!r}; expected linear:a,b or table:s0,s1,...")


def floor_to_V(x, k: int) -> int:
    """Exponent n with ``k**-n <= x < k**(1-n)``.

    ``x`` may be an int, float or Fraction; the comparison is exact.
    """
    x = Fraction(x)
    if x <= 0:
        raise NonPositiveInput(f"x = {x} must be positive")
    n = int(-math.floor((math.log(x.numerator) - math.log(x.denominator)) / math.log(k)))
    kf = Fraction(k)
    while kf ** (-n) > x:
        n += 1
    while kf ** (1 - n) <= x:
        n -= 1
    return n


def _height_exponent(q: Sequence[Poly]) -> int:
    if all(qi.is_zero() for qi in q):
        raise ZeroVector("q must be nonzero")
    return max(qi.deg for qi in q)


def bq_member(q: Sequence[Poly], A: FracMatrix, psi: Psi) -> bool:
    """Whether ``dist(qA, F[X]^n) < psi(|q|)``, decided from A's known digits."""
    r = _height_exponent(q)
    s = psi_eval(psi, r)
    if A.t < r + s:
        raise InsufficientPrecision(
            f"precision {A.t} < deg {r} + s {s}: the inequality is undecidable")
    frac = qa_fracpart(q, A)
    return all(c == 0 for x in frac for c in x.a[:s])


# --- fast counting through the enumeration kernel ---------------------------

def _prod_digit_table(F: FieldSpec) -> np.ndarray:
    """table[e, c, f] = digit f of Y^e * c."""
    out = np.zeros((F.l, F.k, F.l), dtype=np.int64)
    for e in range(F.l):
        ye = F.p ** e
        for c in range(F.k):
            out[e, c] = F.digits(F.mul(ye, c))
    return out


def solution_rows(A: FracMatrix, R: int, J: int) -> np.ndarray:
    """Z/p matrix sending the digits of q (deg <= R) to the first J
    coefficients of every component of the fractional part of qA.

    Row ``(d*m + i)*l + e`` is the image of ``q_i = Y^e X^d``; column
    ``(j*n + c)*l + f`` is digit f of the X^-(j+1) coefficient of component c.
    """
    F = A.field
    m, n, t = A.coeffs.shape
    if R + J > t:
        raise InsufficientPrecision(f"need precision {R + J}, matrix has {t}")
    l = F.l
    pd = _prod_digit_table(F)
    blocks = []
    for d in range(R + 1):
        window = A.coeffs[:, :, d:d + J]                  # (m, n, J)
        img = pd[:, window, :]                             # (l, m, n, J, l)
        blocks.append(img.transpose(1, 0, 3, 2, 4).reshape(m * l, J * n * l))
    return np.concatenate(blocks, axis=0)


def shell_counts(Q: int, A: FracMatrix, psi: Psi, *, orbits: bool = False,
                 threads: int = 1, backend: str | None = None) -> list[int]:
    """Per-height counts: entry r is the number of q with |q| = k**r in B_q.

    ``orbits`` counts one representative per scalar orbit (top coefficient
    equal to 1) and multiplies by k - 1.
    """
    if Q < 0:
        raise ValueError("Q must be nonnegative")
    F = A.field
    need = Q + psi_eval(psi, Q)
    if A.t < need:
        raise InsufficientPrecision(f"precision {A.t} < Q + s(Q) = {need}")
    m, n, l, p = A.m, A.n, F.l, F.p
    rows = solution_rows(A, Q, A.t - Q)
    out = []
    for r in range(Q + 1):
        width = psi_eval(psi, r) * n * l
        if orbits:
            c = 0
            for i in range(m):
                lo = p ** (l * (r * m + i))
                c += _kernels.count_prefix_zero_parallel(rows, p, lo, 2 * lo, width,
                                                         threads, backend)
            out.append(c * (F.k - 1))
        else:
            lo, hi = p ** (l * m * r), p ** (l * m * (r + 1))
            out.append(_kernels.count_prefix_zero_parallel(rows, p, lo, hi, width,
                                                           threads, backend))
    return out


def count_solutions(Q: int, A: FracMatrix, psi: Psi, *, orbits: bool = False,
                    threads: int = 1, backend: str | None = None) -> int:
    """N(Q, A): nonzero q with |q| <= k**Q and dist(qA, F[X]^n) < psi(|q|)."""
    return sum(shell_counts(Q, A, psi, orbits=orbits, threads=threads, backend=backend))


def count_solutions_slow(Q: int, A: FracMatrix, psi: Psi) -> int:
    """Reference N(Q, A) through :func:`bq_member`, one vector at a time."""
    from .counting import iter_vectors

    return sum(bq_member(q, A, psi)
               for r in range(Q + 1) for q in iter_vectors(r, A.m, A.field))


__all__ = [
    "Psi", "psi_eval", "parse_psi", "floor_to_V", "bq_member", "solution_rows",
    "shell_counts", "count_solutions", "count_solutions_slow",
]
