"""Exact counts of polynomial vectors by height, the main term Phi(Q), and
the divisor-weighted sums tau(q) and T(Q).

All values are :class:`fractions.Fraction` whose denominators are powers of
k. Nothing in this module touches floating point.
"""

from __future__ import annotations

import enum
import itertools
from fractions import Fraction
from typing import Iterator, Sequence

from . import _kernels
from .algebra import FieldSpec, Poly, monic_divisor_count, poly_gcd
from .approx import Psi, psi_eval
from .errors import BudgetExceeded, ZeroVector

DEFAULT_BUDGET = 1 << 28


class CountVariant(enum.Enum):
    PAPER_FORMULA = "paper"
    EXACT_ENUMERATION = "exact"


PAPER = CountVariant.PAPER_FORMULA
EXACT = CountVariant.EXACT_ENUMERATION


def check_budget(cells: int, budget: int | None, what: str = "enumeration") -> None:
    if budget is not None and cells > budget:
        raise BudgetExceeded(
            f"{what} needs {cells} cells, budget is {budget}; "
            "lower Q/m or raise --budget")


def iter_vectors(r: int, m: int, F: FieldSpec) -> Iterator[tuple[Poly, ...]]:
    """Every q in F[X]^m with |q|_inf = k**r, in graded order.

    The order matches the enumeration kernels: vectors are read as base-k
    integers whose digit ``d*m + i`` is the X^d coefficient of q_i, and the
    height-r shell is the integer range [k**(m r), k**(m (r+1))).
    """
    if r < 0 or m < 1:
        raise ValueError("need r >= 0 and m >= 1")
    k = F.k
    for x in range(k ** (m * r), k ** (m * (r + 1))):
        digits = []
        for _ in range(m * (r + 1)):
            x, c = divmod(x, k)
            digits.append(c)
        yield tuple(Poly(F, tuple(digits[d * m + i] for d in range(r + 1))) for i in range(m))


def count_height(r: int, m: int, F: FieldSpec, variant: CountVariant = EXACT) -> int:
    """#{q : |q| = k**r}: the quoted formula m(k-1)k^(m-1+rm), or the true count."""
    if r < 0 or m < 1:
        raise ValueError("need r >= 0 and m >= 1")
    k = F.k
    if variant is PAPER:
        return m * (k - 1) * k ** (m - 1 + r * m)
    return k ** (r * m) * (k ** m - 1)


def phi(Q: int, psi: Psi, m: int, n: int, F: FieldSpec,
        variant: CountVariant = EXACT) -> Fraction:
    if Q < 0:
        raise ValueError("Q must be nonnegative")
    k = F.k
    return sum((Fraction(count_height(r, m, F, variant), k ** (psi_eval(psi, r) * n))
                for r in range(Q + 1)), Fraction(0))


def d_of(q: Sequence[Poly]) -> int:
    """Number of monic common divisors of the coordinates of q."""
    nonzero = [qi for qi in q if not qi.is_zero()]
    if not nonzero:
        raise ZeroVector("d(q) needs a nonzero vector")
    g = nonzero[0]
    for qi in nonzero[1:]:
        if g.deg == 0:
            break
        g = poly_gcd(g, qi)
    return monic_divisor_count(g)


def tau(q: Sequence[Poly], psi: Psi, n: int) -> Fraction:
    if all(qi.is_zero() for qi in q):
        raise ZeroVector("tau needs a nonzero vector")
    r = max(qi.deg for qi in q)
    k = q[0].field.k
    return Fraction(d_of(q), k ** (psi_eval(psi, r) * n))


def t_series(Q: int, psi: Psi, m: int, n: int, F: FieldSpec,
             budget: int | None = DEFAULT_BUDGET, backend: str | None = None) -> list[Fraction]:
    """[T(0), ..., T(Q)] from one enumeration of the ball |q| <= k**Q."""
    check_budget(F.k ** (m * (Q + 1)), budget, "T(Q) enumeration")
    k = F.k
    out, total = [], Fraction(0)
    for r in range(Q + 1):
        hist = _kernels.gcd_histogram(F, m, r, backend)
        dsum = sum(cnt * monic_divisor_count(Poly(F, g)) for g, cnt in hist.items())
        total += Fraction(dsum, k ** (psi_eval(psi, r) * n))
        out.append(total)
    return out


def big_T(Q: int, psi: Psi, m: int, n: int, F: FieldSpec,
          budget: int | None = DEFAULT_BUDGET) -> Fraction:
    """T(Q) = sum of tau(q) over nonzero q with |q| <= k**Q, by enumeration."""
    return t_series(Q, psi, m, n, F, budget)[-1]


def counts_table(Q: int, m: int, F: FieldSpec, validate: bool = True,
                 budget: int | None = DEFAULT_BUDGET) -> list[dict]:
    """Rows of counts.csv: exact vs formula count for r = 0..Q.

    With ``validate`` the exact count is also checked against the literal
    length of :func:`iter_vectors` (subject to ``budget``).
    """
    if validate:
        check_budget(F.k ** (m * (Q + 1)), budget, "height enumeration")
    rows = []
    for r in range(Q + 1):
        exact = count_height(r, m, F, EXACT)
        if validate:
            literal = sum(1 for _ in iter_vectors(r, m, F))
            if literal != exact:  # pragma: no cover - would be a bug
                raise AssertionError(f"r={r}: stream has {literal} vectors, closed form {exact}")
        paper = count_height(r, m, F, PAPER)
        ratio = Fraction(paper, exact)
        rows.append({"r": r, "exact_count": exact, "paper_count": paper,
                     "ratio_num": ratio.numerator, "ratio_den": ratio.denominator})
    return rows


def pow_k_parts(x: Fraction, k: int) -> tuple[int, int]:
    """(num, e) with x == num / k**e and e minimal; the reduced denominator
    must divide a power of k."""
    x = Fraction(x)
    den, e, scale = x.denominator, 0, 1
    while scale % den:
        if scale > den * k ** 64:
            raise ValueError(f"denominator of {x} does not divide a power of {k}")
        scale *= k
        e += 1
    return x.numerator * (scale // den), e


def format_pow_k(x: Fraction, k: int) -> str:
    num, e = pow_k_parts(x, k)
    return f"{num}/{k}^{e}"


def all_nonzero_vectors(Q: int, m: int, F: FieldSpec) -> Iterator[tuple[Poly, ...]]:
    return itertools.chain.from_iterable(iter_vectors(r, m, F) for r in range(Q + 1))
