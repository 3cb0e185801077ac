from fractions import Fraction

import pytest

from kgff.algebra import FieldSpec, Poly
from kgff.approx import Psi
from kgff.counting import (EXACT, PAPER, big_T, count_height, counts_table, d_of,
                           format_pow_k, iter_vectors, phi, pow_k_parts, t_series, tau)
from kgff.errors import BudgetExceeded, ZeroVector

from conftest import P, SMALL_FIELDS

S1 = Psi.linear(1, 1)
S_ODD = Psi.linear(2, 1)


def test_iter_vectors_order_and_heights(F2):
    shell = list(iter_vectors(0, 2, F2))
    assert shell == [(P(F2, 1), Poly(F2)), (Poly(F2), P(F2, 1)), (P(F2, 1), P(F2, 1))]
    for r in range(3):
        vs = list(iter_vectors(r, 2, F2))
        assert all(max(qi.deg for qi in q) == r for q in vs)
        assert len(set(vs)) == len(vs) == count_height(r, 2, F2)


@pytest.mark.parametrize("F", SMALL_FIELDS, ids=str)
@pytest.mark.parametrize("m", [1, 2, 3])
def test_count_height_matches_stream(F, m):
    for r in range(3 if F.k ** (3 * m) < 2 ** 14 else 2):
        assert count_height(r, m, F) == sum(1 for _ in iter_vectors(r, m, F))


def test_count_height_examples(F2):
    assert [count_height(r, 2, F2) for r in range(3)] == [3, 12, 48]
    assert [count_height(r, 2, F2, PAPER) for r in range(3)] == [4, 16, 64]
    for k in (2, 3, 4, 5):
        F = FieldSpec(*{2: (2,), 3: (3,), 4: (2, 2), 5: (5,)}[k])
        for r in range(4):
            assert count_height(r, 1, F) == count_height(r, 1, F, PAPER)


def test_phi_examples(F2):
    assert phi(1, S1, 2, 1, F2, EXACT) == Fraction(9, 2)
    assert phi(1, S1, 2, 1, F2, PAPER) == 6
    assert phi(0, Psi.linear(0, 1), 2, 1, F2) == Fraction(3, 2)
    assert phi(2, Psi.linear(0, 1), 2, 1, F2) == Fraction(3 + 12 + 48, 2)
    assert phi(1, S1, 2, 2, F2) == Fraction(3, 4) + Fraction(12, 16)


@pytest.mark.parametrize("F", SMALL_FIELDS, ids=str)
def test_phi_ratio_formula_over_exact(F):
    """Shell by shell the formula overcounts by m(k-1)/k / (1 - k^-m)."""
    k = F.k
    for m in (1, 2, 3):
        ratio = Fraction(m * (k - 1) * k ** (m - 1), k ** m - 1)
        for r in range(4):
            assert Fraction(count_height(r, m, F, PAPER), count_height(r, m, F)) == ratio
        assert phi(3, S1, m, 1, F, PAPER) == ratio * phi(3, S1, m, 1, F, EXACT)


def test_d_of_and_tau(F2, F3):
    X = P(F2, 0, 1)
    assert d_of((X, Poly(F2))) == 2
    assert d_of((P(F2, 0, 1, 1), P(F2, 0, 0, 1, 1))) == 4   # gcd X(X+1)
    assert d_of((P(F2, 1), X)) == 1
    assert d_of((P(F3, 0, 0, 2), Poly(F3))) == 3             # 1, X, X^2
    assert tau((X, Poly(F2)), S1, 1) == Fraction(2, 4)
    with pytest.raises(ZeroVector):
        d_of((Poly(F2), Poly(F2)))
    with pytest.raises(ZeroVector):
        tau((Poly(F2),), S1, 1)


def closed_form_T(Q, psi, m, n, k):
    """Sum of d(q) over |q| = k**r by counting multiples of each monic g."""
    total = Fraction(0)
    for r in range(Q + 1):
        dsum = sum(k ** e * k ** ((r - e) * m) * (k ** m - 1) for e in range(r + 1))
        total += Fraction(dsum, k ** (psi.s(r) * n))
    return total


def test_big_T_examples(F2):
    assert big_T(0, S_ODD, 2, 1, F2) == Fraction(3, 2)
    expected = [Fraction(3, 2), Fraction(15, 4), Fraction(51, 8), Fraction(147, 16),
                Fraction(387, 32)]
    assert t_series(4, S_ODD, 2, 1, F2) == expected


@pytest.mark.parametrize("F", SMALL_FIELDS, ids=str)
@pytest.mark.parametrize("m", [1, 2, 3])
def test_T_matches_closed_form(F, m, backend):
    Q = max(q for q in range(3) if q == 0 or F.k ** (m * (q + 1)) <= 2 ** 14)
    for n in (1, 2):
        got = t_series(Q, S1, m, n, F, backend=backend)
        assert got == [closed_form_T(q, S1, m, n, F.k) for q in range(Q + 1)]


def test_T_matches_direct_tau_sum(F3):
    direct = sum(tau(q, S1, 1) for r in range(2) for q in iter_vectors(r, 2, F3))
    assert big_T(1, S1, 2, 1, F3) == direct


def test_T_over_phi_bounded(F2):
    Ts = t_series(8, S_ODD, 2, 1, F2)
    for Q, T in enumerate(Ts):
        assert T == closed_form_T(Q, S_ODD, 2, 1, 2)
        assert 1 <= T / phi(Q, S_ODD, 2, 1, F2) <= 4


def test_budget_guard(F2):
    with pytest.raises(BudgetExceeded):
        t_series(10, S1, 2, 1, F2, budget=1000)
    with pytest.raises(BudgetExceeded):
        counts_table(10, 2, F2, budget=1000)


def test_counts_table(F2):
    rows = counts_table(3, 2, F2)
    assert [r["exact_count"] for r in rows] == [3 * 4 ** r for r in range(4)]
    assert [r["paper_count"] for r in rows] == [4 * 4 ** r for r in range(4)]
    assert all((r["ratio_num"], r["ratio_den"]) == (4, 3) for r in rows)


def test_pow_k_format():
    assert pow_k_parts(Fraction(9, 2), 2) == (9, 1)
    assert format_pow_k(Fraction(1, 2), 4) == "2/4^1"
    assert format_pow_k(Fraction(3), 3) == "3/3^0"
    assert pow_k_parts(Fraction(5, 36), 6) == (5, 2)
    with pytest.raises(ValueError):
        pow_k_parts(Fraction(1, 3), 2)
