from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kgff.algebra import FieldSpec, Poly
from kgff.approx import (Psi, bq_member, count_solutions, count_solutions_slow, floor_to_V,
                         parse_psi, psi_eval, shell_counts)
from kgff.counting import iter_vectors
from kgff.errors import InsufficientPrecision, NonPositiveInput, OutOfRange, ZeroVector
from kgff.laurent import FracMatrix
from kgff.measure import iter_cylinders

from conftest import P, random_matrix

S1 = Psi.linear(1, 1)


# --- psi ---------------------------------------------------------------------

def test_psi_linear_and_table():
    assert [psi_eval(S1, r) for r in range(4)] == [1, 2, 3, 4]
    t = Psi.from_table([1, 2, 2])
    assert [t.s(r) for r in range(3)] == [1, 2, 2]
    assert t.max_r == 2 and S1.max_r is None
    assert t.value(1, 3) == Fraction(1, 9)
    with pytest.raises(OutOfRange):
        psi_eval(t, 3)
    with pytest.raises(OutOfRange):
        psi_eval(S1, -1)


def test_psi_validation():
    with pytest.raises(ValueError):
        Psi.linear(0, 0)
    assert Psi.linear(0, 0, allow_zero=True).s(5) == 0
    with pytest.raises(ValueError):
        Psi.from_table([2, 1])
    with pytest.raises(ValueError):
        Psi.linear(Fraction(1, 2), 1)
    with pytest.raises(ValueError):
        Psi.linear(-1, 3)


def test_parse_psi_round_trip():
    for text in ("linear:1,1", "linear:0,2", "table:1,2,2"):
        assert str(parse_psi(text)) == text
    for bad in ("linear:1", "cubic:1,2", "table:x"):
        with pytest.raises(ValueError):
            parse_psi(bad)


# --- floor_to_V --------------------------------------------------------------

def test_floor_to_V_examples():
    assert floor_to_V(1, 2) == 0
    assert floor_to_V(Fraction(1, 2), 2) == 1
    assert floor_to_V(Fraction(3, 4), 2) == 1
    assert floor_to_V(Fraction(1, 9), 3) == 2
    assert floor_to_V(Fraction(1, 10), 3) == 3
    assert floor_to_V(7, 2) == -2
    assert floor_to_V(0.25, 2) == 2
    for bad in (0, -1, Fraction(-1, 3)):
        with pytest.raises(NonPositiveInput):
            floor_to_V(bad, 2)


@given(st.integers(1, 10 ** 12), st.integers(1, 10 ** 12), st.sampled_from([2, 3, 4, 5]))
def test_floor_to_V_bracket(a, b, k):
    x = Fraction(a, b)
    n = floor_to_V(x, k)
    assert Fraction(k) ** (-n) <= x < Fraction(k) ** (1 - n)


@pytest.mark.parametrize("k", [2, 3])
def test_floor_to_V_exact_powers(k):
    for e in range(-30, 31):
        assert floor_to_V(Fraction(k) ** e, k) == -e
        assert floor_to_V(Fraction(k) ** e * Fraction(k * 1000 - 1, k * 1000), k) == 1 - e


# --- B_q membership ------------------------------------------------------------

A_COL = ((1, 1, 0), (1, 0, 1))


def col_matrix(F, rows):
    return FracMatrix(F, [[list(r)] for r in rows])


def test_bq_member_examples(F2):
    A = col_matrix(F2, A_COL)
    assert bq_member((P(F2, 0, 1), P(F2, 1)), A, S1) is True
    assert bq_member((P(F2, 1), P(F2, 1)), A, S1) is True
    assert bq_member((P(F2, 1), Poly(F2)), A, S1) is False
    with pytest.raises(ZeroVector):
        bq_member((Poly(F2), Poly(F2)), A, S1)
    short = col_matrix(F2, ((1, 1), (1, 0)))
    with pytest.raises(InsufficientPrecision):
        bq_member((P(F2, 0, 1), Poly(F2)), short, S1)


def naive_member(q, A, psi):
    """Brute force: is there p in F[X]^n with every |q A_c - p_c| < psi(|q|)?

    Works over prime fields with plain integer arithmetic; the integer part
    of q A is matched by trying every p of degree <= deg q.
    """
    F = A.field
    k, m, n, t = F.k, A.m, A.n, A.t
    r = max(qi.deg for qi in q)
    s = psi_eval(psi, r)
    for c in range(n):
        # Laurent coefficients of sum_i q_i A_ic for exponents r .. -t
        coef = {}
        for i in range(m):
            for d, qd in enumerate(q[i].coeffs):
                for j in range(t):
                    e = d - j - 1
                    coef[e] = (coef.get(e, 0) + qd * int(A.coeffs[i, c, j])) % k
        ok = False
        for pc in range(k ** (r + 1)):
            pd = [(pc // k ** d) % k for d in range(r + 1)]
            diff = {e: (v - (pd[e] if 0 <= e <= r else 0)) % k for e, v in coef.items()}
            top = max([e for e, v in diff.items() if v] + [-(t + 1)])
            if top < -s:
                ok = True
                break
        if not ok:
            return False
    return True


@pytest.mark.parametrize("F", [FieldSpec(2), FieldSpec(3)], ids=str)
@pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (1, 2)])
def test_bq_member_matches_naive(F, m, n):
    rng = np.random.default_rng(11)
    Q = 2 if F.k == 2 else 1
    for _ in range(4):
        A = random_matrix(F, m, n, Q + S1.s(Q), rng)
        for r in range(Q + 1):
            for q in iter_vectors(r, m, F):
                assert bq_member(q, A, S1) == naive_member(q, A, S1)


# --- N(Q, A) -------------------------------------------------------------------

def test_count_solutions_examples(F2):
    A = col_matrix(F2, A_COL)
    assert count_solutions(0, A, S1) == 1
    assert count_solutions_slow(0, A, S1) == 1
    total = sum(count_solutions(1, A, S1) for A in iter_cylinders(2, 1, 3, F2))
    assert total == 288
    with pytest.raises(InsufficientPrecision):
        count_solutions(2, A, S1)


FIELDS = [FieldSpec(2), FieldSpec(3), FieldSpec(2, 2), FieldSpec(5)]


@pytest.mark.parametrize("F", FIELDS, ids=str)
@pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_kernel_matches_slow_path(F, m, n, backend):
    rng = np.random.default_rng(7)
    Q = 2 if F.k ** (m * 3) <= 4096 else 1
    psi = Psi.linear(1, 1)
    for _ in range(3):
        A = random_matrix(F, m, n, Q + psi.s(Q) + 1, rng)
        slow = count_solutions_slow(Q, A, psi)
        assert count_solutions(Q, A, psi, backend=backend) == slow
        assert count_solutions(Q, A, psi, orbits=True, backend=backend) == slow


@pytest.mark.parametrize("F", FIELDS, ids=str)
def test_count_divisible_by_scalars(F):
    """B_q is invariant under nonzero scalars, so every shell count is a
    multiple of k - 1."""
    rng = np.random.default_rng(5)
    for _ in range(5):
        A = random_matrix(F, 2, 1, 4, rng)
        for c in shell_counts(2, A, Psi.linear(0, 2)):
            assert c % (F.k - 1) == 0


def test_scalar_invariance_of_membership(F3):
    rng = np.random.default_rng(9)
    A = random_matrix(F3, 2, 1, 4, rng)
    for q in iter_vectors(1, 2, F3):
        assert bq_member(q, A, S1) == bq_member(tuple(qi.scale(2) for qi in q), A, S1)


def test_monotone_in_Q_and_psi(F2):
    rng = np.random.default_rng(13)
    for _ in range(10):
        A = random_matrix(F2, 2, 1, 9, rng)
        Ns = [count_solutions(Q, A, S1) for Q in range(5)]
        assert Ns == sorted(Ns)
        tight = count_solutions(3, A, Psi.linear(1, 2))
        assert tight <= Ns[3]


def test_threads_do_not_change_counts(F2):
    rng = np.random.default_rng(17)
    A = random_matrix(F2, 3, 1, 12, rng)
    psi = Psi.linear(0, 3)
    one = shell_counts(5, A, psi, threads=1)
    assert shell_counts(5, A, psi, threads=4) == one
    assert shell_counts(5, A, psi, threads=4, backend="numpy") == one


def test_psi_one_counts_everything(F3):
    """With psi = 1 every q qualifies."""
    rng = np.random.default_rng(1)
    A = random_matrix(F3, 2, 1, 3, rng)
    psi = Psi.linear(0, 0, allow_zero=True)
    assert count_solutions(2, A, psi) == 3 ** 6 - 1
