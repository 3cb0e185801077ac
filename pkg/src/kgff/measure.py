"""Exact Haar measures of B_q and of pairwise intersections.

A condition ``|<qA>| < k**-s`` only reads the first ``deg q + s`` digits of
each entry of A, so its measure is a ratio of cylinder counts at that
depth. Column j of A only enters column j of qA, so the n column conditions
are independent and the single-column measure is raised to the n-th power
(``full=True`` enumerates all of I^{mn} instead).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .algebra import FieldSpec, Poly, format_poly
from .approx import Psi, count_solutions, psi_eval
from .counting import EXACT, all_nonzero_vectors, check_budget, format_pow_k, phi
from .errors import ZeroVector
from .laurent import FracMatrix

DEFAULT_BUDGET = 1 << 26


def _height(q: Sequence[Poly]) -> int:
    if all(qi.is_zero() for qi in q):
        raise ZeroVector("q must be nonzero")
    return max(qi.deg for qi in q)


def lin_indep(q: Sequence[Poly], q2: Sequence[Poly]) -> bool:
    """Rank-2 test: some minor q_i q2_j - q_j q2_i is nonzero."""
    _height(q)
    _height(q2)
    if len(q) != len(q2):
        raise ValueError("vectors of different lengths")
    for i, j in itertools.combinations(range(len(q)), 2):
        if not (q[i] * q2[j] - q[j] * q2[i]).is_zero():
            return True
    return False


def column_rows(q: Sequence[Poly], depth: int, s: int) -> np.ndarray:
    """Z/p matrix from the digits of one column of A (depth ``depth``) to the
    first ``s`` coefficients of <q . column>.

    Row ``(i*depth + u)*l + e`` is ``a_i[u] = Y^e``; column ``j*l + f`` is
    digit f of the X^-(j+1) coefficient.
    """
    F = q[0].field
    m, l = len(q), F.l
    rows = np.zeros((m * depth * l, s * l), dtype=np.int64)
    for i, qi in enumerate(q):
        for d, c in enumerate(qi.coeffs):
            if not c:
                continue
            for j in range(s):
                u = j + d
                if u >= depth:
                    break
                for e in range(l):
                    rows[(i * depth + u) * l + e, j * l:(j + 1) * l] = F.digits(F.mul(c, F.p ** e))
    return rows


def _block_diag(block: np.ndarray, n: int) -> np.ndarray:
    R, C = block.shape
    out = np.zeros((R * n, C * n), dtype=np.int64)
    for c in range(n):
        out[c * R:(c + 1) * R, c * C:(c + 1) * C] = block
    return out


def _cylinder_measure(rows: np.ndarray, F: FieldSpec, cells: int, budget, backend) -> Fraction:
    check_budget(cells, budget, "cylinder enumeration")
    L, C = rows.shape
    hits = _kernels.count_prefix_zero(rows, F.p, 0, F.p ** L, C, backend)
    return Fraction(hits, cells)


def measure_bq(q: Sequence[Poly], psi: Psi, n: int, *, full: bool = False,
               budget: int | None = DEFAULT_BUDGET, backend: str | None = None) -> Fraction:
    """mu(B_q), exactly, by enumerating depth-(deg q + s) cylinders."""
    r = _height(q)
    s = psi_eval(psi, r)
    F = q[0].field
    depth = r + s
    col = column_rows(q, depth, s)
    if full:
        return _cylinder_measure(_block_diag(col, n), F, F.k ** (len(q) * n * depth), budget, backend)
    return _cylinder_measure(col, F, F.k ** (len(q) * depth), budget, backend) ** n


def measure_pair(q: Sequence[Poly], q2: Sequence[Poly], psi: Psi, n: int, *,
                 full: bool = False, budget: int | None = DEFAULT_BUDGET,
                 backend: str | None = None) -> Fraction:
    """mu(B_q & B_q2) by joint cylinder enumeration."""
    r, r2 = _height(q), _height(q2)
    s, s2 = psi_eval(psi, r), psi_eval(psi, r2)
    F = q[0].field
    depth = max(r, r2) + max(s, s2)
    col = np.hstack([column_rows(q, depth, s), column_rows(q2, depth, s2)])
    if full:
        return _cylinder_measure(_block_diag(col, n), F, F.k ** (len(q) * n * depth), budget, backend)
    return _cylinder_measure(col, F, F.k ** (len(q) * depth), budget, backend) ** n


def iter_cylinders(m: int, n: int, depth: int, F: FieldSpec):
    """Every depth-``depth`` cylinder representative of I^{mn}, as FracMatrix."""
    k = F.k
    size = m * n * depth
    for idx in range(k ** size):
        digits = np.empty(size, dtype=np.int64)
        for g in range(size):
            idx, digits[g] = divmod(idx, k)
        yield FracMatrix(F, digits.reshape(m, n, depth))


def expected_N(Q: int, psi: Psi, m: int, n: int, F: FieldSpec, *,
               budget: int | None = DEFAULT_BUDGET, backend: str | None = None) -> Fraction:
    """Average of N(Q, A) over every depth-(Q + s(Q)) cylinder of I^{mn}."""
    depth = Q + psi_eval(psi, Q)
    cells = F.k ** (m * n * depth)
    check_budget(cells, budget, "expected_N cylinder enumeration")
    total = sum(count_solutions(Q, A, psi, backend=backend)
                for A in iter_cylinders(m, n, depth, F))
    return Fraction(total, cells)


def _vec_text(q) -> str:
    return "(" + "; ".join(format_poly(qi) for qi in q) + ")"


def _config(F: FieldSpec, m: int, n: int, Q: int, psi: Psi) -> dict:
    return {"p": F.p, "l": F.l, "modulus": list(F.modulus) if F.modulus else None,
            "k": F.k, "m": m, "n": n, "Q": Q, "psi": str(psi)}


def verify_prop1(F: FieldSpec, m: int, n: int, Q: int, psi: Psi, *,
                 full: bool = False, budget: int | None = DEFAULT_BUDGET,
                 backend: str | None = None) -> dict:
    """Check mu(B_q) == k**(-s n) for every nonzero q with |q| <= k**Q."""
    k = F.k
    cases = []
    for q in all_nonzero_vectors(Q, m, F):
        r = _height(q)
        s = psi_eval(psi, r)
        mu = measure_bq(q, psi, n, full=full, budget=budget, backend=backend)
        expected = Fraction(1, k ** (s * n))
        cases.append({"q": _vec_text(q), "r": r, "s": s,
                      "measure": format_pow_k(mu, k), "expected": format_pow_k(expected, k),
                      "pass": mu == expected})
    passed = sum(c["pass"] for c in cases)
    return {"check": "prop1", "config": _config(F, m, n, Q, psi), "cases": cases,
            "passed": passed, "failed": len(cases) - passed}


def verify_prop2(F: FieldSpec, m: int, n: int, Q: int, psi: Psi, *,
                 budget: int | None = DEFAULT_BUDGET, backend: str | None = None) -> dict:
    """Check the product rule on every unordered pair of distinct nonzero q, q'
    with heights <= k**Q. Dependent pairs are listed separately: the rule is
    not claimed for them, and whether it happens to hold is recorded."""
    k = F.k
    vecs = list(all_nonzero_vectors(Q, m, F))
    single = {v: measure_bq(v, psi, n, budget=budget, backend=backend) for v in vecs}
    cases, dependent = [], []
    for a, b in itertools.combinations(vecs, 2):
        joint = measure_pair(a, b, psi, n, budget=budget, backend=backend)
        product = single[a] * single[b]
        row = {"q": _vec_text(a), "q2": _vec_text(b),
               "joint": format_pow_k(joint, k), "product": format_pow_k(product, k),
               "product_rule_holds": joint == product}
        if lin_indep(a, b):
            row["pass"] = row["product_rule_holds"]
            cases.append(row)
        else:
            row["note"] = "dependent: product rule not claimed"
            dependent.append(row)
    passed = sum(c["pass"] for c in cases)
    return {"check": "prop2", "config": _config(F, m, n, Q, psi), "cases": cases,
            "dependent": dependent, "passed": passed, "failed": len(cases) - passed,
            "dependent_count": len(dependent),
            "dependent_violating": sum(not d["product_rule_holds"] for d in dependent)}


def expected_vs_phi(Q: int, psi: Psi, m: int, n: int, F: FieldSpec, **kw) -> dict:
    e = expected_N(Q, psi, m, n, F, **kw)
    ph = phi(Q, psi, m, n, F, EXACT)
    return {"expected_N": e, "phi_exact": ph, "equal": e == ph}
