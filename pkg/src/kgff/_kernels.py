"""Enumeration kernels.

Solution counts and cylinder measures all reduce to one primitive: given an
integer matrix ``rows`` of shape (L, C) over Z/p, count the integers ``x``
in ``[start, stop)`` whose base-p digits ``x_0 .. x_{L-1}`` (little endian)
satisfy ``sum_g x_g * rows[g, c] == 0 (mod p)`` for every column
``c < width``. The T(Q) sums use a second kernel, a histogram of monic gcds
over a height shell.

Two implementations are provided: numba-compiled loops that walk the range
with an incremental digit counter (a GF(2) variant packs columns into one
machine word), and a chunked pure-numpy path. ``KGFF_BACKEND=numpy`` forces
the latter; it is also used when numba is not importable.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

_CHUNK = 1 << 15


def _resolve_backend(name: str | None) -> str:
    name = (name or "numba").strip().lower()
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}; expected 'numba' or 'numpy'")
    if name == "numba" and not HAVE_NUMBA:
        return "numpy"
    return name


_backend = _resolve_backend(os.environ.get("KGFF_BACKEND"))


def get_backend() -> str:
    return _backend


def set_backend(name: str | None) -> str:
    """Switch backend at runtime; returns the previous one."""
    global _backend
    prev = _backend
    _backend = _resolve_backend(name)
    return prev


# --- numpy path -------------------------------------------------------------

def _count_numpy(rows, p, start, stop, width):
    L = rows.shape[0]
    if width == 0:
        return stop - start
    sub = rows[:, :width] % p
    powers = p ** np.arange(L, dtype=np.int64)
    total = 0
    for lo in range(start, stop, _CHUNK):
        xs = np.arange(lo, min(lo + _CHUNK, stop), dtype=np.int64)
        digits = (xs[:, None] // powers[None, :]) % p
        img = (digits @ sub) % p
        total += int(np.count_nonzero(~img.any(axis=1)))
    return total


# --- numba path -------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _count_general_nb(rows, p, start, stop, width):
        L, C = rows.shape
        digits = np.zeros(L + 1, dtype=np.int64)
        cur = np.zeros(C, dtype=np.int64)
        x = start
        for g in range(L):
            d = x % p
            x //= p
            digits[g] = d
            if d:
                for c in range(C):
                    cur[c] = (cur[c] + d * rows[g, c]) % p
        count = 0
        for _ in range(stop - start):
            ok = True
            for c in range(width):
                if cur[c] != 0:
                    ok = False
                    break
            if ok:
                count += 1
            # increment: carries add one more copy of the row (-(p-1) == 1)
            g = 0
            while g < L and digits[g] == p - 1:
                digits[g] = 0
                for c in range(C):
                    cur[c] = (cur[c] + rows[g, c]) % p
                g += 1
            if g < L:
                digits[g] += 1
                for c in range(C):
                    cur[c] = (cur[c] + rows[g, c]) % p
        return count

    @njit(cache=True, nogil=True)
    def _count_gf2_nb(bits, start, stop, mask):
        L = bits.shape[0]
        cur = np.uint64(0)
        for g in range(L):
            if (start >> g) & 1:
                cur ^= bits[g]
        count = 0
        x = start
        while x < stop:
            if (cur & mask) == 0:
                count += 1
            y = x + 1
            flipped = x ^ y
            g = 0
            while flipped and g < L:
                if flipped & 1:
                    cur ^= bits[g]
                flipped >>= 1
                g += 1
            x = y
        return count


    @njit(cache=True, nogil=True)
    def _gcd_hist_nb(add, mul, inv, neg, k, m, r, start, stop, hist):
        D = r + 1
        coords = np.zeros((m, D), dtype=np.int64)
        a = np.zeros(D, dtype=np.int64)
        b = np.zeros(D, dtype=np.int64)
        for x0 in range(start, stop):
            x = x0
            for d in range(D):
                for i in range(m):
                    coords[i, d] = x % k
                    x //= k
            la = 0
            for i in range(m):
                lb = D
                while lb > 0 and coords[i, lb - 1] == 0:
                    lb -= 1
                if lb == 0:
                    continue
                if la == 0:
                    for u in range(lb):
                        a[u] = coords[i, u]
                    la = lb
                    continue
                if la == 1:
                    break
                for u in range(lb):
                    b[u] = coords[i, u]
                # Euclid on (a, la), (b, lb)
                while lb > 0:
                    il = inv[b[lb - 1]]
                    while la >= lb:
                        c = neg[mul[a[la - 1], il]]
                        shift = la - lb
                        for u in range(lb):
                            a[u + shift] = add[a[u + shift], mul[c, b[u]]]
                        while la > 0 and a[la - 1] == 0:
                            la -= 1
                    a, b = b, a
                    la, lb = lb, la
            il = inv[a[la - 1]]
            code = 0
            for u in range(la - 1, -1, -1):
                code = code * k + mul[il, a[u]]
            hist[code] += 1


def gcd_histogram(F, m: int, r: int, backend: str | None = None) -> dict[tuple[int, ...], int]:
    """Histogram of monic gcd(q_1, ..., q_m) over the height-r shell.

    Keys are monic gcd coefficient-code tuples (low to high).
    """
    from .algebra import gcd_coeffs

    k = F.k
    start, stop = k ** (m * r), k ** (m * (r + 1))
    be = _resolve_backend(backend) if backend else _backend
    if be == "numba":
        add = np.array([[F.add(a, b) for b in range(k)] for a in range(k)], dtype=np.int64)
        mul = np.array([[F.mul(a, b) for b in range(k)] for a in range(k)], dtype=np.int64)
        inv = np.array([F.inv(a) if a else 0 for a in range(k)], dtype=np.int64)
        neg = np.array([F.neg(a) for a in range(k)], dtype=np.int64)
        hist = np.zeros(k ** (r + 1), dtype=np.int64)
        _gcd_hist_nb(add, mul, inv, neg, np.int64(k), np.int64(m), np.int64(r),
                     np.int64(start), np.int64(stop), hist)
        out = {}
        for code in np.nonzero(hist)[0].tolist():
            key = []
            c = code
            while c:
                c, d = divmod(c, k)
                key.append(d)
            out[tuple(key)] = int(hist[code])
        return out
    out: dict[tuple[int, ...], int] = {}
    for x in range(start, stop):
        coords = [[] for _ in range(m)]
        for d in range(r + 1):
            for i in range(m):
                x, c = divmod(x, k)
                coords[i].append(c)
        g = None
        for ci in coords:
            if any(ci):
                g = ci if g is None else list(gcd_coeffs(g, ci, F))
                if len(g) == 1:
                    break
        key = gcd_coeffs(g, (), F)
        out[key] = out.get(key, 0) + 1
    return out


def _pack_gf2(rows):
    bits = np.zeros(rows.shape[0], dtype=np.uint64)
    for c in range(rows.shape[1]):
        bits |= (rows[:, c].astype(np.uint64) & np.uint64(1)) << np.uint64(c)
    return bits


def count_prefix_zero(rows: np.ndarray, p: int, start: int, stop: int, width: int,
                      backend: str | None = None) -> int:
    """Count x in [start, stop) whose image ``digits(x) @ rows`` vanishes on
    the first ``width`` columns (mod p)."""
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    L, C = rows.shape
    if not 0 <= width <= C:
        raise ValueError(f"width {width} outside 0..{C}")
    if not 0 <= start <= stop <= p ** L:
        raise ValueError("range outside the digit space")
    if stop == start:
        return 0
    be = _resolve_backend(backend) if backend else _backend
    if be == "numpy":
        return _count_numpy(rows, p, start, stop, width)
    if p == 2 and width <= 64:
        sub = rows[:, :width]
        mask = np.uint64((1 << width) - 1) if width < 64 else np.uint64(0xFFFFFFFFFFFFFFFF)
        return int(_count_gf2_nb(_pack_gf2(sub), np.int64(start), np.int64(stop), mask))
    return int(_count_general_nb(rows[:, :width].copy(), np.int64(p),
                                 np.int64(start), np.int64(stop), np.int64(width)))


def count_prefix_zero_parallel(rows, p, start, stop, width, threads=1, backend=None) -> int:
    """Same as :func:`count_prefix_zero`, splitting the range over threads.

    The result is an integer sum, so it does not depend on ``threads``.
    """
    threads = max(1, int(threads or 1))
    total = stop - start
    if threads == 1 or total < 4 * _CHUNK:
        return count_prefix_zero(rows, p, start, stop, width, backend)
    bounds = np.linspace(start, stop, threads + 1).astype(np.int64).tolist()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(lambda ab: count_prefix_zero(rows, p, ab[0], ab[1], width, backend),
                         zip(bounds[:-1], bounds[1:]))
        return sum(parts)


def default_threads() -> int:
    return os.cpu_count() or 1
