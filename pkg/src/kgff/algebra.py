"""Finite fields of k = p^l elements and polynomials over them.

Field elements are handled internally as integer *codes* in ``range(k)``:
the code of ``c_0 + c_1 Y + ... + c_{l-1} Y^{l-1}`` is ``sum(c_e * p**e)``.
:class:`FieldElem` is the structural (residue-vector) view of a code and is
what the textual formats read and write.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import BothZero, ZeroInverse, ZeroPolynomial


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# --- dense polynomials over Z/p as coefficient lists, low to high ---------

def _zp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _zp_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _zp_trim([x % p for x in a])
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        c = (a[-1] * inv_lead) % p
        for i, bc in enumerate(b):
            a[i + shift] = (a[i + shift] - c * bc) % p
        _zp_trim(a)
    return a


def _zp_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def is_irreducible_zp(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2 over Z/p."""
    deg = len(modulus) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _zp_mod(modulus, list(low) + [1], p):
                return False
    return True


@functools.lru_cache(maxsize=None)
def default_modulus(p: int, l: int) -> tuple[int, ...]:
    """First monic irreducible of degree l over Z/p, scanning low coefficients
    in lexicographic order of the reversed tuple (so Y^2+Y+1 for p=2, l=2)."""
    for low in itertools.product(range(p), repeat=l):
        cand = tuple(reversed(low)) + (1,)
        if cand[0] != 0 and is_irreducible_zp(cand, p):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {l} over Z/{p}")


@dataclass(frozen=True)
class FieldElem:
    """An element of F as its l residues in the polynomial basis 1, Y, ..."""

    coeffs: tuple[int, ...]

    def __str__(self) -> str:
        return "_".join(str(c) for c in self.coeffs)


@dataclass(frozen=True)
class FieldSpec:
    """The finite field F of ``k = p**l`` elements.

    ``modulus`` lists the coefficients (low to high) of the monic irreducible
    polynomial defining F over Z/p. It is ``None`` for prime fields and is
    filled in from :func:`default_modulus` when ``l > 1`` and none is given.
    """

    p: int
    l: int = 1
    modulus: tuple[int, ...] | None = None
    _add: tuple[tuple[int, ...], ...] | None = field(default=None, init=False, compare=False, repr=False)
    _mul: tuple[tuple[int, ...], ...] | None = field(default=None, init=False, compare=False, repr=False)
    _inv: tuple[int, ...] | None = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.l < 1:
            raise ValueError("extension degree l must be >= 1")
        if self.l == 1:
            if self.modulus is not None:
                raise ValueError("a modulus is only meaningful when l > 1")
            return
        mod = self.modulus
        if mod is None:
            mod = default_modulus(self.p, self.l)
        mod = tuple(int(c) % self.p for c in mod)
        if len(mod) != self.l + 1 or mod[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {self.l}")
        if not is_irreducible_zp(mod, self.p):
            raise ValueError(f"modulus {mod} is reducible over Z/{self.p}")
        object.__setattr__(self, "modulus", mod)
        self._build_tables()

    def _build_tables(self) -> None:
        k, p = self.k, self.p
        digits = [self.digits(c) for c in range(k)]
        mul = []
        for a in range(k):
            row = []
            for b in range(k):
                prod = _zp_mod(_zp_mul(digits[a], digits[b], p), self.modulus, p)
                row.append(self.from_digits(prod))
            mul.append(tuple(row))
        add = tuple(tuple(self.from_digits([x + y for x, y in zip(digits[a], digits[b])])
                          for b in range(k)) for a in range(k))
        inv = [0] * k
        for a in range(1, k):
            inv[a] = mul[a].index(1)
        object.__setattr__(self, "_add", add)
        object.__setattr__(self, "_mul", tuple(mul))
        object.__setattr__(self, "_inv", tuple(inv))

    @property
    def k(self) -> int:
        return self.p ** self.l

    def __str__(self) -> str:
        return f"F{self.k}" if self.l == 1 else f"F{self.k}[mod {self.modulus}]"

    # codes <-> residue vectors
    def digits(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.l):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def from_digits(self, ds: Sequence[int]) -> int:
        code = 0
        for d in reversed(list(ds)[: self.l]):
            code = code * self.p + (d % self.p)
        return code

    def elem(self, code: int) -> FieldElem:
        return FieldElem(self.digits(code))

    def code(self, x: FieldElem | int) -> int:
        if isinstance(x, FieldElem):
            if len(x.coeffs) != self.l or any(not 0 <= c < self.p for c in x.coeffs):
                raise ValueError(f"{x} is not an element of {self}")
            return self.from_digits(x.coeffs)
        if not 0 <= x < self.k:
            raise ValueError(f"code {x} out of range for {self}")
        return x

    # arithmetic on codes
    def add(self, a: int, b: int) -> int:
        if self.l == 1:
            return (a + b) % self.p
        return self._add[a][b]

    def neg(self, a: int) -> int:
        if self.l == 1:
            return (-a) % self.p
        return self._add[a].index(0)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.l == 1:
            return (a * b) % self.p
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        if self.l == 1:
            return pow(a, self.p - 2, self.p)
        return self._inv[a]

    def mul_matrix(self, c: int) -> list[list[int]]:
        """Matrix over Z/p of x -> c*x; entry [e][f] is digit f of c*Y^e."""
        return [list(self.digits(self.mul(c, self.p ** e))) for e in range(self.l)]


def field_add(x: FieldElem, y: FieldElem, F: FieldSpec) -> FieldElem:
    return F.elem(F.add(F.code(x), F.code(y)))


def field_mul(x: FieldElem, y: FieldElem, F: FieldSpec) -> FieldElem:
    return F.elem(F.mul(F.code(x), F.code(y)))


def field_inv(x: FieldElem, F: FieldSpec) -> FieldElem:
    return F.elem(F.inv(F.code(x)))


@dataclass(frozen=True)
class Poly:
    """Polynomial over ``field`` with coefficient codes, index i = X^i.

    Trailing zeros are stripped on construction, so the zero polynomial has
    ``coeffs == ()`` and equality is structural.
    """

    field: FieldSpec
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        cs = list(self.coeffs)
        for c in cs:
            if not 0 <= c < self.field.k:
                raise ValueError(f"coefficient code {c} out of range for {self.field}")
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def zero(cls, F: FieldSpec) -> Poly:
        return cls(F, ())

    @classmethod
    def const(cls, F: FieldSpec, c: int) -> Poly:
        return cls(F, (c,))

    @classmethod
    def monomial(cls, F: FieldSpec, d: int, c: int = 1) -> Poly:
        return cls(F, (0,) * d + (c,))

    @property
    def deg(self) -> int:
        """Degree, with -1 standing in for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _same_field(self, other: Poly) -> None:
        if other.field != self.field:
            raise ValueError("polynomials over different fields")

    def __add__(self, other: Poly) -> Poly:
        self._same_field(other)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(F, tuple(F.add(self.coeff(i), other.coeff(i)) for i in range(n)))

    def __neg__(self) -> Poly:
        F = self.field
        return Poly(F, tuple(F.neg(c) for c in self.coeffs))

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        self._same_field(other)
        F = self.field
        if not self.coeffs or not other.coeffs:
            return Poly(F)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly(F, tuple(out))

    def scale(self, c: int) -> Poly:
        F = self.field
        return Poly(F, tuple(F.mul(c, a) for a in self.coeffs))

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        self._same_field(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        quot = [0] * max(len(rem) - db, 0)
        inv_lead = F.inv(other.lead)
        while len(rem) - 1 >= db:
            shift = len(rem) - 1 - db
            c = F.mul(rem[-1], inv_lead)
            quot[shift] = c
            for i, b in enumerate(other.coeffs):
                rem[i + shift] = F.sub(rem[i + shift], F.mul(c, b))
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(F, tuple(quot)), Poly(F, tuple(rem))

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def monic(self) -> Poly:
        if not self.coeffs:
            raise ZeroPolynomial("the zero polynomial has no monic normalization")
        return self.scale(self.field.inv(self.lead))

    def __str__(self) -> str:
        return format_poly(self)


PolyVec = tuple  # tuple[Poly, ...]


def poly_abs(q: Poly) -> int:
    """k**deg(q), or 0 for the zero polynomial."""
    if q.is_zero():
        return 0
    return q.field.k ** q.deg


def poly_gcd(a: Poly, b: Poly) -> Poly:
    if a.is_zero() and b.is_zero():
        raise BothZero("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return a.monic()


def gcd_coeffs(a: Sequence[int], b: Sequence[int], F: FieldSpec) -> tuple[int, ...]:
    """Monic gcd of two code sequences (low to high), without building Poly
    objects. Used by the T(Q) enumeration; equals ``poly_gcd(...).coeffs``."""
    add, mul, inv, neg = F.add, F.mul, F.inv, F.neg
    a = list(a)
    b = list(b)
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    if not a and not b:
        raise BothZero("gcd(0, 0) is undefined")
    while b:
        db = len(b) - 1
        il = inv(b[-1])
        while len(a) - 1 >= db:
            shift = len(a) - 1 - db
            c = neg(mul(a[-1], il))
            for i in range(db + 1):
                a[i + shift] = add(a[i + shift], mul(c, b[i]))
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    il = inv(a[-1])
    return tuple(mul(il, x) for x in a)


def iter_monic(F: FieldSpec, deg: int) -> Iterator[Poly]:
    """All monic polynomials of exact degree ``deg``."""
    for low in itertools.product(range(F.k), repeat=deg):
        yield Poly(F, tuple(reversed(low)) + (1,))


@functools.lru_cache(maxsize=65536)
def _divisor_count(F: FieldSpec, coeffs: tuple[int, ...]) -> int:
    g = Poly(F, coeffs)
    count = 0
    for d in range(g.deg + 1):
        for f in iter_monic(F, d):
            if (g % f).is_zero():
                count += 1
    return count


def monic_divisor_count(g: Poly) -> int:
    """Number of monic f with f | g, found by trial division."""
    if g.is_zero():
        raise ZeroPolynomial("every polynomial divides 0")
    return _divisor_count(g.field, g.monic().coeffs)


# --- textual format: "1,0,1" = 1 + X^2; extension elements as "1_0" -------

def format_elem(F: FieldSpec, code: int) -> str:
    if F.l == 1:
        return str(code)
    return str(F.elem(code))


def parse_elem(F: FieldSpec, text: str) -> int:
    parts = text.strip().split("_")
    if len(parts) != F.l:
        raise ValueError(f"field element {text!r} needs {F.l} residues joined by '_'")
    return F.code(FieldElem(tuple(int(x) for x in parts)))


def format_poly(q: Poly) -> str:
    if q.is_zero():
        return "0"
    return ",".join(format_elem(q.field, c) for c in q.coeffs)


def parse_poly(text: str, F: FieldSpec) -> Poly:
    text = text.strip()
    if text in ("", "0") and F.l == 1:
        return Poly(F)
    return Poly(F, tuple(parse_elem(F, part) for part in text.split(",")))
