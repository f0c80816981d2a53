"""Exact arithmetic in finite fields GF(p^k).

Elements are stored as integer codes in [0, p^k): the base-p digits of a code
are the coefficients of the residue polynomial modulo the field's defining
polynomial.  For small fields the full operation tables are precomputed, so
the randomized suites run at table-lookup speed; larger fields fall back to
polynomial arithmetic on the codes.
"""

from __future__ import annotations

import random
from typing import Iterator

from .common import FieldMismatchError

_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factor_prime_power(q: int) -> tuple[int, int]:
    """Write q as p^k with p prime, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1 or not is_prime(p):
                raise ValueError(f"{q} is not a prime power")
            return p, k
    raise ValueError(f"{q} is not a prime power")


def _digits(code: int, p: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        out.append(code % p)
        code //= p
    return tuple(out)


def _encode(digits: tuple[int, ...], p: int) -> int:
    code = 0
    for d in reversed(digits):
        code = code * p + d
    return code


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: list[int], mod: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        a = _poly_trim(a)
        if len(a) - 1 < dm:
            break
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(mod):
            a[shift + i] = (a[shift + i] - coef * mi) % p
        a = _poly_trim(a)
    return a


def _is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by all monic polynomials of degree <= deg/2."""
    deg = len(poly) - 1
    if deg <= 0:
        return False
    for d in range(1, deg // 2 + 1):
        for code in range(p**d):
            div = list(_digits(code, p, d)) + [1]
            if not _poly_divides(div, poly, p):
                continue
            return False
    return True


def _poly_divides(d: list[int], f: list[int], p: int) -> bool:
    return not _poly_mod(f, d, p)


def default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Least irreducible monic polynomial of degree k over F_p.

    Candidates x^k + c_{k-1}x^{k-1} + ... + c_0 are ordered by the integer
    sum(c_i p^i), which realizes a degree-then-lexicographic order.
    """
    for code in range(p**k):
        cand = list(_digits(code, p, k)) + [1]
        if _is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class GFElement:
    """Element of a finite field, canonically a residue-polynomial code."""

    __slots__ = ("field", "code")

    def __init__(self, field: "GaloisField", code: int):
        self.field = field
        self.code = code

    def _coerce(self, other) -> "GFElement":
        if isinstance(other, GFElement):
            if other.field is not self.field:
                raise FieldMismatchError(
                    f"mixed fields: {self.field} and {other.field}"
                )
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(self.field, self.field.add_code(self.code, o.code))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(
            self.field, self.field.add_code(self.code, self.field.neg_code(o.code))
        )

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(self.field, self.field.mul_code(self.code, o.code))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __neg__(self):
        return GFElement(self.field, self.field.neg_code(self.code))

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return GFElement(self.field, self.field.pow_code(self.code, n))

    def inverse(self) -> "GFElement":
        return GFElement(self.field, self.field.inv_code(self.code))

    def is_zero(self) -> bool:
        return self.code == 0

    def sort_key(self):
        return (0, self.code)

    def __eq__(self, other):
        return (
            isinstance(other, GFElement)
            and self.field is other.field
            and self.code == other.code
        )

    def __hash__(self):
        return hash((self.field.name, self.code))

    def __str__(self):
        f = self.field
        if f.k == 1:
            return str(self.code)
        digits = _digits(self.code, f.p, f.k)
        terms = []
        for i in range(f.k - 1, -1, -1):
            c = digits[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("x" if c == 1 else f"{c}*x")
            else:
                terms.append(f"x^{i}" if c == 1 else f"{c}*x^{i}")
        return "+".join(terms) if terms else "0"

    def __repr__(self):
        return f"<{self} in {self.field.name}>"


class GaloisField:
    """The field GF(p^k) with a fixed defining polynomial."""

    kind = "galois"
    is_finite = True

    def __init__(self, p: int, k: int = 1, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.k = k
        self.q = p**k
        if k == 1:
            self.modulus = (0, 1)  # x, unused for arithmetic
        elif modulus is None:
            self.modulus = default_modulus(p, k)
        else:
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree k")
            if not _is_irreducible(list(modulus), p):
                raise ValueError("modulus is reducible")
            self.modulus = modulus
        self.name = f"GF({self.q})"
        self.variables: tuple[str, ...] = ()
        self.zero = GFElement(self, 0)
        self.one = GFElement(self, 1)
        self._mul_table: list[list[int]] | None = None
        self._inv_table: list[int] | None = None
        self._add_table: list[list[int]] | None = None
        if self.q <= _TABLE_LIMIT:
            self._build_tables()

    # -- code-level arithmetic ------------------------------------------------

    def _build_tables(self):
        q = self.q
        add = [[self._add_slow(a, b) for b in range(q)] for a in range(q)]
        mul = [[self._mul_slow(a, b) for b in range(q)] for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    inv[a] = b
                    break
        self._add_table = add
        self._mul_table = mul
        self._inv_table = inv

    def _add_slow(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        da = _digits(a, self.p, self.k)
        db = _digits(b, self.p, self.k)
        return _encode(tuple((x + y) % self.p for x, y in zip(da, db)), self.p)

    def _mul_slow(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        pa = _poly_trim(list(_digits(a, self.p, self.k)))
        pb = _poly_trim(list(_digits(b, self.p, self.k)))
        prod = _poly_mod(_poly_mul(pa, pb, self.p), list(self.modulus), self.p)
        prod += [0] * (self.k - len(prod))
        return _encode(tuple(prod), self.p)

    def add_code(self, a: int, b: int) -> int:
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_slow(a, b)

    def neg_code(self, a: int) -> int:
        if self.p == 2:
            return a
        da = _digits(a, self.p, self.k)
        return _encode(tuple((-x) % self.p for x in da), self.p)

    def mul_code(self, a: int, b: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_slow(a, b)

    def pow_code(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow_code(self.inv_code(a), -n)
        out = 1
        base = a
        while n:
            if n & 1:
                out = self.mul_code(out, base)
            base = self.mul_code(base, base)
            n >>= 1
        return out

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"division by zero in {self.name}")
        if self._inv_table is not None:
            return self._inv_table[a]
        return self.pow_code(a, self.q - 2)

    def is_square_code(self, a: int) -> bool:
        if a == 0:
            return True
        if self.p == 2:
            return True  # Frobenius is bijective on a finite field
        return self.pow_code(a, (self.q - 1) // 2) == 1

    def sqrt_code(self, a: int) -> int:
        if a == 0:
            return 0
        if self.p == 2:
            # inverse of Frobenius: x -> x^(q/2), since (x^(q/2))^2 = x^q = x
            return self.pow_code(a, self.q // 2)
        if not self.is_square_code(a):
            raise ValueError(f"{GFElement(self, a)} is not a square in {self.name}")
        q = self.q
        if q % 4 == 3:
            return self.pow_code(a, (q + 1) // 4)
        # Tonelli-Shanks in the cyclic group of order q - 1
        s, m = 0, q - 1
        while m % 2 == 0:
            m //= 2
            s += 1
        z = next(c for c in range(2, q) if not self.is_square_code(c))
        c = self.pow_code(z, m)
        t = self.pow_code(a, m)
        r = self.pow_code(a, (m + 1) // 2)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = self.mul_code(t2, t2)
                i += 1
            b = self.pow_code(c, 1 << (s - i - 1))
            r = self.mul_code(r, b)
            c = self.mul_code(b, b)
            t = self.mul_code(t, c)
            s = i
        return r

    # -- element-level API ----------------------------------------------------

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def order(self) -> int:
        return self.q

    def element(self, code: int) -> GFElement:
        return GFElement(self, code % self.q)

    def from_int(self, n: int) -> GFElement:
        return GFElement(self, n % self.p)

    def generator(self) -> GFElement:
        """The residue class of x when k > 1, else 1."""
        return GFElement(self, self.p if self.k > 1 else 1)

    def elements(self) -> Iterator[GFElement]:
        for code in range(self.q):
            yield GFElement(self, code)

    def units(self) -> Iterator[GFElement]:
        for code in range(1, self.q):
            yield GFElement(self, code)

    def is_square(self, a: GFElement) -> bool:
        return self.is_square_code(a.code)

    def sqrt(self, a: GFElement) -> GFElement:
        return GFElement(self, self.sqrt_code(a.code))

    def random_unit(self, seed, degree_bound: int | None = None) -> GFElement:
        rng = seed if isinstance(seed, random.Random) else random.Random(seed)
        return GFElement(self, rng.randrange(1, self.q))

    def parse_element(self, text: str) -> GFElement:
        from .fields import parse_element

        return parse_element(self, text)

    def spec_key(self):
        return ("galois", self.p, self.k, self.modulus)

    def __eq__(self, other):
        return isinstance(other, GaloisField) and self.spec_key() == other.spec_key()

    def __hash__(self):
        return hash(self.spec_key())

    def __repr__(self):
        return self.name
