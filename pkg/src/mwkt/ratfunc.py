"""Rational function fields F(t) and F(t,u) over finite fields of characteristic 2.

Elements are reduced fractions of sparse polynomials with a monic denominator
under graded-lexicographic order, so structural equality coincides with field
equality.  The characteristic-2 restriction buys the central decision
procedure: squares are detected monomial-by-monomial, and square-dependence
questions reduce to exact linear algebra over the field via Frobenius
coordinates (the expansion over the subfield of squares).
"""

from __future__ import annotations

import itertools
import random

from .common import FieldMismatchError
from .galois import GaloisField
from . import polynomials as P
from .polynomials import Poly


class RFElement:
    """Reduced fraction num/den of polynomials; canonical representation."""

    __slots__ = ("field", "num", "den", "_key")

    def __init__(self, field: "RationalFunctionField", num: Poly, den: Poly):
        self.field = field
        self.num = num
        self.den = den
        self._key = None

    def key(self):
        if self._key is None:
            self._key = (P.p_key(self.num), P.p_key(self.den))
        return self._key

    def _coerce(self, other) -> "RFElement":
        if isinstance(other, RFElement):
            if other.field is not self.field:
                raise FieldMismatchError(
                    f"mixed fields: {self.field} and {other.field}"
                )
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        # cross-reduction in the style of stdlib fractions keeps gcds small
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        field = self.field
        K = field.base
        g = P.p_gcd(K, self.den, o.den, field.m)
        if P.p_total_degree(g) <= 0:
            num = P.p_add(
                K, P.p_mul(K, self.num, o.den), P.p_mul(K, o.num, self.den)
            )
            return field._monic(num, P.p_mul(K, self.den, o.den))
        d1g = P.p_exact_div(K, self.den, g)
        d2g = P.p_exact_div(K, o.den, g)
        num = P.p_add(K, P.p_mul(K, self.num, d2g), P.p_mul(K, o.num, d1g))
        g2 = P.p_gcd(K, num, g, field.m)
        if P.p_total_degree(g2) > 0:
            num = P.p_exact_div(K, num, g2)
            g = P.p_exact_div(K, g, g2)
        return field._monic(num, P.p_mul(K, P.p_mul(K, d1g, g), d2g))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        field = self.field
        K = field.base
        n1, d1 = self.num, self.den
        n2, d2 = o.num, o.den
        g1 = P.p_gcd(K, n1, d2, field.m) if n1 and P.p_total_degree(d2) > 0 else {}
        if P.p_total_degree(g1) > 0:
            n1 = P.p_exact_div(K, n1, g1)
            d2 = P.p_exact_div(K, d2, g1)
        g2 = P.p_gcd(K, n2, d1, field.m) if n2 and P.p_total_degree(d1) > 0 else {}
        if P.p_total_degree(g2) > 0:
            n2 = P.p_exact_div(K, n2, g2)
            d1 = P.p_exact_div(K, d1, g2)
        return field._monic(P.p_mul(K, n1, n2), P.p_mul(K, d1, d2))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __neg__(self):
        K = self.field.base
        return RFElement(self.field, P.p_neg(K, self.num), self.den)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        K = self.field.base
        # powers of a reduced fraction stay reduced, and den^n stays monic
        return RFElement(
            self.field, P.p_pow(K, self.num, n), P.p_pow(K, self.den, n)
        )

    def inverse(self) -> "RFElement":
        if not self.num:
            raise ZeroDivisionError(f"division by zero in {self.field.name}")
        return self.field._monic(self.den, self.num)

    def is_zero(self) -> bool:
        return not self.num

    def sort_key(self):
        return (1, self.key())

    def __eq__(self, other):
        return (
            isinstance(other, RFElement)
            and self.field is other.field
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.field.name, self.key()))

    def __str__(self):
        K = self.field.base
        names = self.field.variables
        num = P.p_str(K, self.num, names)
        if self.den == P.p_const(self.field.m, 1):
            return num
        return f"({num})/({P.p_str(K, self.den, names)})"

    def __repr__(self):
        return f"<{self} in {self.field.name}>"


class FrobeniusCoords:
    """Expansion a = sum_e b_e^2 * t^e over the subfield of squares.

    The keys run over all exponent vectors e in {0,1}^m; the reconstruction
    identity is verified at construction.
    """

    def __init__(self, field: "RationalFunctionField", element: RFElement,
                 coords: dict[tuple[int, ...], RFElement]):
        self.field = field
        self.element = element
        self.coords = coords
        if self.reconstruct() != element:
            raise AssertionError("Frobenius coordinate reconstruction failed")

    def reconstruct(self) -> RFElement:
        total = self.field.zero
        for e, b in self.coords.items():
            total = total + b * b * self.field.monomial(e)
        return total

    def __getitem__(self, e) -> RFElement:
        return self.coords[tuple(e)]

    def items(self):
        return self.coords.items()


class RationalFunctionField:
    """F_{2^k}(t) or F_{2^k}(t,u) with exact, canonical fraction arithmetic."""

    kind = "rational-function"
    is_finite = False
    order = None

    def __init__(self, base: GaloisField, variables: tuple[str, ...]):
        if base.p != 2:
            raise ValueError(
                "rational function fields are supported in characteristic 2 only"
            )
        m = len(variables)
        if not 1 <= m <= 2:
            raise ValueError("rational function fields support 1 or 2 variables")
        if len(set(variables)) != m:
            raise ValueError("variable names must be distinct")
        self.base = base
        self.variables = tuple(variables)
        self.m = m
        base_name = base.name
        self.name = f"{base_name}({','.join(variables)})"
        self.zero = RFElement(self, P.p_zero(), P.p_const(m, 1))
        self.one = RFElement(self, P.p_const(m, 1), P.p_const(m, 1))

    @property
    def characteristic(self) -> int:
        return 2

    @property
    def square_dim(self) -> int:
        """Dimension of the field over its subfield of squares: 2^m."""
        return 1 << self.m

    def _monic(self, num: Poly, den: Poly) -> RFElement:
        """Wrap an already-reduced fraction, normalizing the denominator."""
        if not den:
            raise ZeroDivisionError(f"zero denominator in {self.name}")
        if not num:
            return self.zero
        K = self.base
        lc = P.p_lc(den)
        if lc != 1:
            inv = K.inv_code(lc)
            num = P.p_scale(K, num, inv)
            den = P.p_scale(K, den, inv)
        return RFElement(self, num, den)

    def _reduce(self, num: Poly, den: Poly) -> RFElement:
        if not den:
            raise ZeroDivisionError(f"zero denominator in {self.name}")
        if not num:
            return self.zero
        K = self.base
        g = P.p_gcd(K, num, den, self.m)
        if P.p_total_degree(g) > 0:
            num = P.p_exact_div(K, num, g)
            den = P.p_exact_div(K, den, g)
        return self._monic(num, den)

    def element_from_polys(self, num: Poly, den: Poly) -> RFElement:
        return self._reduce(num, den)

    def from_int(self, n: int) -> RFElement:
        return self._reduce(P.p_const(self.m, n % 2), P.p_const(self.m, 1))

    def from_base(self, c) -> RFElement:
        code = c.code if hasattr(c, "code") else int(c)
        return self._reduce(P.p_const(self.m, code), P.p_const(self.m, 1))

    def monomial(self, e: tuple[int, ...]) -> RFElement:
        return RFElement(self, {tuple(e): 1}, P.p_const(self.m, 1))

    def variable(self, i: int) -> RFElement:
        return RFElement(self, P.p_var(self.m, i), P.p_const(self.m, 1))

    def var_elements(self) -> dict[str, RFElement]:
        return {name: self.variable(i) for i, name in enumerate(self.variables)}

    # -- square theory ---------------------------------------------------------

    def is_square(self, a: RFElement) -> bool:
        if a.is_zero():
            return True
        prod = P.p_mul(self.base, a.num, a.den)
        return P.p_sqrt(self.base, prod) is not None

    def sqrt(self, a: RFElement) -> RFElement:
        if a.is_zero():
            return self.zero
        root = P.p_sqrt(self.base, P.p_mul(self.base, a.num, a.den))
        if root is None:
            raise ValueError(f"{a} is not a square in {self.name}")
        return self._reduce(root, a.den)

    def frobenius_coords(self, a: RFElement) -> FrobeniusCoords:
        """Coordinates of a over the basis {t^e : e in {0,1}^m} of F over F^2."""
        K = self.base
        h = P.p_mul(K, a.num, a.den)  # a = (num*den)/den^2
        pieces: dict[tuple[int, ...], Poly] = {
            e: {} for e in itertools.product((0, 1), repeat=self.m)
        }
        for exp, c in h.items():
            parity = tuple(x % 2 for x in exp)
            half = tuple((x - p) // 2 for x, p in zip(exp, parity))
            pieces[parity][half] = K.sqrt_code(c)
        coords = {
            e: self._reduce(piece, a.den) for e, piece in pieces.items()
        }
        return FrobeniusCoords(self, a, coords)

    def square_dependence(self, values) -> tuple[RFElement, ...] | None:
        """A nonzero c with sum_i c_i^2 v_i = 0, or None if F^2-independent."""
        values = list(values)
        if not values:
            raise ValueError("square_dependence needs at least one value")
        if any(v.is_zero() for v in values):
            raise ValueError("square_dependence requires nonzero values")
        from .linalg import kernel_vector

        coords = [self.frobenius_coords(v) for v in values]
        basis = sorted(itertools.product((0, 1), repeat=self.m))
        rows = [[c[e] for c in coords] for e in basis]
        sol = kernel_vector(rows, len(values), self.zero, self.one)
        if sol is None:
            return None
        total = self.zero
        for c, v in zip(sol, values):
            total = total + c * c * v
        assert total.is_zero(), "unsound square dependence"
        return tuple(sol)

    def solve_square_combination(self, values, target) -> tuple[RFElement, ...] | None:
        """Solve sum_i x_i^2 v_i = target exactly, or return None."""
        values = list(values)
        from .linalg import solve_linear

        coords = [self.frobenius_coords(v) for v in values]
        rhs = self.frobenius_coords(target)
        basis = sorted(itertools.product((0, 1), repeat=self.m))
        rows = [[c[e] for c in coords] for e in basis]
        b = [rhs[e] for e in basis]
        sol = solve_linear(rows, b, self.zero, self.one)
        if sol is None:
            return None
        total = self.zero
        for x, v in zip(sol, values):
            total = total + x * x * v
        assert total == target, "unsound representation witness"
        return tuple(sol)

    # -- sampling and parsing ---------------------------------------------------

    def random_unit(self, seed, degree_bound: int | None = None) -> RFElement:
        rng = seed if isinstance(seed, random.Random) else random.Random(seed)
        bound = 4 if degree_bound is None else degree_bound
        while True:
            num = self._random_poly(rng, bound)
            den = self._random_poly(rng, bound)
            if num and den:
                el = self._reduce(num, den)
                if not el.is_zero():
                    return el

    def _random_poly(self, rng: random.Random, bound: int) -> Poly:
        K = self.base
        nterms = rng.randint(1, 2)
        out: Poly = {}
        for _ in range(nterms):
            total = rng.randint(0, bound)
            if self.m == 1:
                e = (total,)
            else:
                first = rng.randint(0, total)
                e = (first, total - first)
            c = rng.randrange(1, K.q)
            out[e] = K.add_code(out.get(e, 0), c)
            if out[e] == 0:
                del out[e]
        return out

    def units(self):
        raise NotImplementedError(f"{self.name} has infinitely many units")

    def parse_element(self, text: str) -> RFElement:
        from .fields import parse_element

        return parse_element(self, text)

    def spec_key(self):
        return ("rational-function", self.base.spec_key(), self.variables)

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunctionField)
            and self.spec_key() == other.spec_key()
        )

    def __hash__(self):
        return hash(self.spec_key())

    def __repr__(self):
        return self.name
