"""The Milnor-Witt expression engine.

Expressions are trees over generators [u] (degree 1) and eta (degree -1),
integers, sums, products, negation and powers.  The sugar <u>, eps, h and
n_eps(n) is desugared at parse time:

    <u>      = 1 + eta [u]
    eps      = -<-1>
    h        = eta [-1] + 2
    n_eps(n) = <1> + <-1> + <1> + ...   (n terms, alternating)

Every expression expands into a sum of monomials eta^m [u_1]...[u_r] with
integer coefficients (eta commutes with brackets, so the monomial form is
faithful).  A homogeneous expression of degree n normalizes degreewise:

    n <= 0:  eta^m [u_1]...[u_r] = eta^(-n) * prod(<u_i> - 1) lands in the
             Grothendieck-Witt ring (n = 0) or the Witt ring (n < 0);
    n >= 1:  the pair of its Milnor-symbol image and the Witt class
             prod(<u_i> - 1), an element of the fiber product J^n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .common import InhomogeneousError, ParseError, Verdict
from .fields import (
    ElementParser,
    Field,
    FieldElement,
    TokenStream,
    tokenize,
)
from .milnor import JElement, MilnorSymbolSum, j_equal
from .wittring import (
    GWCanonical,
    GWElement,
    IFiltClass,
    WittClass,
    gw_canonical,
    in_ideal_power,
    witt_class,
    witt_equal,
)
from .forms import DiagonalForm


# -- expression trees ------------------------------------------------------------


class MWExpr:
    """Base class for Milnor-Witt expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Bracket(MWExpr):
    unit: FieldElement

    def __post_init__(self):
        if self.unit.is_zero():
            raise ValueError("bracket arguments must be nonzero")


@dataclass(frozen=True)
class Eta(MWExpr):
    pass


@dataclass(frozen=True)
class IntLit(MWExpr):
    value: int


@dataclass(frozen=True)
class Sum(MWExpr):
    terms: tuple[MWExpr, ...]


@dataclass(frozen=True)
class Product(MWExpr):
    factors: tuple[MWExpr, ...]


@dataclass(frozen=True)
class Neg(MWExpr):
    arg: MWExpr


@dataclass(frozen=True)
class Power(MWExpr):
    base: MWExpr
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("powers of expressions must have nonnegative exponent")


ETA = Eta()


def bracket(u: FieldElement) -> MWExpr:
    return Bracket(u)


def angle(u: FieldElement) -> MWExpr:
    """<u> = 1 + eta [u]."""
    return Sum((IntLit(1), Product((ETA, Bracket(u)))))


def epsilon(field: Field) -> MWExpr:
    """eps = -<-1>."""
    return Neg(angle(-field.one))


def hyperbolic(field: Field) -> MWExpr:
    """h = eta [-1] + 2."""
    return Sum((Product((ETA, Bracket(-field.one))), IntLit(2)))


def n_epsilon(field: Field, n: int) -> MWExpr:
    """n_eps = sum_{i=1..n} <(-1)^(i-1)> for n >= 0, and -<-1>(-n)_eps below."""
    if n == 0:
        return IntLit(0)
    if n < 0:
        return Neg(Product((angle(-field.one), n_epsilon(field, -n))))
    terms = []
    sign = field.one
    for _ in range(n):
        terms.append(angle(sign))
        sign = -sign
    return Sum(tuple(terms)) if len(terms) > 1 else terms[0]


def flatten(e: MWExpr) -> MWExpr:
    """Canonical flattening: unnest sums/products, unwrap trivial powers."""
    if isinstance(e, Sum):
        terms = []
        for t in e.terms:
            t = flatten(t)
            if isinstance(t, Sum):
                terms.extend(t.terms)
            else:
                terms.append(t)
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))
    if isinstance(e, Product):
        factors = []
        for f in e.factors:
            f = flatten(f)
            if isinstance(f, Product):
                factors.extend(f.factors)
            else:
                factors.append(f)
        return factors[0] if len(factors) == 1 else Product(tuple(factors))
    if isinstance(e, Neg):
        inner = flatten(e.arg)
        if isinstance(inner, IntLit):
            return IntLit(-inner.value)
        return Neg(inner)
    if isinstance(e, Power):
        if e.exponent == 0:
            return IntLit(1)
        base = flatten(e.base)
        return base if e.exponent == 1 else Power(base, e.exponent)
    return e


# -- parsing and printing -----------------------------------------------------------


class _ExprParser:
    def __init__(self, field: Field, stream: TokenStream,
                 bindings: dict[str, FieldElement] | None = None):
        self.field = field
        self.stream = stream
        self.elements = ElementParser(field, stream, bindings)

    def parse_expr(self) -> MWExpr:
        terms = [self.parse_term()]
        while True:
            kind, val, _ = self.stream.peek()
            if kind == "sym" and val in "+-":
                self.stream.next()
                term = self.parse_term()
                terms.append(Neg(term) if val == "-" else term)
            else:
                break
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def parse_term(self) -> MWExpr:
        kind, val, _ = self.stream.peek()
        if kind == "sym" and val == "-":
            self.stream.next()
            return Neg(self.parse_term())
        factors = [self.parse_factor()]
        while True:
            kind, val, _ = self.stream.peek()
            if (
                kind in ("int", "name")
                or (kind == "sym" and val in ("(", "[", "<"))
            ):
                factors.append(self.parse_factor())
            elif kind == "sym" and val == "*":
                self.stream.next()
                factors.append(self.parse_factor())
            else:
                break
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def parse_factor(self) -> MWExpr:
        node = self.parse_primary()
        kind, val, _ = self.stream.peek()
        if kind == "sym" and val == "^":
            self.stream.next()
            k2, v2, p2 = self.stream.next()
            if k2 != "int":
                raise ParseError("expected a nonnegative integer exponent", p2)
            node = Power(node, int(v2))
        return node

    def parse_primary(self) -> MWExpr:
        kind, val, pos = self.stream.next()
        if kind == "int":
            return IntLit(int(val))
        if kind == "name":
            if val == "eta":
                return ETA
            if val == "eps":
                return epsilon(self.field)
            if val == "h":
                return hyperbolic(self.field)
            if val == "n_eps":
                self.stream.expect("(")
                k2, v2, p2 = self.stream.next()
                sign = 1
                if k2 == "sym" and v2 == "-":
                    sign = -1
                    k2, v2, p2 = self.stream.next()
                if k2 != "int":
                    raise ParseError("expected an integer in n_eps(...)", p2)
                self.stream.expect(")")
                return n_epsilon(self.field, sign * int(v2))
            raise ParseError(f"unknown expression name {val!r}", pos)
        if kind == "sym" and val == "[":
            u = self.elements.parse_expr()
            self.stream.expect("]")
            if u.is_zero():
                raise ParseError("zero inside a bracket generator", pos)
            return Bracket(u)
        if kind == "sym" and val == "<":
            u = self.elements.parse_expr()
            self.stream.expect(">")
            if u.is_zero():
                raise ParseError("zero inside an angle generator", pos)
            return angle(u)
        if kind == "sym" and val == "(":
            inner = self.parse_expr()
            self.stream.expect(")")
            return inner
        raise ParseError(f"unexpected token {val!r} in expression", pos)


def parse(text: str, field: Field,
          bindings: dict[str, FieldElement] | None = None) -> MWExpr:
    """Parse an expression; sugar is desugared, so the tree uses core nodes only."""
    stream = TokenStream(tokenize(text), text)
    parser = _ExprParser(field, stream, bindings)
    expr = parser.parse_expr()
    if not stream.at_end():
        _, val, pos = stream.peek()
        raise ParseError(f"trailing input {val!r} after expression", pos)
    return flatten(expr)


def print_expr(e: MWExpr) -> str:
    """Deterministic printer; parse(print_expr(e), field) == flatten(e)."""
    return _print(flatten(e), 0)


def _print(e: MWExpr, prec: int) -> str:
    # precedence levels: 0 sum, 1 product, 2 atom/power
    if isinstance(e, Sum):
        body = " + ".join(_print(t, 1) for t in e.terms)
        body = body.replace("+ -", "- ")
        return f"({body})" if prec >= 1 else body
    if isinstance(e, Neg):
        body = f"-{_print(e.arg, 1)}"
        return f"({body})" if prec >= 1 else body
    if isinstance(e, Product):
        return " ".join(_print(f, 2) for f in e.factors)
    if isinstance(e, Power):
        return f"{_print(e.base, 2)}^{e.exponent}"
    if isinstance(e, Eta):
        return "eta"
    if isinstance(e, Bracket):
        return f"[{e.unit}]"
    if isinstance(e, IntLit):
        return str(e.value) if e.value >= 0 else f"(-{-e.value})"
    raise TypeError(f"not an expression node: {e!r}")


# -- monomial expansion ---------------------------------------------------------------


Monomial = tuple[int, tuple[FieldElement, ...]]  # (eta power m, bracket entries)


@dataclass(frozen=True)
class MWMonomialSum:
    """Integer combination of monomials eta^m [u_1]...[u_r] in one degree."""

    field: Field
    degree: int
    terms: dict[Monomial, int]

    def is_empty(self) -> bool:
        return not self.terms

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (m, us), c in sorted(
            self.terms.items(),
            key=lambda kv: (kv[0][0], tuple(u.sort_key() for u in kv[0][1])),
        ):
            bits = []
            if m == 1:
                bits.append("eta")
            elif m > 1:
                bits.append(f"eta^{m}")
            bits.extend(f"[{u}]" for u in us)
            body = " ".join(bits) if bits else "1"
            parts.append(body if c == 1 else f"{c} {body}")
        return " + ".join(parts).replace("+ -", "- ")


def structural_degree(e: MWExpr) -> int | None:
    """Degree read off the tree; None means the zero expression (any degree).

    Raises InhomogeneousError when subterms of genuinely different degrees are
    combined additively.
    """
    if isinstance(e, Bracket):
        return 1
    if isinstance(e, Eta):
        return -1
    if isinstance(e, IntLit):
        return 0 if e.value else None
    if isinstance(e, Neg):
        return structural_degree(e.arg)
    if isinstance(e, Power):
        if e.exponent == 0:
            return 0
        d = structural_degree(e.base)
        return None if d is None else d * e.exponent
    if isinstance(e, Product):
        total = 0
        for f in e.factors:
            d = structural_degree(f)
            if d is None:
                return None
            total += d
        return total
    if isinstance(e, Sum):
        degs = {structural_degree(t) for t in e.terms}
        degs.discard(None)
        if len(degs) > 1:
            raise InhomogeneousError(
                f"expression mixes degrees {sorted(degs)}"
            )
        return degs.pop() if degs else None
    raise TypeError(f"not an expression node: {e!r}")


def monomial_expand(e: MWExpr, field: Field) -> list[MWMonomialSum]:
    """Expand into monomial sums, one per homogeneous degree present."""
    raw = _expand_node(e)
    buckets: dict[int, dict[Monomial, int]] = {}
    for (m, us), c in raw.items():
        buckets.setdefault(len(us) - m, {})[(m, us)] = c
    return [
        MWMonomialSum(field, d, terms) for d, terms in sorted(buckets.items())
    ]


def homogeneous_expand(e: MWExpr, field: Field,
                       degree: int | None = None) -> MWMonomialSum:
    """Expand a homogeneous expression; zero expressions adopt the tree degree."""
    sums = monomial_expand(e, field)
    if len(sums) > 1:
        raise InhomogeneousError(
            f"expression has components in degrees {[s.degree for s in sums]}"
        )
    if sums:
        if degree is not None and sums[0].degree != degree:
            raise InhomogeneousError(
                f"expected degree {degree}, found {sums[0].degree}"
            )
        return sums[0]
    if degree is None:
        degree = structural_degree(e)
        if degree is None:
            degree = 0
    return MWMonomialSum(field, degree, {})


def _expand_node(e: MWExpr) -> dict[Monomial, int]:
    if isinstance(e, Power):
        base = _expand_node(e.base)
        out: dict[Monomial, int] = {(0, ()): 1}
        for _ in range(e.exponent):
            out = _mono_mul(out, base)
        return out
    if isinstance(e, Product):
        out = {(0, ()): 1}
        for f in e.factors:
            out = _mono_mul(out, _expand_node(f))
        return out
    if isinstance(e, Sum):
        out: dict[Monomial, int] = {}
        for t in e.terms:
            for mon, c in _expand_node(t).items():
                new = out.get(mon, 0) + c
                if new:
                    out[mon] = new
                else:
                    out.pop(mon, None)
        return out
    if isinstance(e, Neg):
        return {mon: -c for mon, c in _expand_node(e.arg).items()}
    if isinstance(e, Bracket):
        return {(0, (e.unit,)): 1}
    if isinstance(e, Eta):
        return {(1, ()): 1}
    if isinstance(e, IntLit):
        return {(0, ()): e.value} if e.value else {}
    raise TypeError(f"not an expression node: {e!r}")


def _mono_mul(lhs: dict[Monomial, int], rhs: dict[Monomial, int]) -> dict[Monomial, int]:
    out: dict[Monomial, int] = {}
    for (m1, u1), c1 in lhs.items():
        for (m2, u2), c2 in rhs.items():
            mon = (m1 + m2, u1 + u2)
            new = out.get(mon, 0) + c1 * c2
            if new:
                out[mon] = new
            else:
                out.pop(mon, None)
    return out


# -- degreewise canonicalization ----------------------------------------------------


@dataclass(frozen=True)
class CanonicalKMW:
    """Canonical image of a homogeneous expression.

    Payload by degree: a Witt class for degree < 0, a (rank, Witt class) pair
    for degree 0, and a J^n pair for degree >= 1.  milnor_decidable records
    whether the integral Milnor component admits a complete decision procedure
    over the given field.
    """

    field: Field
    degree: int
    payload: Union[WittClass, GWCanonical, JElement]
    milnor_decidable: bool

    def is_zero(self) -> Verdict:
        if self.degree >= 1:
            return self.payload.is_zero()
        zero = self.payload.is_zero()
        return Verdict.EQUAL if zero else Verdict.NOT_EQUAL

    def __str__(self):
        return f"degree {self.degree}: {self.payload}"

    def to_json(self):
        if self.degree < 0:
            kind = "witt"
        elif self.degree == 0:
            kind = "grothendieck-witt"
        else:
            kind = "j-pair"
        payload = self.payload.to_json()
        return {
            "degree": self.degree,
            "kind": kind,
            "payload": payload,
            "milnor_decidable": self.milnor_decidable,
        }


def _gw_of_monomials(field: Field, terms: dict[Monomial, int]) -> GWElement:
    """Evaluate sum of c * prod_i(<u_i> - 1) in the Grothendieck-Witt ring."""
    total = GWElement(field, {})
    one = GWElement.from_int(field, 1)
    for (m, us), c in terms.items():
        prod = GWElement.from_int(field, c)
        for u in us:
            prod = prod * (GWElement.unit(field, u) - one)
        total = total + prod
    return total


def _milnor_of_monomials(field: Field, degree: int,
                         terms: dict[Monomial, int]) -> MilnorSymbolSum:
    out = MilnorSymbolSum.zero(field, degree)
    for (m, us), c in terms.items():
        if m == 0:
            out = out + MilnorSymbolSum(field, degree, {us: c})
    return out


def normalize(e: MWExpr, field: Field, degree: int | None = None) -> CanonicalKMW:
    """Canonicalize a homogeneous expression degreewise."""
    mono = homogeneous_expand(e, field, degree)
    n = mono.degree
    if n <= 0:
        gw = _gw_of_monomials(field, mono.terms)
        if n == 0:
            return CanonicalKMW(field, 0, gw_canonical(gw), True)
        return CanonicalKMW(field, n, gw.witt(), True)
    milnor = _milnor_of_monomials(field, n, mono.terms)
    witt = _gw_of_monomials(field, mono.terms).witt()
    j = JElement(field, n, milnor, IFiltClass(witt, n))
    decidable = field.is_finite or n == 1
    return CanonicalKMW(field, n, j, decidable)


@dataclass(frozen=True)
class ComparisonReport:
    """What kmw_equal looked at, for three-valued reporting."""

    verdict: Verdict
    degree: int | None
    witt_agree: bool | None
    milnor_verdict: Verdict | None

    def to_json(self):
        return {
            "verdict": str(self.verdict),
            "degree": self.degree,
            "witt_agree": self.witt_agree,
            "milnor": None if self.milnor_verdict is None else str(self.milnor_verdict),
        }


def kmw_compare(e1: MWExpr, e2: MWExpr, field: Field) -> ComparisonReport:
    m1 = homogeneous_expand(e1, field)
    m2 = homogeneous_expand(e2, field)
    if m1.is_empty() and m2.is_empty():
        return ComparisonReport(Verdict.EQUAL, None, None, None)
    if m1.is_empty():
        m1 = MWMonomialSum(field, m2.degree, {})
    if m2.is_empty():
        m2 = MWMonomialSum(field, m1.degree, {})
    if m1.degree != m2.degree:
        raise InhomogeneousError(
            f"cannot compare degrees {m1.degree} and {m2.degree}"
        )
    n = m1.degree
    c1 = normalize(e1, field, n)
    c2 = normalize(e2, field, n)
    if n <= 0:
        equal = c1.payload == c2.payload
        return ComparisonReport(
            Verdict.EQUAL if equal else Verdict.NOT_EQUAL, n,
            equal or None, None,
        )
    j1: JElement = c1.payload
    j2: JElement = c2.payload
    witt_agree = witt_equal(j1.witt.witt, j2.witt.witt)
    if not witt_agree:
        return ComparisonReport(Verdict.NOT_EQUAL, n, False, None)
    mv = j_equal(j1, j2)
    return ComparisonReport(mv, n, True, mv)


def kmw_equal(e1: MWExpr, e2: MWExpr, field: Field) -> Verdict:
    return kmw_compare(e1, e2, field).verdict


# -- the Witt K-theory morphism theta ------------------------------------------------


@dataclass(frozen=True)
class GradedIClass:
    """A certified element of I^n(F), the image of a homogeneous expression.

    complete is True in characteristic 2, where the evaluation is a complete
    decision procedure for Witt K-theory equality.
    """

    cls: IFiltClass
    complete: bool

    @property
    def degree(self) -> int:
        return self.cls.degree

    def is_zero(self) -> bool:
        return self.cls.is_zero()

    def __str__(self):
        return str(self.cls)

    def to_json(self):
        return {**self.cls.to_json(), "complete": self.complete}


def _theta_of_monomials(field: Field, mono: MWMonomialSum) -> GradedIClass:
    entries: list[FieldElement] = []
    one = field.one
    for (m, us), c in mono.terms.items():
        coeff = c * (-1) ** m
        block = [one]
        for u in us:
            block = block + [b * (-u) for b in block]
        if coeff < 0:
            block = [-b for b in block]
        entries.extend(block * abs(coeff))
    w = witt_class(DiagonalForm(field, tuple(entries)))
    return GradedIClass(IFiltClass(w, mono.degree), field.characteristic == 2)


def theta(e: MWExpr, field: Field, degree: int | None = None) -> GradedIClass:
    """Evaluate modulo h into the graded ring I^*: [a] -> <<a>>, eta -> -1.

    Each monomial eta^m [u_1]...[u_r] contributes (-1)^m times the class of
    the tensor product of the binary forms <1, -u_i>.
    """
    return _theta_of_monomials(field, homogeneous_expand(e, field, degree))


def kw_equal(e1: MWExpr, e2: MWExpr, field: Field) -> bool:
    """Witt K-theory equality, decided through theta.

    Complete in characteristic 2, where Witt K-theory is isomorphic to the
    graded ring of the fundamental-ideal filtration.
    """
    if field.characteristic != 2:
        raise ValueError(
            "Witt K-theory equality is decided through theta in characteristic 2 only"
        )
    m1 = homogeneous_expand(e1, field)
    m2 = homogeneous_expand(e2, field)
    if m1.is_empty() and m2.is_empty():
        return True
    if m1.is_empty():
        m1 = MWMonomialSum(field, m2.degree, {})
    if m2.is_empty():
        m2 = MWMonomialSum(field, m1.degree, {})
    if m1.degree != m2.degree:
        raise InhomogeneousError(
            f"cannot compare degrees {m1.degree} and {m2.degree}"
        )
    t1 = _theta_of_monomials(field, m1)
    t2 = _theta_of_monomials(field, m2)
    return witt_equal(t1.cls.witt, t2.cls.witt)


# -- phi in nonpositive degrees -------------------------------------------------------


def phi_neg(w: WittClass, n: int, field: Field | None = None) -> MWExpr:
    """The canonical preimage eta^n(<u_1> + ... + <u_r>) of a Witt class.

    normalize(phi_neg(w, n)) recovers w in degree -n (and the pair
    (rank r, w) in degree 0 when n = 0).
    """
    if n < 0:
        raise ValueError("phi_neg needs a nonnegative eta power")
    field = field or w.field
    if w.is_zero():
        if n == 0:
            return IntLit(0)
        return Product((Power(ETA, n), IntLit(0)))
    terms = []
    for u in w.entries:
        factors: list[MWExpr] = []
        if n == 1:
            factors.append(ETA)
        elif n > 1:
            factors.append(Power(ETA, n))
        if u != field.one:
            factors.append(angle(u))
        if not factors:
            terms.append(IntLit(1))
        elif len(factors) == 1:
            terms.append(factors[0])
        else:
            terms.append(Product(tuple(factors)))
    return flatten(Sum(tuple(terms)) if len(terms) > 1 else terms[0])


# -- eta localization ----------------------------------------------------------------


@dataclass(frozen=True)
class LaurentWitt:
    """Laurent polynomial in t with Witt-class coefficients."""

    field: Field
    coeffs: dict[int, WittClass]

    def coefficient(self, k: int) -> WittClass:
        return self.coeffs.get(k, WittClass(self.field, ()))

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.coeffs))

    def __add__(self, other: "LaurentWitt") -> "LaurentWitt":
        out = dict(self.coeffs)
        for k, w in other.coeffs.items():
            merged = out.get(k, WittClass(self.field, ())) + w
            if merged.is_zero():
                out.pop(k, None)
            else:
                out[k] = merged
        return LaurentWitt(self.field, out)

    def __mul__(self, other: "LaurentWitt") -> "LaurentWitt":
        out: dict[int, WittClass] = {}
        for k1, w1 in self.coeffs.items():
            for k2, w2 in other.coeffs.items():
                k = k1 + k2
                merged = out.get(k, WittClass(self.field, ())) + (w1 * w2)
                if merged.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = merged
        return LaurentWitt(self.field, out)

    def __neg__(self) -> "LaurentWitt":
        return LaurentWitt(self.field, {k: -w for k, w in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, LaurentWitt):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return all(
            witt_equal(self.coefficient(k), other.coefficient(k)) for k in keys
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"t^{k} {w}" for k, w in sorted(self.coeffs.items()))


def localize_eta(e: MWExpr, field: Field) -> LaurentWitt:
    """Ring morphism to W(F)[t, 1/t]: [u] -> (1/t)(<u> - 1), eta -> t.

    A homogeneous expression of degree n lands in the t^(-n) component; h is
    killed because 1 + <-1> vanishes in the Witt ring.
    """
    mono_sums = monomial_expand(e, field)
    out: dict[int, WittClass] = {}
    for mono in mono_sums:
        for (m, us), c in mono.terms.items():
            gw = GWElement.from_int(field, c)
            one = GWElement.from_int(field, 1)
            for u in us:
                gw = gw * (GWElement.unit(field, u) - one)
            w = gw.witt()
            k = m - len(us)
            merged = out.get(k, WittClass(field, ())) + w
            if merged.is_zero():
                out.pop(k, None)
            else:
                out[k] = merged
    return LaurentWitt(field, out)
