"""Grothendieck-Witt and Witt ring arithmetic with canonical decision procedures.

A GW element is a formal integer combination of generators <u>.  Its canonical
form is the pair (rank, Witt class): two GW elements are equal exactly when
both agree, which realizes the fiber product of Z and W(F) over Z/2.

Witt classes are decided semantically.  The stored representative is the
anisotropic kernel (sorted, certified by the decomposition), but equality is a
zero test of the difference, never entry comparison.

Membership in the powers I^n of the fundamental ideal is decided by closed
rules: rank parity for n = 1; rank parity plus a square determinant for n = 2
over two-variable function fields (the determinant of a metabolic plane in
characteristic 2 is a square, so the determinant class is a Witt invariant);
and a zero test once 2^n exceeds the dimension of F over its squares, where
I^n vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .common import FieldMismatchError, MembershipError
from .fields import Field, FieldElement
from .forms import DiagonalForm, GramMatrix, is_isotropic, pfister, witt_decompose
from .galois import GaloisField
from .ratfunc import RationalFunctionField


class GWElement:
    """Formal Z-linear combination of generators <u>, u a unit."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms: dict[FieldElement, int] | None = None):
        self.field = field
        clean: dict[FieldElement, int] = {}
        for u, mult in (terms or {}).items():
            if u.is_zero():
                raise ValueError("generator arguments must be nonzero")
            if mult:
                clean[u] = mult
        self.terms = clean

    @classmethod
    def unit(cls, field: Field, u: FieldElement) -> "GWElement":
        return cls(field, {u: 1})

    @classmethod
    def from_int(cls, field: Field, n: int) -> "GWElement":
        return cls(field, {field.one: n} if n else {})

    @classmethod
    def from_diagonal(cls, f: DiagonalForm) -> "GWElement":
        out: dict[FieldElement, int] = {}
        for a in f.entries:
            out[a] = out.get(a, 0) + 1
        return cls(f.field, out)

    def _coerce(self, other) -> "GWElement":
        if isinstance(other, GWElement):
            if other.field is not self.field:
                raise FieldMismatchError("mixed fields in GW arithmetic")
            return other
        if isinstance(other, int):
            return GWElement.from_int(self.field, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for u, m in o.terms.items():
            out[u] = out.get(u, 0) + m
        return GWElement(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return GWElement(self.field, {u: -m for u, m in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return GWElement(self.field, {u: m * other for u, m in self.terms.items()})
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out: dict[FieldElement, int] = {}
        for u, m in self.terms.items():
            for v, n in o.terms.items():
                w = u * v
                out[w] = out.get(w, 0) + m * n
        return GWElement(self.field, out)

    __rmul__ = __mul__

    def rank(self) -> int:
        return sum(self.terms.values())

    def diagonal_pair(self) -> tuple[list[FieldElement], list[FieldElement]]:
        """Positive and negative parts as entry lists."""
        pos: list[FieldElement] = []
        neg: list[FieldElement] = []
        for u, m in self.terms.items():
            (pos if m > 0 else neg).extend([u] * abs(m))
        return pos, neg

    def witt(self) -> "WittClass":
        pos, neg = self.diagonal_pair()
        entries = pos + [-u for u in neg]  # <u> + <-u> = h dies in W
        return witt_class(DiagonalForm(self.field, entries))

    def __eq__(self, other):
        if not isinstance(other, GWElement) or other.field is not self.field:
            return NotImplemented
        return gw_equal(self, other)

    def __hash__(self):
        return hash((self.field.name, self.rank()))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for u in sorted(self.terms, key=lambda e: e.sort_key()):
            m = self.terms[u]
            head = f"<{u}>"
            if m == 1:
                parts.append(head)
            elif m == -1:
                parts.append(f"-{head}")
            else:
                parts.append(f"{m}{head}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"GW({self})"

    def to_json(self):
        return [
            {"unit": str(u), "multiplicity": m}
            for u, m in sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())
        ]


class WittClass:
    """A Witt-ring class, held by its certified anisotropic representative."""

    __slots__ = ("field", "entries")

    def __init__(self, field: Field, entries: tuple[FieldElement, ...]):
        self.field = field
        self.entries = entries

    @property
    def rank(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def representative(self) -> DiagonalForm:
        return DiagonalForm(self.field, self.entries)

    def __add__(self, other: "WittClass") -> "WittClass":
        if other.field is not self.field:
            raise FieldMismatchError("mixed fields in Witt arithmetic")
        return witt_class(DiagonalForm(self.field, self.entries + other.entries))

    def __neg__(self) -> "WittClass":
        return WittClass(self.field, tuple(-a for a in self.entries))

    def __sub__(self, other: "WittClass") -> "WittClass":
        return self + (-other)

    def __mul__(self, other: "WittClass") -> "WittClass":
        if other.field is not self.field:
            raise FieldMismatchError("mixed fields in Witt arithmetic")
        if self.is_zero() or other.is_zero():
            return WittClass(self.field, ())
        prod = self.representative().tensor(other.representative())
        return witt_class(prod)

    def __eq__(self, other):
        if not isinstance(other, WittClass) or other.field is not self.field:
            return NotImplemented
        return witt_equal(self, other)

    def __hash__(self):
        # rank of the anisotropic kernel is a class invariant
        return hash((self.field.name, self.rank))

    def determinant(self) -> FieldElement:
        d = self.field.one
        for a in self.entries:
            d = d * a
        return d

    def __str__(self):
        return "W<" + ", ".join(str(a) for a in self.entries) + ">"

    def __repr__(self):
        return str(self)

    def to_json(self):
        return {"anisotropic": [str(a) for a in self.entries]}


@lru_cache(maxsize=1 << 16)
def _anisotropic_entries(field: Field, entries: tuple) -> tuple:
    if not entries:
        return ()
    deco = witt_decompose(DiagonalForm(field, entries))
    return deco.anisotropic.entries


def witt_class(f: DiagonalForm | GramMatrix) -> WittClass:
    """The Witt class of a form: its anisotropic kernel, sorted."""
    if isinstance(f, GramMatrix):
        deco = witt_decompose(f)
        f = deco.anisotropic
    entries = tuple(sorted(f.entries, key=lambda a: a.sort_key()))
    return WittClass(f.field, _anisotropic_entries(f.field, entries))


def witt_is_zero(w: WittClass) -> bool:
    return w.is_zero()


def witt_equal(w1: WittClass, w2: WittClass) -> bool:
    if w1.field is not w2.field:
        raise FieldMismatchError("mixed fields in Witt comparison")
    if w1.entries == w2.entries:
        return True
    return (w1 - w2).is_zero()


def in_ideal_power(w: WittClass, n: int) -> bool:
    """Decide w in I^n(F); I^n = W(F) for n <= 0."""
    if n <= 0:
        return True
    field = w.field
    if n == 1:
        return w.rank % 2 == 0
    if isinstance(field, GaloisField):
        # I^2 of a finite field vanishes
        return w.is_zero()
    assert isinstance(field, RationalFunctionField)
    m = field.m
    if n > m:
        # 2^n > 2^m = dim_{F^2} F forces I^n = 0
        return w.is_zero()
    # remaining case: n = 2, m = 2
    return w.rank % 2 == 0 and field.is_square(w.determinant())


@dataclass(frozen=True)
class GWCanonical:
    """Canonical form of a GW element: rank together with its Witt class."""

    rank: int
    witt: WittClass

    def is_zero(self) -> bool:
        return self.rank == 0 and self.witt.is_zero()

    def __eq__(self, other):
        if not isinstance(other, GWCanonical):
            return NotImplemented
        return self.rank == other.rank and witt_equal(self.witt, other.witt)

    def __str__(self):
        return f"(rank {self.rank}, {self.witt})"

    def to_json(self):
        return {"rank": self.rank, "witt": self.witt.to_json()}


def gw_canonical(x: GWElement) -> GWCanonical:
    return GWCanonical(x.rank(), x.witt())


def gw_equal(x: GWElement, y: GWElement) -> bool:
    if x.field is not y.field:
        raise FieldMismatchError("mixed fields in GW comparison")
    return x.rank() == y.rank() and witt_equal(x.witt(), y.witt())


class IFiltClass:
    """An element of I^n(F) carrying its degree and a checked membership."""

    __slots__ = ("witt", "degree")

    def __init__(self, witt: WittClass, degree: int):
        if not in_ideal_power(witt, degree):
            raise MembershipError(
                f"{witt} is not a member of I^{degree}({witt.field.name})"
            )
        self.witt = witt
        self.degree = degree

    @property
    def field(self) -> Field:
        return self.witt.field

    def is_zero(self) -> bool:
        return self.witt.is_zero()

    def __add__(self, other: "IFiltClass") -> "IFiltClass":
        if other.degree != self.degree:
            raise ValueError("ideal filtration degrees differ")
        return IFiltClass(self.witt + other.witt, self.degree)

    def __neg__(self) -> "IFiltClass":
        return IFiltClass(-self.witt, self.degree)

    def __sub__(self, other: "IFiltClass") -> "IFiltClass":
        return self + (-other)

    def __mul__(self, other: "IFiltClass") -> "IFiltClass":
        return IFiltClass(self.witt * other.witt, self.degree + other.degree)

    def equal_mod_next(self, other: "IFiltClass") -> bool:
        """Equality in I^n / I^(n+1)."""
        if other.degree != self.degree:
            raise ValueError("ideal filtration degrees differ")
        return in_ideal_power(self.witt - other.witt, self.degree + 1)

    def __eq__(self, other):
        if not isinstance(other, IFiltClass):
            return NotImplemented
        return self.degree == other.degree and witt_equal(self.witt, other.witt)

    def __hash__(self):
        return hash((self.degree, self.witt))

    def __str__(self):
        return f"{self.witt} in I^{self.degree}"

    def to_json(self):
        return {"degree": self.degree, **self.witt.to_json()}


def s_n(field: Field, symbols) -> IFiltClass:
    """The Milnor map on one symbol: the class of <1,-a_1> x ... x <1,-a_n>.

    Comparisons of values in degree n are made modulo I^(n+1) via
    IFiltClass.equal_mod_next.
    """
    symbols = tuple(symbols)
    if any(a.is_zero() for a in symbols):
        raise ValueError("symbol entries must be nonzero")
    form = pfister(field, tuple(-a for a in symbols))
    return IFiltClass(witt_class(form), len(symbols))


def pfister_decompose(c: IFiltClass) -> list[tuple[FieldElement, ...]]:
    """Write c in I^n (n = 1, 2; characteristic 2) as a sum of n-fold Pfister forms.

    Returns slot tuples T_i with sum_i <<T_i>> Witt-equal to c; the
    reconstruction is verified before returning.
    """
    field = c.field
    if field.characteristic != 2:
        raise ValueError("Pfister decomposition is implemented in characteristic 2")
    n = c.degree
    if n not in (1, 2):
        raise ValueError("Pfister decomposition supports degrees 1 and 2")
    entries = c.witt.entries  # even count, certified by membership
    tuples: list[tuple[FieldElement, ...]] = []
    if n == 1:
        # <a_1,...,a_2r> = sum <<a_i>> in W since 2r<1> = 0 in characteristic 2
        tuples = [(a,) for a in entries if not witt_is_zero(_pfister_class(field, (a,)))]
    else:
        # fold with <<a>> + <<b>> = <<ab>> + <<a,b>>; the trailing <<prod>>
        # vanishes because membership in I^2 makes the determinant a square
        if entries:
            acc = entries[0]
            for a in entries[1:]:
                pair = (acc, a)
                if not witt_is_zero(_pfister_class(field, pair)):
                    tuples.append(pair)
                acc = acc * a
            assert field.is_square(acc), "I^2 membership must square the determinant"
    total = WittClass(field, ())
    for t in tuples:
        total = total + _pfister_class(field, t)
    assert witt_equal(total, c.witt), "Pfister decomposition reconstruction failed"
    return tuples


def _pfister_class(field: Field, slots: tuple) -> WittClass:
    return witt_class(pfister(field, slots))


# -- chain equivalence -----------------------------------------------------------


@dataclass(frozen=True)
class ChainStep:
    """One two-entry rewrite, annotated with the relation instance used."""

    before: tuple
    after: tuple
    positions: tuple[int, int]
    old_pair: tuple
    new_pair: tuple
    relation: str  # "GW1" | "GW2" | "GW3"
    certificate: str

    def __str__(self):
        old = ", ".join(str(a) for a in self.old_pair)
        new = ", ".join(str(a) for a in self.new_pair)
        return f"({old}) -> ({new}) by {self.relation} [{self.certificate}]"


def _sorted_state(entries) -> tuple:
    return tuple(sorted(entries, key=lambda a: a.sort_key()))


def _pair_moves(field: Field, a, b, scalars):
    """Rewrites of the pair (a, b) by single GW relation instances."""
    moves = []
    one = field.one
    for s in scalars:
        if s.is_zero():
            continue
        s2 = s * s
        moves.append(((a * s2, b), "GW1", f"<{a}*({s})^2> = <{a}>"))
        moves.append(((a, b * s2), "GW1", f"<{b}*({s})^2> = <{b}>"))
    if (a + b).is_zero():
        moves.append(((one, -one), "GW2", f"<{a}> + <-{a}> = <1> + <-1>"))
    if a == one and b == -one:
        for u in scalars:
            if not u.is_zero():
                moves.append(((u, -u), "GW2", f"<1> + <-1> = <{u}> + <-{u}>"))
    s = a + b
    if not s.is_zero():
        moves.append(
            ((s, s * a * b), "GW3", f"<{a}> + <{b}> = <{a}+{b}> + <({a}+{b})*{a}*{b}>")
        )
    for u in scalars:
        if u.is_zero():
            continue
        v = a - u
        if v.is_zero():
            continue
        # backward GW3: (a, b) = (u+v, (u+v)uv) for some u in the pool
        if (u * v * a) == b:
            moves.append(
                ((u, v), "GW3", f"<{u}> + <{v}> = <{a}> + <{b}>")
            )
    return moves


def chain_equiv_search(
    field: Field,
    start,
    goal,
    depth: int = 8,
    scalars=None,
) -> list[ChainStep] | None:
    """Breadth-first search for a chain of two-entry GW rewrites from start to goal.

    States are kept entry-sorted (reorderings are themselves two-entry moves
    preserving everything).  Sound but bounded: None means no chain was found
    within the depth and candidate budget, not that none exists.
    """
    start = tuple(start)
    goal = tuple(goal)
    if len(start) != len(goal):
        raise ValueError("chains need tuples of equal length")
    gw_start = GWElement(field, {})
    gw_goal = GWElement(field, {})
    for a in start:
        gw_start = gw_start + GWElement.unit(field, a)
    for a in goal:
        gw_goal = gw_goal + GWElement.unit(field, a)
    if not gw_equal(gw_start, gw_goal):
        return None
    if scalars is None:
        if isinstance(field, GaloisField):
            scalars = list(field.units())
        else:
            scalars = [field.one] + [v for v in field.var_elements().values()]
            scalars += list(start) + list(goal)
    state0 = _sorted_state(start)
    target = _sorted_state(goal)
    if state0 == target:
        return []
    frontier: dict[tuple, list[ChainStep]] = {state0: []}
    seen = {state0}
    for _ in range(depth):
        new_frontier: dict[tuple, list[ChainStep]] = {}
        for state, path in frontier.items():
            n = len(state)
            for i in range(n):
                for j in range(i + 1, n):
                    a, b = state[i], state[j]
                    for (new_pair, relation, cert) in _pair_moves(field, a, b, scalars):
                        rest = [state[k] for k in range(n) if k not in (i, j)]
                        nxt = _sorted_state(rest + list(new_pair))
                        if nxt in seen:
                            continue
                        seen.add(nxt)
                        step = ChainStep(
                            before=state,
                            after=nxt,
                            positions=(i, j),
                            old_pair=(a, b),
                            new_pair=new_pair,
                            relation=relation,
                            certificate=cert,
                        )
                        if nxt == target:
                            return path + [step]
                        new_frontier[nxt] = path + [step]
        if not new_frontier:
            return None
        frontier = new_frontier
    return None
