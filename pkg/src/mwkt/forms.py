"""Symmetric inner product spaces: diagonalization, isotropy, Witt decomposition.

Characteristic 2 needs care in two places.  Diagonalization can leave an
alternating remainder, which is split into symplectic planes instead of being
diagonalized.  And isotropy of diagonal forms is decided exactly: over finite
fields by closed forms, over rational function fields by square-dependence
linear algebra over the subfield of squares.

All witness-producing operations verify their witnesses before returning.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .common import FieldMismatchError
from .fields import Field, FieldElement
from .galois import GaloisField
from .ratfunc import RationalFunctionField


def _same_field(a, b):
    if a.field is not b.field:
        raise FieldMismatchError(f"mixed fields: {a.field} and {b.field}")


class DiagonalForm:
    """Nondegenerate diagonal form <a_1, ..., a_r>; all entries are units."""

    __slots__ = ("field", "entries")

    def __init__(self, field: Field, entries):
        entries = tuple(entries)
        if any(e.is_zero() for e in entries):
            raise ValueError("diagonal entries must be nonzero")
        self.field = field
        self.entries = entries

    @property
    def rank(self) -> int:
        return len(self.entries)

    def orth_sum(self, other: "DiagonalForm") -> "DiagonalForm":
        if other.field is not self.field:
            raise FieldMismatchError("mixed fields in orthogonal sum")
        return DiagonalForm(self.field, self.entries + other.entries)

    def tensor(self, other: "DiagonalForm") -> "DiagonalForm":
        if other.field is not self.field:
            raise FieldMismatchError("mixed fields in tensor product")
        return DiagonalForm(
            self.field, tuple(a * b for a in self.entries for b in other.entries)
        )

    def negated(self) -> "DiagonalForm":
        return DiagonalForm(self.field, tuple(-a for a in self.entries))

    def scaled(self, c: FieldElement) -> "DiagonalForm":
        return DiagonalForm(self.field, tuple(c * a for a in self.entries))

    def determinant(self) -> FieldElement:
        d = self.field.one
        for a in self.entries:
            d = d * a
        return d

    def gram(self) -> "GramMatrix":
        n = self.rank
        zero = self.field.zero
        rows = tuple(
            tuple(self.entries[i] if i == j else zero for j in range(n))
            for i in range(n)
        )
        return GramMatrix(self.field, rows)

    def evaluate(self, vector) -> FieldElement:
        total = self.field.zero
        for a, x in zip(self.entries, vector):
            total = total + a * x * x
        return total

    def __eq__(self, other):
        return (
            isinstance(other, DiagonalForm)
            and self.field is other.field
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.field.name, self.entries))

    def __str__(self):
        return "<" + ", ".join(str(a) for a in self.entries) + ">"

    def __repr__(self):
        return f"DiagonalForm{self}"

    def to_json(self):
        return [str(a) for a in self.entries]


class GramMatrix:
    """Symmetric nondegenerate Gram matrix over a supported field."""

    __slots__ = ("field", "rows")

    def __init__(self, field: Field, rows):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        self.field = field
        self.rows = rows
        if n and self.determinant().is_zero():
            raise ValueError("Gram matrix is degenerate")

    @property
    def rank(self) -> int:
        return len(self.rows)

    def determinant(self) -> FieldElement:
        n = len(self.rows)
        work = [list(r) for r in self.rows]
        det = self.field.one
        for col in range(n):
            pivot = next(
                (i for i in range(col, n) if not work[i][col].is_zero()), None
            )
            if pivot is None:
                return self.field.zero
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                det = -det
            det = det * work[col][col]
            inv = work[col][col].inverse()
            for i in range(col + 1, n):
                if not work[i][col].is_zero():
                    f = work[i][col] * inv
                    work[i] = [a - f * b for a, b in zip(work[i], work[col])]
        return det

    def apply(self, v, w) -> FieldElement:
        total = self.field.zero
        for i, vi in enumerate(v):
            if vi.is_zero():
                continue
            for j, wj in enumerate(w):
                if not wj.is_zero():
                    total = total + vi * self.rows[i][j] * wj
        return total

    def orth_sum(self, other: "GramMatrix") -> "GramMatrix":
        if other.field is not self.field:
            raise FieldMismatchError("mixed fields in orthogonal sum")
        zero = self.field.zero
        n, m = self.rank, other.rank
        rows = []
        for i in range(n):
            rows.append(tuple(self.rows[i]) + (zero,) * m)
        for i in range(m):
            rows.append((zero,) * n + tuple(other.rows[i]))
        return GramMatrix(self.field, rows)

    def tensor(self, other: "GramMatrix") -> "GramMatrix":
        if other.field is not self.field:
            raise FieldMismatchError("mixed fields in tensor product")
        rows = []
        for i1 in range(self.rank):
            for i2 in range(other.rank):
                rows.append(
                    tuple(
                        self.rows[i1][j1] * other.rows[i2][j2]
                        for j1 in range(self.rank)
                        for j2 in range(other.rank)
                    )
                )
        return GramMatrix(self.field, rows)

    def __eq__(self, other):
        return (
            isinstance(other, GramMatrix)
            and self.field is other.field
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field.name, self.rows))

    def __repr__(self):
        return f"GramMatrix({[[str(e) for e in r] for r in self.rows]})"

    def to_json(self):
        return [[str(e) for e in r] for r in self.rows]


def hyperbolic_gram(field: Field, n: int) -> GramMatrix:
    """Orthogonal sum of n planes with Gram [[0,1],[1,0]]."""
    zero, one = field.zero, field.one
    rows = []
    for i in range(2 * n):
        row = [zero] * (2 * n)
        row[i + 1 if i % 2 == 0 else i - 1] = one
        rows.append(tuple(row))
    return GramMatrix(field, rows)


def combine(f, g, mode: str = "sum"):
    """Orthogonal sum (mode="sum") or tensor product (mode="tensor")."""
    if isinstance(f, DiagonalForm) and isinstance(g, DiagonalForm):
        return f.orth_sum(g) if mode == "sum" else f.tensor(g)
    fg = f.gram() if isinstance(f, DiagonalForm) else f
    gg = g.gram() if isinstance(g, DiagonalForm) else g
    return fg.orth_sum(gg) if mode == "sum" else fg.tensor(gg)


@dataclass(frozen=True)
class Diagonalization:
    """Result of diagonalize: transported Gram is diag(entries) + symplectic planes."""

    diagonal: DiagonalForm
    symplectic_rank: int
    basis: tuple[tuple[FieldElement, ...], ...]  # new basis vectors, original coords


def diagonalize(g: GramMatrix) -> Diagonalization:
    """Split g into an orthogonal sum of lines and (char 2 only) symplectic planes.

    The returned basis is verified: transporting g along it reproduces the
    diagonal entries followed by [[0,1],[1,0]] blocks.
    """
    field = g.field
    n = g.rank
    one = field.one
    vectors = [
        tuple(one if i == j else field.zero for j in range(n)) for i in range(n)
    ]
    diag_vals: list[FieldElement] = []
    diag_vecs: list[tuple[FieldElement, ...]] = []
    sympl_pairs: list[tuple[tuple[FieldElement, ...], tuple[FieldElement, ...]]] = []

    def sub_scaled(v, w, c):
        return tuple(a - c * b for a, b in zip(v, w))

    while vectors:
        pivot = next(
            (i for i, v in enumerate(vectors) if not g.apply(v, v).is_zero()), None
        )
        if pivot is not None:
            v = vectors.pop(pivot)
            norm = g.apply(v, v)
            diag_vals.append(norm)
            diag_vecs.append(v)
            inv = norm.inverse()
            vectors = [sub_scaled(w, v, g.apply(w, v) * inv) for w in vectors]
            continue
        # every remaining vector is isotropic
        pair = next(
            (
                (i, j)
                for i in range(len(vectors))
                for j in range(i + 1, len(vectors))
                if not g.apply(vectors[i], vectors[j]).is_zero()
            ),
            None,
        )
        if pair is None:
            if vectors:
                raise ValueError("Gram matrix is degenerate")
            break
        i, j = pair
        if field.characteristic != 2:
            # v + w has nonzero norm; fold back into the diagonal branch
            v = vectors[i]
            w = vectors[j]
            vectors[i] = tuple(a + b for a, b in zip(v, w))
            continue
        u = vectors[i]
        w = vectors[j]
        c = g.apply(u, w).inverse()
        w = tuple(c * a for a in w)  # now g(u, w) = 1, g(u,u) = g(w,w) = 0
        rest = [vectors[k] for k in range(len(vectors)) if k not in (i, j)]
        vectors = [
            sub_scaled(sub_scaled(z, u, g.apply(z, w)), w, g.apply(z, u))
            for z in rest
        ]
        sympl_pairs.append((u, w))

    basis = list(diag_vecs)
    for u, w in sympl_pairs:
        basis.extend((u, w))
    result = Diagonalization(
        DiagonalForm(field, diag_vals), len(sympl_pairs), tuple(basis)
    )
    _check_diagonalization(g, result)
    return result


def _check_diagonalization(g: GramMatrix, result: Diagonalization):
    field = g.field
    basis = result.basis
    r = len(result.diagonal.entries)
    s = result.symplectic_rank
    expected_rank = r + 2 * s
    assert len(basis) == expected_rank == g.rank
    for i in range(expected_rank):
        for j in range(i, expected_rank):
            val = g.apply(basis[i], basis[j])
            if i == j:
                want = result.diagonal.entries[i] if i < r else field.zero
            elif i >= r and j == i + 1 and (i - r) % 2 == 0:
                want = field.one
            else:
                want = field.zero
            assert val == want, "basis change verification failed"


# -- isotropy -------------------------------------------------------------------


def _diag_isotropic_finite(f: DiagonalForm):
    field: GaloisField = f.field
    r = f.rank
    if r <= 1:
        return None  # a nonzero unit times a square never vanishes
    a = f.entries
    if field.characteristic == 2:
        # a1 x^2 = a2 has the exact solution x = sqrt(a2/a1)
        x = field.sqrt(a[1] / a[0])
        wit = [x, field.one] + [field.zero] * (r - 2)
        return tuple(wit)
    ratio = -(a[1] / a[0])
    if field.is_square(ratio):
        x = field.sqrt(ratio)
        wit = [x, field.one] + [field.zero] * (r - 2)
        return tuple(wit)
    if r == 2:
        return None
    # rank >= 3 over a finite field is always isotropic; the value sets
    # {a1 x^2} and {-a3 - a2 y^2} each have (q+1)/2 elements, so they meet.
    target = -a[2]
    lhs = {}
    for x in field.elements():
        lhs.setdefault((a[0] * x * x).code, x)
    for y in field.elements():
        rhs = target - a[1] * y * y
        if rhs.code in lhs:
            wit = [lhs[rhs.code], y, field.one] + [field.zero] * (r - 3)
            return tuple(wit)
    raise AssertionError("finite field isotropy search failed")


def _diag_isotropic(f: DiagonalForm):
    if f.rank <= 1:
        return None
    field = f.field
    if isinstance(field, RationalFunctionField):
        return field.square_dependence(f.entries)
    return _diag_isotropic_finite(f)


def is_isotropic(f):
    """An exact witness v != 0 with f(v) = 0, or None for anisotropic forms."""
    if isinstance(f, DiagonalForm):
        wit = _diag_isotropic(f)
        if wit is not None:
            assert f.evaluate(wit).is_zero(), "unsound isotropy witness"
        return wit
    result = diagonalize(f)
    field = f.field
    r = result.diagonal.rank
    if result.symplectic_rank > 0:
        wit = result.basis[r]  # first symplectic basis vector, g(v, v) = 0
        assert f.apply(wit, wit).is_zero()
        return wit
    inner = _diag_isotropic(result.diagonal)
    if inner is None:
        return None
    n = f.rank
    wit = [field.zero] * n
    for coeff, vec in zip(inner, result.basis):
        wit = [w + coeff * b for w, b in zip(wit, vec)]
    wit = tuple(wit)
    assert f.apply(wit, wit).is_zero(), "unsound isotropy witness"
    return wit


# -- Witt decomposition ----------------------------------------------------------


@dataclass(frozen=True)
class WittDecomposition:
    """Splitting into a metabolic part of even rank and an anisotropic one."""

    anisotropic: DiagonalForm
    metabolic_rank: int

    @property
    def rank(self) -> int:
        return self.anisotropic.rank + self.metabolic_rank


def _shrink_support(field, entries, coeffs, support):
    """Rewrite two diagonal slots so the isotropy relation loses one index.

    For u = a_i c_i^2 and v = a_j c_j^2 with b = u + v != 0, the plane
    <a_i, a_j> is isometric to <b, b*u*v> via the basis (c_i e_i + c_j e_j,
    v c_i e_i - u c_j e_j), and the isotropy relation picks up coefficient 1
    on the new slot i while dropping slot j.
    """
    i, j = support[0], support[1]
    u = entries[i] * coeffs[i] * coeffs[i]
    v = entries[j] * coeffs[j] * coeffs[j]
    b = u + v
    if b.is_zero():
        return None  # the pair {i, j} is itself metabolic
    entries[i] = b
    entries[j] = b * u * v
    coeffs[i] = field.one
    return support[:1] + support[2:]


def _diag_decompose(field, entries):
    """Split a diagonal form into metabolic pairs and an anisotropic kernel.

    Only certified isometries of diagonal forms are used: square scaling of a
    slot, and the two-slot rewrite of _shrink_support.  Each round finds an
    exact isotropy relation sum c_i^2 a_i = 0, shrinks its support to two
    slots, and drops that metabolic pair.
    """
    entries = list(entries)
    metabolic = 0
    while len(entries) >= 2:
        form = DiagonalForm(field, tuple(entries))
        witness = _diag_isotropic(form)
        if witness is None:
            break
        coeffs = list(witness)
        support = [k for k in range(len(entries)) if not coeffs[k].is_zero()]
        while len(support) > 2:
            shrunk = _shrink_support(field, entries, coeffs, support)
            if shrunk is None:
                break  # leading pair already metabolic; drop it below
            support = shrunk
        i, j = support[0], support[1]
        check = entries[i] * coeffs[i] ** 2 + entries[j] * coeffs[j] ** 2
        assert check.is_zero(), "metabolic pair certificate failed"
        del entries[j], entries[i]
        metabolic += 2
    return entries, metabolic


def witt_decompose(f) -> WittDecomposition:
    """Split off metabolic planes until the remainder is anisotropic."""
    field = f.field
    if isinstance(f, DiagonalForm):
        entries = list(f.entries)
        metabolic = 0
    else:
        result = diagonalize(f)
        entries = list(result.diagonal.entries)
        metabolic = 2 * result.symplectic_rank
    rest, split = _diag_decompose(field, entries)
    metabolic += split
    anis = DiagonalForm(field, sorted(rest, key=lambda a: a.sort_key()))
    deco = WittDecomposition(anis, metabolic)
    assert deco.rank == f.rank and metabolic % 2 == 0
    assert _diag_isotropic(deco.anisotropic) is None
    return deco


# -- Pfister forms ----------------------------------------------------------------


def pfister(field: Field, slots) -> DiagonalForm:
    """Tensor product of the binary forms <1, a_i>; entries are subset products.

    In characteristic 2 this is the bilinear Pfister form <<a_1, ..., a_n>>
    (signs collapse); rank 2^n.
    """
    slots = tuple(slots)
    if any(a.is_zero() for a in slots):
        raise ValueError("Pfister slots must be nonzero")
    entries = [field.one]
    for a in slots:
        entries = entries + [e * a for e in entries]
    return DiagonalForm(field, entries)


def pfister_pure(field: Field, slots) -> DiagonalForm:
    """The pure part: drop the <1> slot of the full Pfister form; rank 2^n - 1."""
    slots = tuple(slots)
    if not slots:
        raise ValueError("the pure part of an empty Pfister form is empty")
    return DiagonalForm(field, pfister(field, slots).entries[1:])


# -- representation ---------------------------------------------------------------


def represents(f: DiagonalForm, b: FieldElement):
    """A witness x with sum_i a_i x_i^2 = b, or None."""
    if b.is_zero():
        raise ValueError("use is_isotropic for the zero value")
    field = f.field
    if isinstance(field, RationalFunctionField):
        return field.solve_square_combination(f.entries, b)
    assert isinstance(field, GaloisField)
    a = f.entries
    r = f.rank
    if r == 0:
        return None
    if field.characteristic == 2:
        x = field.sqrt(b / a[0])
        wit = (x,) + (field.zero,) * (r - 1)
        assert f.evaluate(wit) == b
        return wit
    if r == 1:
        ratio = b / a[0]
        if not field.is_square(ratio):
            return None
        wit = (field.sqrt(ratio),)
        assert f.evaluate(wit) == b
        return wit
    # rank >= 2 nondegenerate forms over finite fields represent every unit
    for x in field.elements():
        rest = b - a[0] * x * x
        ratio = rest / a[1]
        if field.is_square(ratio):
            wit = (x, field.sqrt(ratio)) + (field.zero,) * (r - 2)
            assert f.evaluate(wit) == b
            return wit
    raise AssertionError("finite field representation search failed")


def all_diagonal_forms(field: GaloisField, rank: int):
    """Iterate over all diagonal forms of the given rank, entries in F_q^x."""
    units = list(field.units())
    for combo in itertools.product(units, repeat=rank):
        yield DiagonalForm(field, combo)
