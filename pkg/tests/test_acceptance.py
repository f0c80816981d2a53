"""Acceptance suite: one test per criterion, each printing its pass/fail line.

Everything here is exact arithmetic (zero tolerance).  Oracles are
independent of the code paths they check: isotropy and Witt indices over
finite fields are recomputed by exhaustive vector and subspace enumeration,
Witt-class counts by enumerating all small diagonal forms, and chain
witnesses by breadth-first search over relation instances.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.
"""

import itertools
import random
import time

import pytest

from mwkt import (
    DiagonalForm,
    GWElement,
    IFiltClass,
    MilnorSymbolSum,
    Verdict,
    chain_equiv_search,
    flatten,
    gw_equal,
    in_ideal_power,
    is_isotropic,
    kato_equal,
    make_field,
    milnor_equal,
    normalize,
    parse,
    parse_element,
    pfister_decompose,
    phi_neg,
    print_expr,
    s_n,
    theta,
    witt_class,
    witt_decompose,
    witt_equal,
)
from mwkt.expressions import ETA, Bracket, IntLit, Neg, Power, Product, Sum
from mwkt.expressions import hyperbolic
from mwkt.suites import (
    SUITES,
    random_expression,
    random_homogeneous_monomial,
    random_ideal_member,
    run_suite,
)

ALL_FIELD_SPECS = (
    "GF(3)", "GF(5)", "GF(7)", "GF(9)",
    "GF(2)", "GF(4)", "GF(8)",
    "GF(2)(t)", "GF(4)(t)", "GF(2)(t,u)",
)

CASES = 500
SEED = 2024
BOUND = 2


def report(criterion: str, ok: bool, detail: str = ""):
    line = f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


# -- 1. relation/lemma suite ------------------------------------------------------


def test_criterion_1_relation_and_lemma_suite():
    start = time.time()
    suites = ("lemma1", "lemma2", "gw", "kw_char2")
    failures = []
    ran = 0
    for spec in ALL_FIELD_SPECS:
        field = make_field(spec)
        for suite in suites:
            rep = run_suite(suite, field, seed=SEED, cases=CASES,
                            degree_bound=BOUND)
            for res in rep.results:
                if res.skipped:
                    continue
                ran += 1
                if not res.ok:
                    failures.append((spec, suite, res.identity,
                                     res.failures[0].to_json()))
    elapsed = time.time() - start
    detail = f"{ran} identity/field pairs x {CASES} cases, {elapsed:.0f}s"
    report("1 relation/lemma suite", not failures and elapsed < 300.0,
           detail if not failures else f"{detail}; first failure {failures[:1]}")


# -- 2. isotropy/Witt-decomposition oracle ----------------------------------------


def _vectors(q, r):
    return itertools.product(range(q), repeat=r)


def _oracle_isotropy_exists(field, codes):
    sq = [field.mul_code(x, x) for x in range(field.q)]
    for vec in _vectors(field.q, len(codes)):
        if not any(vec):
            continue
        total = 0
        for a, x in zip(codes, vec):
            total = field.add_code(total, field.mul_code(a, sq[x]))
        if total == 0:
            return True
    return False


def _oracle_isotropic_lines(field, codes):
    """Isotropic vectors with leading coordinate 1, one per line."""
    q, r = field.q, len(codes)
    sq = [field.mul_code(x, x) for x in range(q)]
    lines = []
    for lead in range(r):
        for rest in _vectors(q, r - lead - 1):
            vec = (0,) * lead + (1,) + rest
            total = 0
            for a, x in zip(codes, vec):
                total = field.add_code(total, field.mul_code(a, sq[x]))
            if total == 0:
                lines.append(vec)
    return lines


def _oracle_witt_index(field, codes):
    """Largest dimension of a subspace on which the form vanishes identically."""
    lines = _oracle_isotropic_lines(field, codes)
    if not lines:
        return 0
    if len(codes) < 4:
        return 1  # rank <= 3 caps the index at 1
    def pairing(v, w):
        total = 0
        for a, x, y in zip(codes, v, w):
            total = field.add_code(
                total, field.mul_code(a, field.mul_code(x, y))
            )
        return total
    for v, w in itertools.combinations(lines, 2):
        if pairing(v, w) == 0:
            return 2
    return 1


def test_criterion_2_isotropy_and_decomposition_oracle():
    start = time.time()
    checked = 0
    for q in (2, 3, 4, 5, 7, 9):
        field = make_field(f"GF({q})")
        oracle_cache = {}
        for rank in range(1, 5):
            for codes in itertools.product(range(1, q), repeat=rank):
                entries = tuple(field.element(c) for c in codes)
                form = DiagonalForm(field, entries)
                key = tuple(sorted(codes))
                if key not in oracle_cache:
                    oracle_cache[key] = (
                        _oracle_isotropy_exists(field, key),
                        _oracle_witt_index(field, key),
                    )
                oracle_iso, oracle_index = oracle_cache[key]
                witness = is_isotropic(form)
                assert (witness is not None) == oracle_iso, (q, codes)
                if witness is not None:
                    assert form.evaluate(witness).is_zero()
                deco = witt_decompose(form)
                assert deco.metabolic_rank == 2 * oracle_index, (q, codes)
                assert deco.anisotropic.rank == rank - 2 * oracle_index
                assert is_isotropic(deco.anisotropic) is None
                checked += 1
    report("2 isotropy/Witt oracle", True,
           f"{checked} forms, {time.time() - start:.0f}s")


# -- 3. Witt-class counting ---------------------------------------------------------


def _distinct_witt_classes(field, max_rank):
    units = list(field.units())
    classes = [witt_class(DiagonalForm(field, ()))]
    for r in range(1, max_rank + 1):
        for combo in itertools.product(units, repeat=r):
            classes.append(witt_class(DiagonalForm(field, combo)))
    distinct = []
    for c in classes:
        if not any(witt_equal(c, d) for d in distinct):
            distinct.append(c)
    return distinct


def test_criterion_3_witt_class_counting():
    expected = {"GF(3)": 4, "GF(5)": 4, "GF(2)": 2, "GF(4)": 2, "GF(8)": 2}
    counts = {}
    for spec, want in expected.items():
        field = make_field(spec)
        distinct = _distinct_witt_classes(field, 3)
        counts[spec] = len(distinct)
        assert len(distinct) == want, (spec, len(distinct))
        # phi in degrees -1, -2, -3 takes exactly |W(F)| distinct values
        for n in (1, 2, 3):
            images = [normalize(phi_neg(w, n, field), field, -n).payload
                      for w in distinct]
            for i, a in enumerate(images):
                for b in images[:i]:
                    assert not witt_equal(a, b)
            assert len(images) == want
    report("3 Witt-class counting", True, str(counts))


# -- 4. theta well-definedness -------------------------------------------------------


def _relation_instances(field, rng, bound):
    one = field.one
    a = field.random_unit(rng, degree_bound=bound)
    b = field.random_unit(rng, degree_bound=bound)
    out = []
    if a != one:
        out.append(("steinberg", Product((Bracket(a), Bracket(one - a)))))
    out.append((
        "product-bracket",
        Sum((
            Bracket(a * b),
            Neg(Bracket(a)),
            Neg(Bracket(b)),
            Neg(Product((ETA, Bracket(a), Bracket(b)))),
        )),
    ))
    out.append((
        "eta-commutes",
        Sum((Product((ETA, Bracket(a))), Neg(Product((Bracket(a), ETA))))),
    ))
    out.append(("eta-h", Product((ETA, hyperbolic(field)))))
    return out


def test_criterion_4_theta_well_defined():
    start = time.time()
    total = 0
    for spec in ("GF(2)(t)", "GF(2)(t,u)"):
        field = make_field(spec)
        rng = random.Random(f"{SEED}|theta|{spec}")
        per_relation = {}
        while min(per_relation.values(), default=0) < 200 or len(per_relation) < 4:
            for name, rel in _relation_instances(field, rng, BOUND):
                if per_relation.get(name, 0) >= 200:
                    continue
                mono = random_homogeneous_monomial(field, rng, BOUND)
                image = theta(Product((rel, mono)), field)
                assert image.is_zero(), (spec, name)
                per_relation[name] = per_relation.get(name, 0) + 1
                total += 1
    report("4 theta well-definedness", True,
           f"{total} relation multiples, {time.time() - start:.0f}s")


# -- 5. theta surjectivity round trip -------------------------------------------------


def test_criterion_5_theta_surjectivity():
    start = time.time()
    field = make_field("GF(2)(t,u)")
    rng = random.Random(f"{SEED}|surjectivity")
    done = 0
    for n in (1, 2):
        for _ in range(200):
            rank = rng.choice((2, 4))
            cls = IFiltClass(
                random_ideal_member(field, n, rng, BOUND, rank=rank), n
            )
            tuples = pfister_decompose(cls)
            terms = [
                Product(tuple(Bracket(a) for a in tup)) for tup in tuples
            ]
            if terms:
                expr = Sum(tuple(terms)) if len(terms) > 1 else terms[0]
            else:
                expr = IntLit(0)
            image = theta(expr, field, n)
            assert witt_equal(image.cls.witt, cls.witt), (n, tuples)
            done += 1
    report("5 theta surjectivity", True, f"{done} classes, {time.time() - start:.0f}s")


# -- 6. the Kato route ----------------------------------------------------------------


def _irreducible_univariate_units(field, count):
    """Units of GF(2)(t) given by distinct monic irreducible polynomials."""
    from mwkt.polynomials import u_divmod

    K = field.base
    found = []
    degree = 1
    while len(found) < count:
        for mask in range(1 << degree):
            poly = {(degree,): 1}
            for i in range(degree):
                if mask >> i & 1:
                    poly[(i,)] = 1
            # irreducible iff no monic factor of degree <= degree/2 divides it
            reducible = False
            for d in range(1, degree // 2 + 1):
                for m2 in range(1 << d):
                    div = {(d,): 1}
                    for i in range(d):
                        if m2 >> i & 1:
                            div[(i,)] = 1
                    if not u_divmod(K, poly, div)[1]:
                        reducible = True
                        break
                if reducible:
                    break
            if not reducible:
                found.append(poly)
                if len(found) == count:
                    break
        degree += 1
    one = {(0,): 1}
    return [field.element_from_polys(p, one) for p in found]


def test_criterion_6_kato_route():
    start = time.time()
    field = make_field("GF(2)(t)")
    units = _irreducible_univariate_units(field, 50)
    classes = [s_n(field, [u]) for u in units]
    for i in range(len(classes)):
        for j in range(i):
            assert not classes[i].equal_mod_next(classes[j]), (i, j)
    rng = random.Random(f"{SEED}|kato")
    zero2 = MilnorSymbolSum.zero(field, 2)
    for _ in range(50):
        a = field.random_unit(rng, degree_bound=BOUND)
        if a == field.one:
            continue
        steinberg = MilnorSymbolSum.symbol(field, (a, field.one - a))
        assert milnor_equal(steinberg, zero2) is Verdict.EQUAL
        assert kato_equal(steinberg, zero2)
    for _ in range(50):
        a = field.random_unit(rng, degree_bound=BOUND)
        b = field.random_unit(rng, degree_bound=BOUND)
        sym = MilnorSymbolSum.symbol(field, (a, b))
        assert kato_equal(sym, zero2)
    report("6 Kato route", True,
           f"50 pairwise-distinct degree-1 classes, {time.time() - start:.0f}s")


# -- 7. vanishing above the square dimension -------------------------------------------


def test_criterion_7_vanishing():
    start = time.time()
    for spec, arity in (("GF(2)(t)", 2), ("GF(2)(t,u)", 3)):
        field = make_field(spec)
        rng = random.Random(f"{SEED}|vanishing|{spec}")
        for _ in range(100):
            units = [field.random_unit(rng, degree_bound=BOUND)
                     for _ in range(arity)]
            expr = Product(tuple(Bracket(u) for u in units))
            image = theta(expr, field)
            assert image.is_zero(), (spec, [str(u) for u in units])
            assert image.degree == arity
    report("7 vanishing bound", True, f"{time.time() - start:.0f}s")


# -- 8. cartesian squares ----------------------------------------------------------------


def _random_gw_pair(field, rng):
    x = GWElement(field, {})
    for _ in range(rng.randint(1, 3)):
        u = field.random_unit(rng, degree_bound=BOUND)
        x = x + GWElement(field, {u: rng.choice([-1, 1, 2])})
    if rng.random() < 0.5:
        from mwkt.suites import random_relation_zero

        y = x + random_relation_zero(field, rng, BOUND)
    else:
        y = GWElement(field, {})
        for _ in range(rng.randint(1, 3)):
            u = field.random_unit(rng, degree_bound=BOUND)
            y = y + GWElement(field, {u: rng.choice([-1, 1, 2])})
    return x, y


def test_criterion_8_cartesian_squares():
    start = time.time()
    for spec in ALL_FIELD_SPECS:
        field = make_field(spec)
        rng = random.Random(f"{SEED}|cartesian|{spec}")
        for _ in range(CASES):
            x, y = _random_gw_pair(field, rng)
            lhs = gw_equal(x, y)
            rhs = x.rank() == y.rank() and witt_equal(x.witt(), y.witt())
            assert lhs == rhs
    # chain-search cross-check over the small odd prime fields
    checked_pairs = 0
    for spec in ("GF(3)", "GF(5)"):
        field = make_field(spec)
        units = list(field.units())
        tuples = set()
        for r in (2, 3):
            for combo in itertools.product(units, repeat=r):
                tuples.add(tuple(sorted(combo, key=lambda a: a.sort_key())))
        tuples = sorted(tuples, key=lambda t: [a.sort_key() for a in t])
        def as_gw(entries):
            out = GWElement(field, {})
            for a in entries:
                out = out + GWElement.unit(field, a)
            return out
        for t1 in tuples:
            for t2 in tuples:
                if len(t1) != len(t2):
                    continue
                path = chain_equiv_search(field, t1, t2, depth=6)
                if gw_equal(as_gw(t1), as_gw(t2)):
                    assert path is not None, (spec, t1, t2)
                    for step in path:
                        assert gw_equal(as_gw(step.before), as_gw(step.after))
                else:
                    assert path is None
                checked_pairs += 1
    report("8 cartesian squares", True,
           f"{CASES}/field equivalences, {checked_pairs} chain pairs, "
           f"{time.time() - start:.0f}s")


# -- 9. fields where every unit is a square ------------------------------------------------


def test_criterion_9_every_unit_square():
    field = make_field("GF(4)")
    # negative degrees: exactly two values, as W(GF(4)) = Z/2
    payloads = []
    for n in (1, 2, 3):
        for u in field.units():
            expr = Product((Power(ETA, n), parse(f"<{u}>", field)))
            payloads.append(normalize(expr, field, -n).payload)
        payloads.append(normalize(IntLit(0), field, -n).payload)
    distinct = []
    for p in payloads:
        if not any(witt_equal(p, d) for d in distinct):
            distinct.append(p)
    assert len(distinct) == 2, len(distinct)
    # 2*eta normalizes to zero
    two_eta = normalize(Product((IntLit(2), ETA)), field, -1)
    assert two_eta.is_zero() is Verdict.EQUAL
    # degree >= 0: eta[u] vanishes, so normalization factors through symbols
    for u in field.units():
        c = normalize(Product((ETA, Bracket(u))), field, 0)
        assert c.payload.rank == 0 and c.payload.witt.is_zero()
    for u in field.units():
        for v in field.units():
            verdict = normalize(
                Sum((Bracket(u * v), Neg(Bracket(u)), Neg(Bracket(v)))), field, 1
            ).is_zero()
            assert verdict is Verdict.EQUAL
    report("9 every-unit-a-square", True, "W(GF(4)) has 2 values; 2 eta = 0")


# -- 10. round trips and determinism ---------------------------------------------------------


def test_criterion_10_round_trips_and_determinism():
    rng = random.Random(f"{SEED}|roundtrip")
    fields = [make_field(s) for s in ("GF(2)(t)", "GF(9)", "GF(2)(t,u)")]
    done = 0
    while done < 200:
        field = rng.choice(fields)
        expr = random_expression(field, rng, BOUND, depth=3)
        assert parse(print_expr(expr), field) == flatten(expr)
        done += 1
    rep1 = run_suite("gw", make_field("GF(2)(t)"), seed=7, cases=15,
                     degree_bound=BOUND)
    rep2 = run_suite("gw", make_field("GF(2)(t)"), seed=7, cases=15,
                     degree_bound=BOUND)
    import json

    assert json.dumps(rep1.to_json(), sort_keys=True) == json.dumps(
        rep2.to_json(), sort_keys=True
    )
    report("10 round trips and determinism", True, "200 expressions")
