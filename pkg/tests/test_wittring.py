"""Grothendieck-Witt and Witt ring decision procedures."""

import itertools
import random

import pytest

from mwkt import (
    DiagonalForm,
    GWElement,
    IFiltClass,
    MembershipError,
    chain_equiv_search,
    gw_canonical,
    gw_equal,
    in_ideal_power,
    make_field,
    parse_element,
    pfister,
    pfister_decompose,
    s_n,
    witt_class,
    witt_equal,
    witt_is_zero,
)


def gw(field, *units):
    out = GWElement(field, {})
    for u in units:
        out = out + GWElement.unit(field, parse_element(field, u))
    return out


def wc(field, *texts):
    return witt_class(DiagonalForm(field, [parse_element(field, t) for t in texts]))


class TestGWArithmetic:
    def test_generator_product(self, f2tu):
        t, u = parse_element(f2tu, "t"), parse_element(f2tu, "u")
        prod = GWElement.unit(f2tu, t) * GWElement.unit(f2tu, u)
        assert prod.terms == {t * u: 1}

    def test_additive_inverse(self, gf5):
        x = gw(gf5, "1")
        assert (x + (-x)).terms == {}

    def test_distributivity(self, f2tu):
        a, b, c = (parse_element(f2tu, s) for s in ("t", "u", "t+u"))
        lhs = (GWElement.unit(f2tu, a) + GWElement.unit(f2tu, b)) * GWElement.unit(f2tu, c)
        rhs = GWElement.unit(f2tu, a * c) + GWElement.unit(f2tu, b * c)
        assert lhs.terms == rhs.terms

    def test_zero_generator_rejected(self, gf5):
        with pytest.raises(ValueError):
            GWElement.unit(gf5, gf5.zero)


class TestGWCanonical:
    def test_hyperbolic_gf5(self, gf5):
        x = GWElement.unit(gf5, gf5.one) + GWElement.unit(gf5, -gf5.one)
        c = gw_canonical(x)
        assert c.rank == 2
        assert c.witt.is_zero()

    def test_two_ones_gf2(self, gf2):
        c = gw_canonical(gw(gf2, "1", "1"))
        assert c.rank == 2 and c.witt.is_zero()

    def test_single_generator_gf7(self, gf7):
        c = gw_canonical(gw(gf7, "2"))
        assert c.rank == 1
        assert witt_equal(c.witt, wc(gf7, "2"))

    def test_gw_equal_iff_rank_and_witt(self, gf3, gf5, f2t):
        rng = random.Random(17)
        for field in (gf3, gf5, f2t):
            for _ in range(40):
                x = GWElement(field, {field.random_unit(rng, degree_bound=2):
                                      rng.choice([-2, -1, 1, 2])})
                y = GWElement(field, {field.random_unit(rng, degree_bound=2):
                                      rng.choice([-2, -1, 1, 2])})
                lhs = gw_equal(x, y)
                rhs = (x.rank() == y.rank()) and witt_equal(x.witt(), y.witt())
                assert lhs == rhs


class TestWittClasses:
    def test_doubled_unit_dies_char2(self, f2t):
        assert witt_equal(wc(f2t, "t", "t"), wc(f2t))

    def test_gf3_two_ones_nonzero(self, gf3):
        assert not witt_is_zero(wc(gf3, "1", "1"))

    def test_reflexive(self, f2tu):
        w = wc(f2tu, "t", "u")
        assert witt_equal(w, w)

    def test_semantic_equality_across_representatives(self, gf3):
        # <1,1,1> and <2> share a class over GF(3)
        assert witt_equal(wc(gf3, "1", "1", "1"), wc(gf3, "2"))

    def test_witt_ring_ops(self, f2tu):
        a = wc(f2tu, "t")
        b = wc(f2tu, "u")
        assert witt_equal(a * b, wc(f2tu, "t u"))
        assert witt_is_zero(a + a)  # characteristic 2: every class is 2-torsion

    def test_all_witt_classes_gf3(self, gf3):
        # oracle: enumerate every diagonal form of rank <= 3
        units = list(gf3.units())
        classes = [wc(gf3)]
        for r in (1, 2, 3):
            for combo in itertools.product(units, repeat=r):
                classes.append(witt_class(DiagonalForm(gf3, combo)))
        distinct = []
        for c in classes:
            if not any(witt_equal(c, d) for d in distinct):
                distinct.append(c)
        assert len(distinct) == 4


class TestIdealFiltration:
    def test_nonpositive_always(self, gf3):
        assert in_ideal_power(wc(gf3, "1"), 0)
        assert in_ideal_power(wc(gf3, "1"), -3)

    def test_pfister_in_I1_not_I2(self, f2t):
        t = parse_element(f2t, "t")
        w = witt_class(pfister(f2t, [t]))
        assert in_ideal_power(w, 1)
        assert not in_ideal_power(w, 2)

    def test_sum_of_three_pfisters_in_I2(self, f2tu):
        t, u = parse_element(f2tu, "t"), parse_element(f2tu, "u")
        w = (
            witt_class(pfister(f2tu, [t]))
            + witt_class(pfister(f2tu, [u]))
            + witt_class(pfister(f2tu, [t * u]))
        )
        assert in_ideal_power(w, 2)

    def test_odd_rank_not_in_I1(self, gf7, f2tu):
        assert not in_ideal_power(wc(gf7, "1"), 1)
        assert not in_ideal_power(wc(f2tu, "t"), 1)

    def test_membership_error_reported(self, f2t):
        with pytest.raises(MembershipError):
            IFiltClass(wc(f2t, "t"), 1)

    def test_finite_field_I2_vanishes(self, gf3, gf5, gf7, gf9):
        rng = random.Random(8)
        for field in (gf3, gf5, gf7, gf9):
            for _ in range(30):
                entries = [field.random_unit(rng) for _ in range(4)]
                w = witt_class(DiagonalForm(field, entries))
                assert in_ideal_power(w, 2) == witt_is_zero(w)

    def test_discriminant_rule_matches_pfister_arithmetic(self, f2tu):
        # independent route: w in I^2 iff the residual 1-fold Pfister form
        # <<product of entries>> vanishes, by <<u>> + <<v>> = <<uv>> mod I^2
        rng = random.Random(44)
        for _ in range(30):
            entries = [f2tu.random_unit(rng, degree_bound=2) for _ in range(4)]
            w = witt_class(DiagonalForm(f2tu, entries))
            det = f2tu.one
            for a in entries:
                det = det * a
            acc = wc(f2tu)
            for a in entries:
                acc = acc + witt_class(pfister(f2tu, [a]))
            residual = acc + witt_class(pfister(f2tu, [det]))
            assert in_ideal_power(residual, 2)
            assert in_ideal_power(w, 2) == witt_is_zero(witt_class(pfister(f2tu, [det])))


class TestMilnorMap:
    def test_s1_image(self, f2t):
        t = parse_element(f2t, "t")
        cls = s_n(f2t, [t])
        assert cls.degree == 1
        assert witt_equal(cls.witt, witt_class(pfister(f2t, [t])))

    def test_s1_square_class_invariance(self, f2t):
        t = parse_element(f2t, "t")
        assert s_n(f2t, [t**3]).equal_mod_next(s_n(f2t, [t]))

    def test_steinberg_dies(self, f2tu):
        rng = random.Random(6)
        for _ in range(20):
            a = f2tu.random_unit(rng, degree_bound=2)
            if a == f2tu.one:
                continue
            cls = s_n(f2tu, [a, f2tu.one - a])
            assert cls.is_zero()

    def test_multiplicativity_mod_next(self, f2tu):
        rng = random.Random(61)
        for _ in range(10):
            a = f2tu.random_unit(rng, degree_bound=1)
            b = f2tu.random_unit(rng, degree_bound=1)
            prod = s_n(f2tu, [a]) * s_n(f2tu, [b])
            assert prod.equal_mod_next(s_n(f2tu, [a, b]))


class TestPfisterDecompose:
    def test_degree1_example(self, f2tu):
        t, u = parse_element(f2tu, "t"), parse_element(f2tu, "u")
        cls = IFiltClass(wc(f2tu, "t", "u"), 1)
        tuples = pfister_decompose(cls)
        total = wc(f2tu)
        for tup in tuples:
            total = total + witt_class(pfister(f2tu, tup))
        assert witt_equal(total, cls.witt)

    def test_degree2_example(self, f2tu):
        t, u = parse_element(f2tu, "t"), parse_element(f2tu, "u")
        w = (
            witt_class(pfister(f2tu, [t]))
            + witt_class(pfister(f2tu, [u]))
            + witt_class(pfister(f2tu, [t * u]))
        )
        tuples = pfister_decompose(IFiltClass(w, 2))
        assert len(tuples) == 1
        assert set(tuples[0]) == {t, u}

    def test_zero_class(self, f2t):
        assert pfister_decompose(IFiltClass(wc(f2t), 2)) == []

    def test_randomized_reconstruction(self, f2t, f2tu):
        rng = random.Random(10)
        for field in (f2t, f2tu):
            for _ in range(15):
                entries = [field.random_unit(rng, degree_bound=2) for _ in range(4)]
                cls = IFiltClass(witt_class(DiagonalForm(field, entries)), 1)
                tuples = pfister_decompose(cls)
                total = witt_class(DiagonalForm(field, []))
                for tup in tuples:
                    total = total + witt_class(pfister(field, tup))
                assert witt_equal(total, cls.witt)

    def test_degree3_rejected(self, f2tu):
        with pytest.raises(ValueError):
            pfister_decompose(IFiltClass(wc(f2tu), 3))


class TestChainEquivalence:
    def test_identity_path(self, gf5):
        ones = (gf5.one, gf5.one)
        assert chain_equiv_search(gf5, ones, ones) == []

    def test_gf5_example_single_gw3_step(self, gf5):
        one, two = gf5.one, gf5.from_int(2)
        path = chain_equiv_search(gf5, (one, one), (two, two))
        assert path is not None and len(path) == 1
        assert path[0].relation == "GW3"

    def test_distinct_classes_give_none(self, gf3):
        one, two = gf3.one, gf3.from_int(2)
        assert chain_equiv_search(gf3, (one, one), (one, two)) is None

    def test_exhaustive_small_tuples(self, gf3, gf5):
        # every GW-equal pair of rank-2 tuples is connected within the budget
        for field in (gf3, gf5):
            units = list(field.units())
            tuples = list(itertools.product(units, repeat=2))
            for t1 in tuples:
                for t2 in tuples:
                    x = GWElement(field, {})
                    y = GWElement(field, {})
                    for a in t1:
                        x = x + GWElement.unit(field, a)
                    for a in t2:
                        y = y + GWElement.unit(field, a)
                    path = chain_equiv_search(field, t1, t2, depth=6)
                    if gw_equal(x, y):
                        assert path is not None
                    else:
                        assert path is None
