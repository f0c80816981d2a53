"""Field construction, exact arithmetic, and square-theory decision procedures."""

import random

import pytest

from mwkt import (
    FieldMismatchError,
    FieldSpec,
    ParseError,
    make_field,
    parse_element,
)
from mwkt.galois import default_modulus, is_prime


class TestMakeField:
    def test_prime_field(self, gf7):
        assert gf7.order == 7
        assert gf7.characteristic == 7
        assert len(list(gf7.elements())) == 7

    def test_gf4_modulus_is_the_unique_irreducible(self, gf4):
        # oracle: enumerate all monic quadratics over F_2 and keep the irreducibles
        irreducible = []
        for c0 in (0, 1):
            for c1 in (0, 1):
                has_root = any((x * x + c1 * x + c0) % 2 == 0 for x in (0, 1))
                if not has_root:
                    irreducible.append((c0, c1, 1))
        assert irreducible == [(1, 1, 1)]
        assert gf4.modulus == (1, 1, 1)

    def test_non_prime_power_rejected(self):
        with pytest.raises(ValueError):
            make_field("GF(6)")

    def test_bad_characteristic_rejected(self):
        with pytest.raises(ValueError):
            make_field("GF(6^2)")

    def test_reducible_modulus_rejected(self):
        from mwkt.galois import GaloisField

        with pytest.raises(ValueError, match="reducible"):
            GaloisField(2, 2, modulus=(0, 0, 1))  # x^2 = x*x

    def test_function_field_odd_characteristic_rejected(self):
        with pytest.raises(ValueError, match="characteristic 2"):
            make_field("GF(3)(t)")

    def test_too_many_variables_rejected(self):
        with pytest.raises(ValueError):
            make_field("GF(2)(t,u,v)")

    def test_spec_string_round_trip(self):
        spec = FieldSpec.from_string("GF(2^3)(t,u)")
        assert spec.kind == "rational-function"
        assert (spec.p, spec.k, spec.variables) == (2, 3, ("t", "u"))

    def test_field_handles_are_cached(self):
        assert make_field("GF(9)") is make_field("GF(3^2)")

    def test_bad_spec_string(self):
        with pytest.raises(ParseError):
            make_field("GF[7]")

    def test_default_modulus_deterministic(self):
        assert default_modulus(2, 2) == (1, 1, 1)
        assert default_modulus(3, 2) == (1, 0, 1)  # x^2 + 1 over F_3

    def test_is_prime(self):
        assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


class TestGaloisArithmetic:
    def test_basic_products(self, gf5):
        assert gf5.from_int(2) * gf5.from_int(3) == gf5.one

    def test_field_axioms_randomized(self):
        rng = random.Random(11)
        for spec in ("GF(2)", "GF(3)", "GF(4)", "GF(9)", "GF(7)", "GF(8)"):
            field = make_field(spec)
            for _ in range(80):
                a = field.element(rng.randrange(field.order))
                b = field.element(rng.randrange(field.order))
                c = field.element(rng.randrange(field.order))
                assert (a + b) + c == a + (b + c)
                assert a * (b + c) == a * b + a * c
                assert (a * b) * c == a * (b * c)
                assert a + (-a) == field.zero
                if not a.is_zero():
                    assert a * a.inverse() == field.one

    def test_division_by_zero(self, gf5):
        with pytest.raises(ZeroDivisionError):
            gf5.one / gf5.zero

    def test_mixed_fields_rejected(self, gf5, gf7):
        with pytest.raises(FieldMismatchError):
            gf5.one + gf7.one

    def test_frobenius_stability_char2(self, gf4, gf9):
        for e in gf4.elements():
            assert gf4.is_square(e)
            assert gf4.sqrt(e) ** 2 == e
        squares = {(e * e).code for e in gf9.elements()}
        for e in gf9.elements():
            assert gf9.is_square(e) == (e.code in squares)

    def test_gf5_squares_by_enumeration(self, gf5):
        squares = sorted({(e * e).code for e in gf5.elements()})
        assert squares == [0, 1, 4]
        assert not gf5.is_square(gf5.from_int(2))
        assert gf5.is_square(gf5.from_int(4))

    def test_sqrt_on_nonsquare_raises(self, gf3):
        with pytest.raises(ValueError):
            gf3.sqrt(gf3.from_int(2))

    def test_sqrt_round_trip_odd(self, gf7, gf9):
        for field in (gf7, gf9):
            for e in field.units():
                if field.is_square(e):
                    assert field.sqrt(e) ** 2 == e


class TestRationalFunctionField:
    def test_char2_addition(self, f2t):
        t1 = parse_element(f2t, "t+1")
        assert (t1 + t1).is_zero()

    def test_inverse_reduced(self, f2t):
        e = parse_element(f2t, "t^2+t").inverse()
        assert str(e) == "(1)/(t^2+t)"

    def test_canonical_reduction(self, f2t):
        a = parse_element(f2t, "(t^2+t)/(t+1)")  # = t(t+1)/(t+1) = t
        assert a == parse_element(f2t, "t")

    def test_monic_denominator(self, f4t):
        # denominator x*t + x reduces to monic t + 1
        e = parse_element(f4t, "1/(x t + x)")
        assert str(e.field.base) == "GF(4)"
        from mwkt.polynomials import p_lc

        assert p_lc(e.den) == 1

    def test_structural_equality_is_field_equality(self, f2tu):
        a = parse_element(f2tu, "(t u + t)/(u^2+1)")  # t(u+1)/(u+1)^2 = t/(u+1)
        b = parse_element(f2tu, "t/(u+1)")
        assert a == b and hash(a) == hash(b)

    def test_field_axioms_randomized(self, f2t, f2tu, f4t):
        rng = random.Random(5)
        for field in (f2t, f2tu, f4t):
            for _ in range(25):
                a = field.random_unit(rng, degree_bound=2)
                b = field.random_unit(rng, degree_bound=2)
                c = field.random_unit(rng, degree_bound=2)
                assert (a + b) + c == a + (b + c)
                assert a * (b + c) == a * b + a * c
                assert (a * b) * c == a * (b * c)
                assert (a + b) + b == a
                assert a * a.inverse() == field.one

    def test_square_detection(self, f2t):
        e = parse_element(f2t, "t^2+1")
        assert f2t.is_square(e)
        assert f2t.sqrt(e) == parse_element(f2t, "t+1")
        assert not f2t.is_square(parse_element(f2t, "t"))
        with pytest.raises(ValueError):
            f2t.sqrt(parse_element(f2t, "t"))

    def test_square_of_fraction(self, f2tu):
        rng = random.Random(9)
        for _ in range(20):
            a = f2tu.random_unit(rng, degree_bound=2)
            sq = a * a
            assert f2tu.is_square(sq)
            assert f2tu.sqrt(sq) ** 2 == sq


class TestFrobeniusCoords:
    def test_example_t3_plus_t(self, f2t):
        a = parse_element(f2t, "t^3+t")
        coords = f2t.frobenius_coords(a)
        assert coords[(0,)].is_zero()
        assert coords[(1,)] == parse_element(f2t, "t+1")

    def test_example_monomial_tu(self, f2tu):
        coords = f2tu.frobenius_coords(parse_element(f2tu, "t u"))
        assert coords[(1, 1)] == f2tu.one
        assert coords[(0, 0)].is_zero()

    def test_example_one(self, f2t):
        coords = f2t.frobenius_coords(f2t.one)
        assert coords[(0,)] == f2t.one
        assert coords[(1,)].is_zero()

    def test_reconstruction_randomized(self, f2t, f2tu, f4t):
        rng = random.Random(21)
        for field in (f2t, f2tu, f4t):
            for _ in range(25):
                a = field.random_unit(rng, degree_bound=3)
                coords = field.frobenius_coords(a)
                assert coords.reconstruct() == a


class TestSquareDependence:
    def test_basis_is_independent(self, f2t):
        t = parse_element(f2t, "t")
        assert f2t.square_dependence([f2t.one, t]) is None

    def test_example_t_t3(self, f2t):
        t = parse_element(f2t, "t")
        dep = f2t.square_dependence([t, t**3])
        assert dep is not None
        c1, c2 = dep
        assert (c1 * c1 * t + c2 * c2 * t**3).is_zero()

    def test_example_sum_to_zero(self, f2t):
        t = parse_element(f2t, "t")
        dep = f2t.square_dependence([t, t + 1, f2t.one])
        assert dep == (f2t.one, f2t.one, f2t.one)

    def test_completeness_beyond_dimension(self, f2t, f2tu):
        rng = random.Random(33)
        for field in (f2t, f2tu):
            bound = field.square_dim
            for _ in range(15):
                values = [field.random_unit(rng, degree_bound=2)
                          for _ in range(bound + 1)]
                dep = field.square_dependence(values)
                assert dep is not None
                total = field.zero
                for c, v in zip(dep, values):
                    total = total + c * c * v
                assert total.is_zero()
                assert any(not c.is_zero() for c in dep)

    def test_empty_input_rejected(self, f2t):
        with pytest.raises(ValueError):
            f2t.square_dependence([])


class TestRandomUnit:
    def test_deterministic(self, gf5, f2t):
        assert gf5.random_unit(0) == gf5.random_unit(0)
        assert f2t.random_unit(1) == f2t.random_unit(1)

    def test_nonzero(self, gf5, f2tu):
        for seed in range(30):
            assert not gf5.random_unit(seed).is_zero()
            assert not f2tu.random_unit(seed).is_zero()

    def test_degree_bound(self, f2t):
        from mwkt.polynomials import p_total_degree

        for seed in range(30):
            e = f2t.random_unit(seed)  # default bound 4
            assert p_total_degree(e.num) <= 4
            assert p_total_degree(e.den) <= 4


class TestElementParsing:
    def test_fraction_syntax(self, f2tu):
        e = parse_element(f2tu, "(t^2+t+1)/(u+1)")
        assert str(e) == "(t^2+t+1)/(u+1)"

    def test_integer_literals_reduce_mod_p(self, gf5):
        assert parse_element(gf5, "7") == gf5.from_int(2)

    def test_unknown_name(self, f2t):
        with pytest.raises(ParseError, match="unknown element name"):
            parse_element(f2t, "u")

    def test_element_round_trip_randomized(self, f2t, f2tu, f4t, gf9):
        rng = random.Random(2)
        for field in (f2t, f2tu, f4t):
            for _ in range(25):
                a = field.random_unit(rng, degree_bound=3)
                assert parse_element(field, str(a)) == a
        for e in gf9.elements():
            assert parse_element(gf9, str(e)) == e
