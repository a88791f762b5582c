"""Unit tests for the exact field and Laurent scalars."""

import random
from fractions import Fraction

import pytest

from config.settings import settings
from core.errors import DivergentLimit, DivisionByZero, ExponentOverflow, FieldParseError, SquareRootOutsideField
from core.exactnum import (
    DIMENSION,
    I,
    ONE,
    S2,
    S3,
    S6,
    ZERO,
    FieldElem,
    LaurentScalar,
    field_inv,
    field_mul,
    field_to_float,
    laurent_limit,
)


def random_field_elem(rng: random.Random, nonzero: bool = False) -> FieldElem:
    """Element with small rational coordinates, about half of them zero."""
    while True:
        coords = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if rng.random() < 0.5 else 0
                  for _ in range(DIMENSION)]
        value = FieldElem(coords)
        if not (nonzero and value.is_zero()):
            return value


def random_laurent(rng: random.Random) -> LaurentScalar:
    return LaurentScalar({rng.randint(-4, 4): random_field_elem(rng) for _ in range(rng.randint(1, 3))})


class TestFieldElem:
    """Arithmetic in Q(i, sqrt2, sqrt3)."""

    def test_unit_relations(self):
        """The generators square to -1, 2 and 3 and multiply to sqrt6."""
        assert I * I == -1
        assert S2 * S2 == 2
        assert S3 * S3 == 3
        assert S2 * S3 == S6
        assert S6 * S6 == 6

    def test_parse_literals(self):
        """Text literals map to the expected coordinates."""
        assert FieldElem.parse("1/2*s2") * 2 == S2
        assert FieldElem.parse("-1/2+1/2*i") == (I - 1) * Fraction(1, 2)
        assert FieldElem.parse("(1+i)/2") == (ONE + I) / 2
        assert FieldElem.parse("s2*s3") == S6

    def test_text_round_trip(self):
        """to_text output parses back to the same element."""
        for value in (ZERO, ONE, -I, (ONE + I) / 2, S2 / 3 - S6, I * S3 * Fraction(-5, 7)):
            assert FieldElem.parse(value.to_text()) == value

    def test_inverse(self):
        """Inverses multiply to one."""
        for value in (ONE + I, S2 - 1, S3 + S6 * I, FieldElem.parse("2-3*i+s2")):
            assert value * value.inverse() == ONE
        assert (ONE + I).inverse() == (ONE - I) / 2

    def test_inverse_of_zero(self):
        """Zero has no inverse."""
        with pytest.raises(DivisionByZero):
            ZERO.inverse()
        with pytest.raises(DivisionByZero):
            field_inv(ZERO)

    def test_square_roots(self):
        """Square roots stay in the field when they exist."""
        assert FieldElem.from_rational(2).sqrt() ** 2 == 2
        assert FieldElem.parse("-1").sqrt() ** 2 == -1
        assert FieldElem.parse("2*i").sqrt() ** 2 == FieldElem.parse("2*i")
        assert FieldElem.from_rational(6).sqrt() ** 2 == 6
        assert FieldElem.from_rational(5).try_sqrt() is None
        with pytest.raises(SquareRootOutsideField):
            FieldElem.from_rational(5).sqrt()

    @pytest.mark.parametrize("text", ["pi", "sqrt(5)", "x", "", "1/"])
    def test_rejects_values_outside_the_field(self, text):
        """Symbols and radicals outside the field are parse errors."""
        with pytest.raises(FieldParseError):
            FieldElem.parse(text)

    def test_to_complex(self):
        """Floating point view matches the exact value."""
        assert abs(FieldElem.parse("s2+i").to_complex() - complex(2 ** 0.5, 1)) < 1e-12

    def test_field_to_float_is_multiplicative(self):
        """Floats of a product agree with the product of floats."""
        assert field_to_float(I - 1) == complex(-1, 1)
        assert abs(field_to_float(S2.inverse()) - 0.7071067811865476) < 1e-12
        values = [S2, ONE + I, S3 - S6 * I, FieldElem.parse("1/3-2*i*s2"), I * S3 / 7]
        for a in values:
            for b in values:
                expected = field_to_float(a) * field_to_float(b)
                assert abs(field_to_float(a * b) - expected) <= 1e-12 * (1 + abs(expected))

    @pytest.mark.slow
    def test_field_axioms(self):
        """Products associate, commute and distribute over sums on seeded random triples."""
        rng = random.Random(settings.seed)
        for _ in range(500):
            a, b, c = (random_field_elem(rng) for _ in range(3))
            assert field_mul(field_mul(a, b), c) == field_mul(a, field_mul(b, c))
            assert field_mul(a, b) == field_mul(b, a)
            assert field_mul(a, b + c) == field_mul(a, b) + field_mul(a, c)

    @pytest.mark.slow
    def test_inverse_round_trip(self):
        """a * a^-1 = 1 for seeded random nonzero elements."""
        rng = random.Random(settings.seed)
        for _ in range(200):
            a = random_field_elem(rng, nonzero=True)
            assert field_mul(a, field_inv(a)) == ONE


class TestLaurentScalar:
    """Laurent polynomials in epsilon."""

    def test_parse_text(self):
        """The e-notation reads coefficients and powers."""
        value = LaurentScalar.parse("1/2*i*e^-1")
        assert value.terms() == ((-1, I / 2),)
        assert value.valuation() == -1
        assert value.to_text() == "1/2*i*e^-1"

    def test_parse_pairs(self):
        """Pair lists and text give the same scalar."""
        assert LaurentScalar.parse([[1, "2"], [0, "i"]]) == LaurentScalar.parse("2*e+i")

    def test_arithmetic(self):
        """Products and sums expand exactly."""
        e = LaurentScalar.epsilon()
        assert (e + 1) * (e - 1) == LaurentScalar.parse("e^2-1")
        assert e * e.inverse() == 1

    def test_limit(self):
        """Limits keep the constant term and refuse negative powers."""
        assert laurent_limit(LaurentScalar.parse("e^2+3")) == 3
        assert LaurentScalar.parse("e").limit() == ZERO
        with pytest.raises(DivergentLimit):
            laurent_limit(LaurentScalar.parse("1+e^-1"))

    def test_substitute_power(self):
        """epsilon -> epsilon^k scales every exponent."""
        assert LaurentScalar.parse("e^-1+e").substitute_power(2) == LaurentScalar.parse("e^-2+e^2")
        with pytest.raises(ValueError):
            LaurentScalar.epsilon().substitute_power(0)

    def test_exponent_bound(self):
        """Exponents beyond the bound are rejected."""
        with pytest.raises(ExponentOverflow):
            LaurentScalar.monomial(1, 17)

    def test_only_monomials_invert(self):
        """A binomial has no Laurent inverse."""
        with pytest.raises(DivisionByZero):
            LaurentScalar.parse("1+e").inverse()

    def test_evaluate(self):
        """Evaluation at a point substitutes epsilon."""
        assert LaurentScalar.parse("e^2+e^-1").evaluate(2) == FieldElem.from_rational(Fraction(9, 2))

    @pytest.mark.slow
    def test_evaluation_is_a_ring_homomorphism(self):
        """Evaluating at 1/7 respects sums and products of seeded random scalars."""
        rng = random.Random(settings.seed)
        point = Fraction(1, 7)
        for _ in range(100):
            p, q = random_laurent(rng), random_laurent(rng)
            assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)
            assert (p + q).evaluate(point) == p.evaluate(point) + q.evaluate(point)
