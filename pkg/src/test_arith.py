"""
Tests for the exact scalar layer: rationals, pi-polynomials and value rings.
"""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, seed, strategies as st

from src.arith import (
    PI_POLYNOMIALS,
    RATIONALS,
    PiPoly,
    format_rational,
    parse_rational,
    pipoly_eval_numeric,
    pipoly_mul,
    rational_make,
    rational_to_json,
    stable_sum,
)
from src.errors import InvalidInputError

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
pipolys = st.dictionaries(st.integers(min_value=0, max_value=6), small_fractions, max_size=4).map(PiPoly)


def test_rational_make_canonicalizes():
    assert rational_make(6, 4) == Fraction(3, 2)
    assert rational_to_json(rational_make(0, 7)) == "0/1"
    assert rational_make(2, -4) == Fraction(-1, 2)
    assert rational_make(2, -4).denominator == 2


def test_rational_make_rejects_zero_denominator():
    with pytest.raises(InvalidInputError):
        rational_make(1, 0)


def test_parse_and_format_rational():
    assert parse_rational("-3/2") == Fraction(-3, 2)
    assert parse_rational(" 7 ") == Fraction(7)
    assert format_rational(Fraction(7)) == "7"
    assert rational_to_json(7) == "7/1"
    with pytest.raises(InvalidInputError):
        parse_rational("1.5")
    with pytest.raises(InvalidInputError):
        parse_rational("3/0")


def test_pipoly_monomial_products():
    zeta2 = PiPoly.monomial(Fraction(1, 6), 2)
    zeta4 = PiPoly.monomial(Fraction(1, 90), 4)
    assert pipoly_mul(zeta2, zeta2) == PiPoly.monomial(Fraction(1, 36), 4)
    assert pipoly_mul(zeta2, zeta4) == PiPoly.monomial(Fraction(1, 540), 6)
    assert pipoly_mul(PiPoly.one(), zeta4) == zeta4


def test_pipoly_mixes_with_rationals():
    x = PiPoly.monomial(1, 2)
    assert x + Fraction(1, 2) == PiPoly({0: Fraction(1, 2), 2: 1})
    assert 1 - x == PiPoly({0: 1, 2: -1})
    assert (x * 3) / 6 == PiPoly.monomial(Fraction(1, 2), 2)
    assert PiPoly.constant(Fraction(1, 2)) == Fraction(1, 2)
    assert hash(PiPoly.constant(Fraction(1, 2))) == hash(Fraction(1, 2))
    assert (x - x).is_zero()


def test_pipoly_text_form():
    value = PiPoly.monomial(Fraction(127, 604800), 8)
    assert str(value) == "127/604800 * pi^8"
    assert PiPoly.parse("127/604800 * pi^8") == value
    assert PiPoly.parse("1/2 - 1/3 * pi^2") == PiPoly({0: Fraction(1, 2), 2: Fraction(-1, 3)})
    assert str(PiPoly.zero()) == "0"
    with pytest.raises(InvalidInputError):
        PiPoly.parse("2 * e^2")


def test_pipoly_json_form():
    value = PiPoly({0: Fraction(-1, 2), 4: Fraction(7, 360)})
    assert value.to_json() == {"terms": {"0": "-1/2", "4": "7/360"}}
    assert PiPoly.from_json(value.to_json()) == value


def test_pipoly_is_immutable():
    value = PiPoly.one()
    with pytest.raises(AttributeError):
        value._terms = ()


def test_pipoly_division_by_zero():
    with pytest.raises(InvalidInputError):
        PiPoly.one() / 0


def test_pipoly_numeric_evaluation():
    assert pipoly_eval_numeric(PiPoly.monomial(Fraction(1, 6), 2), 10) == "1.644934067"
    assert pipoly_eval_numeric(PiPoly.monomial(Fraction(127, 604800), 8), 10) == "1.992466004"
    assert pipoly_eval_numeric(PiPoly.zero(), 7) == "0"
    assert pipoly_eval_numeric(Fraction(1, 4), 3) == "0.25"
    with pytest.raises(InvalidInputError):
        pipoly_eval_numeric(PiPoly.one(), 0)


def test_pipoly_numeric_survives_cancellation():
    near_pi = PiPoly({0: Fraction(-31415926535, 10 ** 10), 1: 1})
    assert pipoly_eval_numeric(near_pi, 10) == "8.979323846e-11"
    near_zeta2 = PiPoly({0: Fraction(-164493406684822643647, 10 ** 20), 2: Fraction(1, 6)})
    assert pipoly_eval_numeric(near_zeta2, 5) == "2.4152e-21"


def test_stable_sum_raises_precision_until_resolved():
    total, dps = stable_sum(lambda d: [mpmath.mpf(1), -mpmath.mpf(1) + mpmath.mpf(10) ** -30], 6)
    assert dps > 30
    with mpmath.workdps(dps):
        assert mpmath.nstr(total, 6) == "1.0e-30"
    assert stable_sum(lambda d: [], 6)[0] == 0


@pytest.mark.parametrize("value", [
    PiPoly.monomial(Fraction(1, 6), 2),
    PiPoly.monomial(Fraction(127, 604800), 8),
    PiPoly({0: Fraction(-31415926535, 10 ** 10), 1: 1}),
    PiPoly({0: Fraction(1, 7), 3: Fraction(-2, 3)}),
])
def test_numeric_digits_agree_at_longer_precision(value):
    short = pipoly_eval_numeric(value, 10)
    for digits in (15, 25, 40):
        with mpmath.workdps(digits + 10):
            assert mpmath.nstr(mpmath.mpf(pipoly_eval_numeric(value, digits)), 10) == short


def test_numeric_value_matches_mpmath_zeta():
    with mpmath.workdps(40):
        expected = mpmath.nstr(mpmath.zeta(2), 30)
    assert pipoly_eval_numeric(PiPoly.monomial(Fraction(1, 6), 2), 30) == expected


bounded_rationals = st.builds(rational_make, st.integers(min_value=-10 ** 6, max_value=10 ** 6),
                              st.integers(min_value=1, max_value=10 ** 6))


@seed(20240611)
@given(bounded_rationals, bounded_rationals, bounded_rationals)
def test_rational_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b).denominator > 0


@given(pipolys, pipolys)
def test_pipoly_addition_and_product_commute(a, b):
    assert a + b == b + a
    assert a * b == b * a


@given(pipolys, pipolys, pipolys)
def test_pipoly_product_distributes(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(pipolys, st.integers(min_value=0, max_value=4))
def test_pipoly_power_matches_repeated_product(a, k):
    assert a ** k == PI_POLYNOMIALS.power(a, k)


def test_value_rings():
    assert RATIONALS.sum([Fraction(1, 2), Fraction(1, 3)]) == Fraction(5, 6)
    assert RATIONALS.product([2, 3, Fraction(1, 6)]) == 1
    assert PI_POLYNOMIALS.embed(Fraction(2, 3)) == PiPoly.constant(Fraction(2, 3))
    with pytest.raises(InvalidInputError):
        RATIONALS.power(Fraction(2), -1)
