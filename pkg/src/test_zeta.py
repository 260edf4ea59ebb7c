"""
Tests for Faulhaber sums, even zeta values and the generalized Basel values.
"""

import json
import logging
from fractions import Fraction

import pytest

from src.arith import PiPoly, pipoly_eval_numeric
from src.cli import main
from src.engine import Power, RecurrentSumSpec, eval_naive
from src.errors import InvalidInputError
from src.verification import FAULHABER_CLOSED_FORMS
from src.zeta import (
    basel_general,
    basel_limit_table,
    basel_partial_sums,
    bernoulli_partition_identity,
    bernoulli_partition_report,
    faulhaber_polynomial,
    faulhaber_sum,
    recurrent_faulhaber,
    recurrent_zeta_star_even,
    truncated_zeta_star,
    zeta_even,
    zeta_even_table,
)


class TestFaulhaber:
    def test_power_sums(self):
        assert faulhaber_sum(4, 1) == 10
        assert faulhaber_sum(3, 2) == 14
        assert all(faulhaber_sum(n, 0) == n for n in range(10))
        assert faulhaber_sum(0, 5) == 0

    def test_matches_direct_summation(self):
        for p in range(8):
            for n in range(12):
                assert faulhaber_sum(n, p) == sum(N ** p for N in range(1, n + 1))

    def test_polynomial_coefficients(self):
        assert faulhaber_polynomial(1) == [0, Fraction(1, 2), Fraction(1, 2)]
        assert faulhaber_polynomial(2) == [0, Fraction(1, 6), Fraction(1, 2), Fraction(1, 3)]
        coeffs = faulhaber_polynomial(5)
        assert sum(c * 7 ** k for k, c in enumerate(coeffs)) == faulhaber_sum(7, 5)

    def test_closed_forms(self):
        for (m, p), closed_form in FAULHABER_CLOSED_FORMS.items():
            for n in range(1, 31):
                assert recurrent_faulhaber(m, p, n) == closed_form(n)

    def test_closed_forms_against_naive(self):
        for (m, p), closed_form in FAULHABER_CLOSED_FORMS.items():
            for n in range(1, 13):
                assert eval_naive(RecurrentSumSpec.same(m, 1, n, Power(p))) == closed_form(n)

    def test_recurrent_faulhaber_matches_naive(self):
        for m in range(5):
            for p in range(4):
                for n in range(1, 9):
                    assert recurrent_faulhaber(m, p, n) == eval_naive(RecurrentSumSpec.same(m, 1, n, Power(p)))

    def test_rejects_negative_arguments(self):
        with pytest.raises(InvalidInputError):
            faulhaber_sum(-1, 2)
        with pytest.raises(InvalidInputError):
            recurrent_faulhaber(2, -1, 3)


class TestZetaStar:
    def test_even_zeta_table(self):
        assert zeta_even(1) == PiPoly.monomial(Fraction(1, 6), 2)
        assert zeta_even(2) == PiPoly.monomial(Fraction(1, 90), 4)
        assert zeta_even(4) == PiPoly.monomial(Fraction(1, 9450), 8)
        assert zeta_even(6) == PiPoly.monomial(Fraction(691, 638512875), 12)
        assert [m for m, _ in zeta_even_table(3)] == [1, 2, 3]
        with pytest.raises(InvalidInputError):
            zeta_even(0)

    def test_recurrent_values(self):
        assert recurrent_zeta_star_even(4, 1) == PiPoly.monomial(Fraction(127, 604800), 8)
        assert recurrent_zeta_star_even(2, 1) == PiPoly.monomial(Fraction(7, 360), 4)
        for p in range(1, 5):
            assert recurrent_zeta_star_even(1, p) == zeta_even(p)

    def test_numeric_value(self):
        assert pipoly_eval_numeric(recurrent_zeta_star_even(4, 1), 10) == "1.992466004"

    def test_single_term_of_degree_2pm(self):
        for m in range(1, 6):
            for p in range(1, 4):
                assert recurrent_zeta_star_even(m, p).exponents == (2 * p * m,)

    def test_basel_general_equals_recurrent_value(self):
        assert basel_general(1) == PiPoly.monomial(Fraction(1, 6), 2)
        assert basel_general(2) == PiPoly.monomial(Fraction(7, 360), 4)
        for m in range(1, 7):
            assert basel_general(m) == recurrent_zeta_star_even(m, 1)

    def test_truncation_error_bound(self):
        report = truncated_zeta_star(1, 1, 1000)
        assert report.below_target
        assert float(report.abs_error) < 1e-3
        assert report.to_dict()["target"] == {"terms": {"2": "1/6"}}

    def test_truncation_error_keeps_its_digits(self):
        report = truncated_zeta_star(1, 3, 300)
        assert report.abs_error == "8.162094191e-14"
        assert report.below_target

    def test_truncation_is_below_target(self):
        assert truncated_zeta_star(4, 1, 40).below_target

    def test_truncated_partials_increase(self):
        partials = [truncated_zeta_star(2, 1, n).partial for n in range(1, 8)]
        assert partials == sorted(partials)
        assert len(set(partials)) == len(partials)

    def test_truncation_rejects_order_zero(self):
        with pytest.raises(InvalidInputError):
            truncated_zeta_star(0, 1, 10)


class TestBernoulliPartition:
    def test_first_value(self):
        report = bernoulli_partition_report(1)
        assert report.lhs == Fraction(-1, 24)
        assert report.rhs == Fraction(-1, 24)
        assert not report.experimental

    def test_identity_holds(self):
        for m in range(1, 9):
            assert bernoulli_partition_identity(m)

    def test_signed_form_matches_recurrent_value(self):
        for m in range(1, 7):
            assert bernoulli_partition_report(m).signed_form_consistent

    def test_higher_p_is_report_only(self, caplog):
        with pytest.raises(InvalidInputError):
            bernoulli_partition_identity(2, 2)
        with caplog.at_level(logging.WARNING, logger="src.zeta"):
            report = bernoulli_partition_report(2, 2)
        assert report.experimental
        assert report.signed_form_consistent
        assert "experimental" in caplog.text


class TestBaselLimit:
    def test_table_approaches_two(self):
        rows = basel_limit_table(8, digits=10)
        assert rows[0].numeric == "1.644934067"
        assert rows[3].numeric == "1.992466004"
        assert 2 - float(rows[7].numeric) < 1e-4
        assert [row.m for row in rows] == list(range(1, 9))

    def test_table_resolves_tiny_gaps(self):
        rows = basel_limit_table(40)
        gaps = [float(row.gap) for row in rows]
        assert all(later < earlier for earlier, later in zip(gaps, gaps[1:]))
        # 2 - v_m is close to 2 * 4^-m
        assert 1.654e-24 < gaps[-1] < 1.655e-24
        assert rows[0].to_dict()["gap"] == rows[0].gap

    def test_cli_table_at_order_forty(self, capsys):
        assert main(["basel", "--max-m", "40", "--json"]) == 0
        assert len(json.loads(capsys.readouterr().out)["rows"]) == 40

    def test_partial_sums_diverge(self):
        sums = basel_partial_sums(10)
        assert sums[0] == (0, "1.0")
        assert float(sums[-1][1]) > 11
        for n, value in sums:
            assert float(value) >= n + 1

    def test_rejects_empty_table(self):
        with pytest.raises(InvalidInputError):
            basel_limit_table(0)
