"""
Tests for the special-number kernel and the partition identity checkers.
"""

from fractions import Fraction
from math import factorial

import pytest

from src.arith import PiPoly
from src.errors import InvalidInputError
from src.partitions import MultPartition, enumerate_partitions
from src.special import (
    bell_reduction_value,
    bernoulli,
    binomial,
    check_binomial_partition_identity,
    check_multiset_count_identity,
    check_restricted_binomial_identity,
    check_stirling_length_identity,
    check_unit_partition_identity,
    complete_bell,
    partial_bell,
    partition_weight,
    stirling_first_unsigned,
)


def test_binomial_edge_cases():
    assert binomial(5, 2) == 10
    assert binomial(3, 5) == 0
    assert binomial(5, -1) == 0
    assert binomial(-1, 0) == 1
    assert binomial(-1, 3) == -1
    assert binomial(-2, 2) == 3
    assert binomial(35, 6) == 1623160


def test_stirling_numbers():
    assert [stirling_first_unsigned(3, r) for r in (1, 2, 3)] == [2, 3, 1]
    assert [stirling_first_unsigned(4, r) for r in range(5)] == [0, 6, 11, 6, 1]
    assert stirling_first_unsigned(0, 0) == 1
    for m in range(21):
        assert stirling_first_unsigned(m, m) == 1
        assert sum(stirling_first_unsigned(m, r) for r in range(m + 1)) == factorial(m)
    with pytest.raises(InvalidInputError):
        stirling_first_unsigned(3, 4)


def test_bernoulli_numbers():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(3) == 0
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)
    assert all(bernoulli(j) == 0 for j in range(3, 30, 2))
    with pytest.raises(InvalidInputError):
        bernoulli(-1)


def test_bernoulli_recurrence_residual_is_zero():
    for n in range(1, 21):
        assert sum(binomial(n + 1, k) * bernoulli(k) for k in range(n + 1)) == 0


def test_partial_bell_values():
    assert partial_bell(0, 0, []) == 1
    assert partial_bell(4, 2, [1, 2, 3]) == 24
    # unit arguments give Stirling numbers of the second kind
    assert partial_bell(4, 2, [1, 1, 1]) == 7
    assert partial_bell(3, 2, [1, 1]) == 3
    with pytest.raises(InvalidInputError):
        partial_bell(4, 2, [1, 1])


def test_partial_bell_at_factorials_gives_stirling_numbers():
    for m in range(1, 11):
        for r in range(1, m + 1):
            x = [factorial(i - 1) for i in range(1, m - r + 2)]
            assert partial_bell(m, r, x) == stirling_first_unsigned(m, r)


def test_partial_bell_over_pi_polynomials():
    x = [PiPoly.monomial(1, 2), PiPoly.monomial(3, 4)]
    assert partial_bell(2, 1, x) == PiPoly.monomial(3, 4)
    assert partial_bell(2, 2, x) == PiPoly.monomial(1, 4)


def test_complete_bell():
    assert complete_bell(0, []) == 1
    assert complete_bell(2, [1, 1]) == 2
    assert complete_bell(3, [1, 1, 1]) == 5
    with pytest.raises(InvalidInputError):
        complete_bell(3, [1, 1])


def test_bell_reduction_value():
    # a_N = N, n = 2: S_1 = 3, S_2 = 5
    assert bell_reduction_value(2, [Fraction(3), Fraction(5)]) == 7


def test_partition_weights_sum_to_one():
    for m in range(10):
        assert sum(partition_weight(k) for k in enumerate_partitions(m)) == 1


def test_stirling_length_identity():
    assert check_stirling_length_identity(4, 2)
    for m in range(11):
        for r in range(m + 1):
            assert check_stirling_length_identity(m, r)
    with pytest.raises(InvalidInputError):
        check_stirling_length_identity(3, 4)


def test_unit_partition_identity():
    for m in range(13):
        assert check_unit_partition_identity(m)


def test_restricted_binomial_identity_examples():
    assert check_restricted_binomial_identity(5, 3, MultPartition.from_counts({1: 1}))
    assert check_restricted_binomial_identity(4, 2, MultPartition.from_counts({2: 1}))
    assert check_restricted_binomial_identity(6, 3, MultPartition(0, ()))


def test_restricted_binomial_identity_sweep():
    for m in range(7):
        for weight in range(m + 1):
            for phi in enumerate_partitions(weight):
                for r in range(m + 1):
                    assert check_restricted_binomial_identity(m, r, phi)


def test_restricted_binomial_identity_with_light_phi():
    # phi far below m: the product over phi's parts stands for the product up to m
    for phi in (MultPartition.from_counts({1: 1}), MultPartition.from_counts({2: 1}),
                MultPartition.from_counts({1: 2})):
        for r in range(10):
            assert check_restricted_binomial_identity(9, r, phi)


def test_restricted_binomial_identity_rejects_heavy_phi():
    with pytest.raises(InvalidInputError):
        check_restricted_binomial_identity(3, 1, MultPartition.from_counts({4: 1}))


def test_binomial_partition_identity():
    assert check_binomial_partition_identity(6, MultPartition.from_counts({2: 1, 1: 1}))
    assert check_binomial_partition_identity(5, MultPartition.from_counts({5: 1}))
    for m in range(8):
        for weight in range(m + 1):
            for phi in enumerate_partitions(weight):
                assert check_binomial_partition_identity(m, phi)
    with pytest.raises(InvalidInputError):
        check_binomial_partition_identity(2, MultPartition.from_counts({3: 1}))


def test_multiset_count_identity():
    for m in range(9):
        for n in range(9):
            assert check_multiset_count_identity(m, n)
    assert check_multiset_count_identity(6, 30)
