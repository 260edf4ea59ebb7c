"""
Special Numbers and Partition Identities

This module provides the exact special-number kernel used by the evaluators:
factorials and binomials, unsigned Stirling numbers of the first kind,
partial and complete Bell polynomials, and Bernoulli numbers (B_1 = -1/2).

It also hosts the partition-identity checkers. Each checker computes its two
sides by separate routes (partition enumeration on one side, Stirling or
binomial closed forms on the other) and compares them exactly.
"""

import logging
import math
import threading
from fractions import Fraction
from typing import Any, List, Sequence

from src.errors import InvalidInputError
from src.partitions import MultPartition, enumerate_partitions_with_length, iter_partitions

logger = logging.getLogger(__name__)


def factorial(n: int) -> int:
    if n < 0:
        raise InvalidInputError(f"Factorial of a negative integer {n}")
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """
    Binomial coefficient C(n, k) for integer n and k.

    Zero for k < 0 or 0 <= n < k. Negative n uses the upper-index extension
    C(n, k) = (-1)^k C(k - n - 1, k), so C(-1, 0) = 1.
    """
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k) if k <= n else 0
    return (-1) ** k * math.comb(k - n - 1, k)


class StirlingTable:
    """
    Append-only triangle of unsigned Stirling numbers of the first kind.

    Row m holds the coefficients of the rising factorial x(x+1)...(x+m-1);
    row m+1 is row m multiplied by (x + m).
    """

    def __init__(self):
        self._rows: List[List[int]] = [[1]]
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._rows)

    def _extend_to(self, m: int) -> None:
        with self._lock:
            while len(self._rows) <= m:
                k = len(self._rows) - 1
                prev = self._rows[k]
                # (x + k) * sum_r prev[r] x^r
                row = [0] * (k + 2)
                for r, c in enumerate(prev):
                    row[r + 1] += c
                    row[r] += k * c
                self._rows.append(row)
            logger.debug(f"Stirling table extended to row {len(self._rows) - 1}")

    def row(self, m: int) -> List[int]:
        if m < 0:
            raise InvalidInputError(f"Stirling row index must be non-negative, got {m}")
        if m >= len(self._rows):
            self._extend_to(m)
        return list(self._rows[m])

    def entry(self, m: int, r: int) -> int:
        if m < 0 or r < 0 or r > m:
            raise InvalidInputError(f"Stirling number [{m} {r}] needs 0 <= r <= m")
        if m >= len(self._rows):
            self._extend_to(m)
        return self._rows[m][r]


class BernoulliCache:
    """Append-only list of Bernoulli numbers of the first kind, B_1 = -1/2."""

    def __init__(self):
        self._values: List[Fraction] = [Fraction(1)]
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._values)

    def get(self, j: int) -> Fraction:
        if j < 0:
            raise InvalidInputError(f"Bernoulli index must be non-negative, got {j}")
        if j >= len(self._values):
            with self._lock:
                while len(self._values) <= j:
                    n = len(self._values)
                    # sum_{k=0}^{n} C(n+1, k) B_k = 0, solved for B_n
                    acc = sum(math.comb(n + 1, k) * b for k, b in enumerate(self._values))
                    self._values.append(-acc / (n + 1))
        return self._values[j]


_stirling = StirlingTable()
_bernoulli = BernoulliCache()


def stirling_first_unsigned(m: int, r: int) -> int:
    """
    Unsigned Stirling number of the first kind [m r].

    Args:
        m: Row index, m >= 0
        r: Column index, 0 <= r <= m

    Returns:
        Coefficient of x^r in x(x+1)...(x+m-1)
    """
    return _stirling.entry(m, r)


def bernoulli(j: int) -> Fraction:
    """Bernoulli number B_j (first kind: B_1 = -1/2)."""
    return _bernoulli.get(j)


def partition_weight(k: MultPartition) -> Fraction:
    """Coefficient prod_i 1/(i^y_i * y_i!) attached to partition k."""
    denominator = 1
    for i, y in enumerate(k.multiplicities, start=1):
        denominator *= i ** y * math.factorial(y)
    return Fraction(1, denominator)


def _bell_arity(m: int, r: int) -> int:
    return m - r + 1 if r > 0 else 0


def partial_bell(m: int, r: int, x: Sequence[Any]) -> Any:
    """
    Partial Bell polynomial B_{m,r}(x_1, ..., x_{m-r+1}).

    Computed as m! * sum over length-r partitions of m of
    prod_i (1/y_i!) (x_i/i!)^y_i. The x values may be rationals or
    pi-polynomials.

    Args:
        m: Degree, m >= 0
        r: Number of parts, 0 <= r <= m
        x: Arguments x_1, x_2, ... (x[0] is x_1)

    Returns:
        Value of the polynomial
    """
    if m < 0 or r < 0 or r > m:
        raise InvalidInputError(f"Partial Bell polynomial B_{{{m},{r}}} needs 0 <= r <= m")
    needed = _bell_arity(m, r)
    if len(x) < needed:
        raise InvalidInputError(f"B_{{{m},{r}}} needs {needed} arguments, got {len(x)}")

    args = [Fraction(v) if isinstance(v, int) else v for v in x[:needed]]
    total: Any = Fraction(0)
    for k in enumerate_partitions_with_length(m, r):
        term: Any = Fraction(1)
        for i, y in enumerate(k.multiplicities, start=1):
            if y:
                term = term * (args[i - 1] / math.factorial(i)) ** y / math.factorial(y)
        total = total + term
    return total * math.factorial(m)


def complete_bell(m: int, x: Sequence[Any]) -> Any:
    """Complete Bell polynomial B_m(x_1, ..., x_m) = sum_r B_{m,r}."""
    if m < 0:
        raise InvalidInputError(f"Complete Bell polynomial needs m >= 0, got {m}")
    if len(x) < m:
        raise InvalidInputError(f"B_{m} needs {m} arguments, got {len(x)}")
    total: Any = Fraction(0)
    for r in range(m + 1):
        total = total + partial_bell(m, r, x)
    return total


def bell_reduction_value(m: int, power_sums: Sequence[Any]) -> Any:
    """
    Same-sequence recurrent sum from its power sums via the complete Bell form.

    Args:
        m: Order of the recurrent sum
        power_sums: S_1, ..., S_m where S_i = sum_N (a_N)^i

    Returns:
        (1/m!) * B_m(x) with x_i = (i-1)! * S_i
    """
    if len(power_sums) < m:
        raise InvalidInputError(f"Order {m} needs {m} power sums, got {len(power_sums)}")
    x = [power_sums[i - 1] * Fraction(math.factorial(i - 1)) for i in range(1, m + 1)]
    return complete_bell(m, x) / math.factorial(m)


def _stirling_or_zero(m: int, r: int) -> int:
    if m < 0 or r < 0 or r > m:
        return 0
    return stirling_first_unsigned(m, r)


def check_stirling_length_identity(m: int, r: int) -> bool:
    """
    Partitions of length r against Stirling numbers.

    sum over length-r partitions k of m of prod 1/(i^y_i y_i!) == [m r] / m!
    """
    if m < 0 or r < 0 or r > m:
        raise InvalidInputError(f"Need 0 <= r <= m, got m={m}, r={r}")
    lhs = sum((partition_weight(k) for k in enumerate_partitions_with_length(m, r)), Fraction(0))
    rhs = Fraction(stirling_first_unsigned(m, r), math.factorial(m))
    logger.debug(f"stirling-length m={m} r={r}: {lhs} vs {rhs}")
    return lhs == rhs


def check_unit_partition_identity(m: int) -> bool:
    """sum over all partitions k of m of prod 1/(i^y_i y_i!) == 1."""
    if m < 0:
        raise InvalidInputError(f"Need m >= 0, got {m}")
    lhs = sum((partition_weight(k) for k in iter_partitions(m)), Fraction(0))
    logger.debug(f"unit-partition m={m}: {lhs}")
    return lhs == 1


def _binomial_weight(k: MultPartition, phi: MultPartition) -> Fraction:
    """prod_i C(y_i, phi_i) / (i^y_i y_i!) over i = 1..k.m."""
    value = partition_weight(k)
    for i in range(1, k.m + 1):
        value *= binomial(k.y(i), phi.y(i))
        if value == 0:
            break
    return value


def check_restricted_binomial_identity(m: int, r: int, phi: MultPartition) -> bool:
    """
    Length-r partitions weighted by C(y_i, phi_i).

    sum over length-r partitions k of m of prod C(y_i, phi_i)/(i^y_i y_i!)
    == [m-phi, r-r_phi] / (m-phi)! * prod 1/(i^phi_i phi_i!)

    The product on the right may be read up to i <= m or up to phi's weight;
    phi_i = 0 beyond its weight, so the two agree by construction and the
    product is taken over phi's own multiplicity vector.
    """
    if phi.m > m:
        raise InvalidInputError(f"phi is a partition of {phi.m} > m={m}; the identity does not apply")
    if r < 0 or r > m:
        raise InvalidInputError(f"Need 0 <= r <= m, got m={m}, r={r}")

    lhs = sum((_binomial_weight(k, phi) for k in enumerate_partitions_with_length(m, r)), Fraction(0))
    rest = m - phi.m
    rhs = Fraction(_stirling_or_zero(rest, r - phi.length), math.factorial(rest)) * partition_weight(phi)
    logger.debug(f"restricted-binomial m={m} r={r} phi={phi}: {lhs} vs {rhs}")
    return lhs == rhs


def check_binomial_partition_identity(m: int, phi: MultPartition) -> bool:
    """
    All partitions of m weighted by C(y_i, phi_i).

    sum over partitions k of m of prod C(y_i, phi_i)/(i^y_i y_i!)
    == prod 1/(i^phi_i phi_i!)
    """
    if phi.m > m:
        raise InvalidInputError(f"phi has weight {phi.m} > m={m}; the identity does not apply")
    lhs = sum((_binomial_weight(k, phi) for k in iter_partitions(m)), Fraction(0))
    rhs = partition_weight(phi)
    logger.debug(f"binomial-partition m={m} phi={phi}: {lhs} vs {rhs}")
    return lhs == rhs


def check_multiset_count_identity(m: int, n: int) -> bool:
    """sum over partitions k of m of prod (1/y_i!)(n/i)^y_i == C(n+m-1, m)."""
    if m < 0 or n < 0:
        raise InvalidInputError(f"Need m, n >= 0, got m={m}, n={n}")
    lhs = Fraction(0)
    for k in iter_partitions(m):
        term = Fraction(1)
        for i, y in enumerate(k.multiplicities, start=1):
            if y:
                term *= Fraction(n, i) ** y / math.factorial(y)
        lhs += term
    rhs = binomial(n + m - 1, m)
    logger.debug(f"multiset-count m={m} n={n}: {lhs} vs {rhs}")
    return lhs == rhs
