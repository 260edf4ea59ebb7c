"""
Faulhaber Sums and Even Zeta-Star Values

Applications of the partition reduction:
1. Faulhaber's closed form for sums of powers, and recurrent sums of N^p
   built from it
2. Exact even zeta values zeta(2m) as pi-polynomials, and recurrent sums of
   1/N^(2p) taken to infinity
3. The generalized Basel value (2 - 4^(1-m)) * zeta(2m), its approach to 2
   and the divergence of its sum over m
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import mpmath

from src.arith import (
    GUARD_DIGITS,
    PI_POLYNOMIALS,
    PiPoly,
    format_decimal,
    pipoly_eval_numeric,
    rational_to_json,
    rational_to_mpf,
    stable_sum,
)
from src.config import get_config
from src.engine import Power, RecurrentSumSpec, eval_naive, reduce_power_sums
from src.errors import IdentityCheckError, InvalidInputError
from src.partitions import iter_partitions
from src.special import bernoulli, binomial

logger = logging.getLogger(__name__)


def faulhaber_sum(n: int, p: int) -> Fraction:
    """
    Sum of N^p for N = 1..n by Faulhaber's formula.

    (1/(p+1)) * sum_{j=0..p} (-1)^j C(p+1, j) B_j n^(p+1-j), with B_1 = -1/2.
    """
    if n < 0 or p < 0:
        raise InvalidInputError(f"Faulhaber sum needs n, p >= 0, got n={n}, p={p}")
    total = Fraction(0)
    for j in range(p + 1):
        total += (-1) ** j * binomial(p + 1, j) * bernoulli(j) * n ** (p + 1 - j)
    return total / (p + 1)


def faulhaber_polynomial(p: int) -> List[Fraction]:
    """Coefficients c_0, ..., c_{p+1} with sum_{N=1..n} N^p = sum_k c_k n^k."""
    if p < 0:
        raise InvalidInputError(f"Faulhaber polynomial needs p >= 0, got {p}")
    coeffs = [Fraction(0)] * (p + 2)
    for j in range(p + 1):
        coeffs[p + 1 - j] = (-1) ** j * binomial(p + 1, j) * bernoulli(j) / (p + 1)
    return coeffs


def recurrent_faulhaber(m: int, p: int, n: int) -> Fraction:
    """
    Recurrent sum of N^p of order m with bounds 1..n, in closed form.

    Args:
        m: Order
        p: Exponent of the summed sequence
        n: Upper bound

    Returns:
        The partition reduction with S_i = faulhaber_sum(n, i*p)
    """
    if m < 0 or p < 0 or n < 0:
        raise InvalidInputError(f"Recurrent Faulhaber needs m, p, n >= 0, got m={m}, p={p}, n={n}")
    sums = [faulhaber_sum(n, i * p) for i in range(1, m + 1)]
    return reduce_power_sums(m, sums)


def zeta_even(m: int) -> PiPoly:
    """zeta(2m) = (-1)^(m+1) B_2m (2 pi)^(2m) / (2 (2m)!), exactly."""
    if m < 1:
        raise InvalidInputError(f"zeta(2m) needs m >= 1, got m={m}")
    coeff = (-1) ** (m + 1) * bernoulli(2 * m) * 2 ** (2 * m) / (2 * math.factorial(2 * m))
    return PiPoly.monomial(coeff, 2 * m)


def zeta_even_table(max_m: int) -> List[Tuple[int, PiPoly]]:
    """(m, zeta(2m)) for m = 1..max_m."""
    if max_m < 1:
        raise InvalidInputError(f"max_m must be at least 1, got {max_m}")
    return [(m, zeta_even(m)) for m in range(1, max_m + 1)]


def recurrent_zeta_star_even(m: int, p: int) -> PiPoly:
    """
    Infinite recurrent sum of 1/N^(2p) of order m.

    The partition reduction with S_i = zeta(2ip), in pi-polynomial arithmetic.
    Every product in it has pi-degree 2pm, so the result is a single term.
    """
    if m < 1 or p < 1:
        raise InvalidInputError(f"Recurrent zeta-star needs m, p >= 1, got m={m}, p={p}")
    sums = [zeta_even(i * p) for i in range(1, m + 1)]
    value = reduce_power_sums(m, sums, PI_POLYNOMIALS)
    if value.exponents != (2 * p * m,):
        raise IdentityCheckError(
            f"Recurrent zeta-star m={m} p={p} should be a single pi^{2 * p * m} term, got {value}"
        )
    return value


def basel_general(m: int) -> PiPoly:
    """(2 - 4^(1-m)) * zeta(2m)."""
    if m < 1:
        raise InvalidInputError(f"Generalized Basel value needs m >= 1, got m={m}")
    return (2 - Fraction(1, 4 ** (m - 1))) * zeta_even(m)


def _signed_partition_sum(m: int, p: int) -> Fraction:
    """sum over partitions of m of prod ((-1)^y_i / y_i!) (B_2ip / ((2i) (2ip)!))^y_i."""
    total = Fraction(0)
    for k in iter_partitions(m):
        term = Fraction(1)
        for i, y in enumerate(k.multiplicities, start=1):
            if y:
                base = bernoulli(2 * i * p) / (2 * i * math.factorial(2 * i * p))
                term *= (-1) ** y * base ** y / math.factorial(y)
        total += term
    return total


@dataclass(frozen=True)
class BernoulliPartitionReport:
    """Both sides of the Bernoulli partition identity, plus the signed-form cross-check."""
    m: int
    p: int
    lhs: Fraction
    rhs: Fraction
    signed_form_consistent: bool
    experimental: bool

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "p": self.p,
            "lhs": rational_to_json(self.lhs),
            "rhs": rational_to_json(self.rhs),
            "holds": self.holds,
            "signed_form_consistent": self.signed_form_consistent,
            "experimental": self.experimental,
        }


def bernoulli_partition_report(m: int, p: int = 1) -> BernoulliPartitionReport:
    """
    Evaluate the Bernoulli partition identity at (m, p).

    Left: sum over partitions of m of prod ((-1)^y_i/y_i!) (B_2ip/((2i)(2ip)!))^y_i.
    Right: (2^(1-2m) - 1) B_2m / (2m)!.

    The identity follows from the generalized Basel value at p = 1. For p > 1
    the report is marked experimental. The sign-factored form
    (-1)^(pm) (2 pi)^(2pm) * left is also compared with the recurrent
    zeta-star value; that equality holds for every p.
    """
    if m < 1 or p < 1:
        raise InvalidInputError(f"Bernoulli partition identity needs m, p >= 1, got m={m}, p={p}")
    lhs = _signed_partition_sum(m, p)
    rhs = (Fraction(1, 2 ** (2 * m - 1)) - 1) * bernoulli(2 * m) / math.factorial(2 * m)

    signed = PiPoly.monomial((-1) ** (p * m) * 2 ** (2 * p * m) * lhs, 2 * p * m)
    consistent = signed == recurrent_zeta_star_even(m, p)
    report = BernoulliPartitionReport(m, p, lhs, rhs, consistent, experimental=p > 1)
    if report.experimental:
        logger.warning(f"Bernoulli partition identity at p={p} is experimental: "
                       f"m={m} lhs={lhs} rhs={rhs} ({'equal' if report.holds else 'different'})")
    return report


def bernoulli_partition_identity(m: int, p: int = 1) -> bool:
    """
    True iff the Bernoulli partition identity holds at (m, p = 1).

    The sign-factored form must agree as well. Other p are only available
    through bernoulli_partition_report, which reports without asserting.
    """
    if p != 1:
        raise InvalidInputError(
            f"The Bernoulli partition identity is established at p=1 only; "
            f"use bernoulli_partition_report(m, {p}) for an experimental report"
        )
    report = bernoulli_partition_report(m, p)
    return report.holds and report.signed_form_consistent


@dataclass(frozen=True)
class TruncationReport:
    """A finite recurrent sum of 1/N^(2p) compared with its infinite value."""
    m: int
    p: int
    n: int
    partial: Fraction
    target: PiPoly
    abs_error: str
    below_target: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "p": self.p,
            "n": self.n,
            "partial": rational_to_json(self.partial),
            "target": self.target.to_json(),
            "abs_error": self.abs_error,
            "below_target": self.below_target,
        }


def truncated_zeta_star(m: int, p: int, n: int, digits: Optional[int] = None,
                        guard: Optional[int] = None) -> TruncationReport:
    """
    Compare R_{m,1,n} of 1/N^(2p) with the infinite recurrent sum.

    Args:
        m: Order, m >= 1
        p: Half the exponent, p >= 1
        n: Truncation bound, n >= 1
        digits: Significant digits of the reported error (defaults to numeric_digits)
        guard: Tuple-count guard for the direct evaluation

    Returns:
        TruncationReport
    """
    if m < 1 or p < 1 or n < 1:
        raise InvalidInputError(f"Truncated zeta-star needs m, p, n >= 1, got m={m}, p={p}, n={n}")
    digits = digits if digits is not None else get_config().numeric_digits
    partial = eval_naive(RecurrentSumSpec.same(m, 1, n, Power(-2 * p)), guard)
    target = recurrent_zeta_star_even(m, p)

    difference, dps = stable_sum(lambda d: target.term_values(d) + [-rational_to_mpf(partial, d)], digits)
    with mpmath.workdps(dps):
        error = format_decimal(abs(difference), digits)
    logger.info(f"Truncated zeta-star m={m} p={p} n={n}: error {error}")
    return TruncationReport(m, p, n, partial, target, error, difference > 0)


@dataclass(frozen=True)
class BaselRow:
    m: int
    value: PiPoly
    numeric: str
    gap: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "value": self.value.to_json(),
            "text": str(self.value),
            "numeric": self.numeric,
            "gap": self.gap,
        }


def basel_limit_table(max_m: int, digits: Optional[int] = None) -> List[BaselRow]:
    """
    Generalized Basel values for m = 1..max_m.

    The distance to 2 shrinks like 4^-m, so it is computed as its own
    cancelling sum rather than read off the rounded value.
    Raises IdentityCheckError unless every value lies in [1, 2) and the
    distance to 2 strictly decreases with m.
    """
    if max_m < 1:
        raise InvalidInputError(f"max_m must be at least 1, got {max_m}")
    digits = digits if digits is not None else get_config().numeric_digits

    rows: List[BaselRow] = []
    previous_gap = None
    for m in range(1, max_m + 1):
        value = basel_general(m)
        gap, dps = stable_sum(lambda d, v=value: [mpmath.mpf(2)] + [-t for t in v.term_values(d)], digits)
        with mpmath.workdps(dps):
            if not (0 < gap <= 1):
                raise IdentityCheckError(f"Generalized Basel value at m={m} is {2 - gap}, outside [1, 2)")
            if previous_gap is not None and not gap < previous_gap:
                raise IdentityCheckError(f"Distance to 2 does not decrease at m={m}")
            gap_text = format_decimal(gap, digits)
        previous_gap = gap
        rows.append(BaselRow(m, value, pipoly_eval_numeric(value, digits), gap_text))
    logger.info(f"Basel table up to m={max_m}: distance to 2 is {rows[-1].gap}")
    return rows


def basel_partial_sums(max_m: int, digits: Optional[int] = None) -> List[Tuple[int, str]]:
    """
    Partial sums v_0 + ... + v_n for n = 0..max_m, with v_0 = 1.

    Each partial sum is at least n + 1 since every v_m >= 1; a violation raises.
    """
    if max_m < 0:
        raise InvalidInputError(f"max_m must be non-negative, got {max_m}")
    digits = digits if digits is not None else get_config().numeric_digits
    # positive terms only; rounding error grows with the number of terms
    dps = digits + GUARD_DIGITS + len(str(max_m))

    sums: List[Tuple[int, str]] = []
    with mpmath.workdps(dps):
        running = mpmath.mpf(1)
        for n in range(max_m + 1):
            if n > 0:
                running += basel_general(n).to_mpf(dps)
            if running < n + 1:
                raise IdentityCheckError(f"Partial sum up to m={n} is {running}, below {n + 1}")
            sums.append((n, format_decimal(running, digits)))
    return sums
