"""
Recurrent Sum Engine

This module evaluates recurrent sums

    R_{m,q,n} = sum over q <= N_1 <= ... <= N_m <= n of a_(1)(N_1) * ... * a_(m)(N_m)

in several independent ways:
1. eval_naive: direct enumeration of the non-decreasing index tuples
2. eval_incremental: the variation update from upper bound t to t+1
3. eval_reduced: power sums combined over the partitions of m (same sequence only)
4. eval_inverted: the nested sum rewritten with the summation order reversed
5. eval_general_reduced: set-partition reduction of the symmetrized sum

Sequence position 1 is the innermost sum (the one over N_1). Every list of
sequences in this package, JSON and CLI included, is ordered innermost first.
"""

import json
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, permutations
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from src.arith import RATIONALS, ValueRing, format_rational, parse_rational, rational_to_json
from src.config import get_config
from src.errors import DomainError, InvalidInputError, ResourceGuardError, SequenceRangeError
from src.partitions import MultPartition, enumerate_partitions, enumerate_set_partitions
from src.special import binomial, partition_weight

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Sequence specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Power:
    """a_N = N^exponent; negative exponents are undefined at N = 0."""
    exponent: int

    def at(self, N: int) -> Fraction:
        if self.exponent >= 0:
            return Fraction(N ** self.exponent)
        if N == 0:
            raise DomainError(f"pow:{self.exponent} is undefined at N=0")
        return Fraction(1, N ** (-self.exponent))

    def describe(self) -> str:
        return f"pow:{self.exponent}"

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "power", "exponent": self.exponent}


@dataclass(frozen=True)
class Constant:
    """a_N = value for every N."""
    value: Fraction

    def at(self, N: int) -> Fraction:
        return self.value

    def describe(self) -> str:
        return f"const:{format_rational(self.value)}"

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "constant", "value": rational_to_json(self.value)}


@dataclass(frozen=True)
class Tabulated:
    """Explicit values a_{first_index}, a_{first_index+1}, ..."""
    values: Tuple[Fraction, ...]
    first_index: int = 1

    def at(self, N: int) -> Fraction:
        offset = N - self.first_index
        if offset < 0 or offset >= len(self.values):
            raise SequenceRangeError(
                f"Tabulated sequence covers [{self.first_index}, "
                f"{self.first_index + len(self.values) - 1}], asked for N={N}"
            )
        return self.values[offset]

    @property
    def last_index(self) -> int:
        return self.first_index + len(self.values) - 1

    def describe(self) -> str:
        shown = ", ".join(format_rational(v) for v in self.values)
        return f"tab(first={self.first_index}; {shown})"

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": "tabulated",
            "first_index": self.first_index,
            "values": [rational_to_json(v) for v in self.values],
        }


SeqSpec = Union[Power, Constant, Tabulated]


def seq_eval(s: SeqSpec, N: int) -> Fraction:
    """Exact value a_N of sequence `s`."""
    return s.at(N)


def seq_table(s: SeqSpec, q: int, n: int) -> List[Fraction]:
    """Values a_q, ..., a_n."""
    return [s.at(N) for N in range(q, n + 1)]


def load_tabulated(path: Union[str, Path]) -> Tabulated:
    """
    Read a tabulated sequence from a JSON file.

    Accepted layouts are a bare list of rationals (first index 1) or an
    object {"first_index": q, "values": [...]}. Rationals may be JSON
    integers or strings such as "-3/2".
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise InvalidInputError(f"Sequence file not found: {path}")
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"Sequence file {path} is not valid JSON: {e}")

    if isinstance(data, list):
        raw_values, first_index = data, 1
    elif isinstance(data, dict) and "values" in data:
        raw_values, first_index = data["values"], int(data.get("first_index", 1))
    else:
        raise InvalidInputError(f"Sequence file {path} must hold a list or an object with 'values'")
    values = tuple(parse_rational(str(v)) for v in raw_values)
    if not values:
        raise InvalidInputError(f"Sequence file {path} holds no values")
    logger.info(f"Loaded {len(values)} tabulated values from {path}")
    return Tabulated(values, first_index)


def parse_seq_spec(text: str) -> SeqSpec:
    """Parse `pow:<e>`, `const:<rational>` or `tab:<file.json>`."""
    kind, sep, arg = str(text).strip().partition(":")
    if not sep or not arg:
        raise InvalidInputError(f"Sequence spec must look like pow:<e>, const:<r> or tab:<file>, got {text!r}")
    kind = kind.lower()
    if kind == "pow":
        try:
            return Power(int(arg))
        except ValueError:
            raise InvalidInputError(f"Power exponent must be an integer, got {arg!r}")
    if kind == "const":
        return Constant(parse_rational(arg))
    if kind == "tab":
        return load_tabulated(arg)
    raise InvalidInputError(f"Unknown sequence kind {kind!r} in {text!r}")


def seq_from_json(data: Dict[str, Any]) -> SeqSpec:
    kind = data.get("kind")
    if kind == "power":
        return Power(int(data["exponent"]))
    if kind == "constant":
        return Constant(parse_rational(data["value"]))
    if kind == "tabulated":
        return Tabulated(tuple(parse_rational(v) for v in data["values"]), int(data.get("first_index", 1)))
    raise InvalidInputError(f"Unknown sequence kind {kind!r}")


# ---------------------------------------------------------------------------
# Recurrent sum specification and counters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecurrentSumSpec:
    """R_{m,q,n} with its m sequences, innermost first."""
    m: int
    q: int
    n: int
    seqs: Tuple[SeqSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "seqs", tuple(self.seqs))
        if self.m < 0:
            raise InvalidInputError(f"Order m must be non-negative, got {self.m}")
        if len(self.seqs) != self.m:
            raise InvalidInputError(f"Order {self.m} needs {self.m} sequences, got {len(self.seqs)}")
        if self.m >= 1 and self.n < self.q:
            raise InvalidInputError(f"Upper bound n={self.n} is below lower bound q={self.q}")

    @classmethod
    def same(cls, m: int, q: int, n: int, seq: SeqSpec) -> "RecurrentSumSpec":
        """m copies of one sequence."""
        return cls(m, q, n, tuple([seq] * m))

    @property
    def is_same_sequence(self) -> bool:
        return all(s == self.seqs[0] for s in self.seqs)

    @property
    def width(self) -> int:
        return self.n - self.q + 1

    def tuple_count(self) -> int:
        """Number of index tuples q <= N_1 <= ... <= N_m <= n."""
        if self.m == 0:
            return 1
        return binomial(self.n - self.q + self.m, self.m)

    def prefix(self, k: int, n: Optional[int] = None) -> "RecurrentSumSpec":
        """R_{k,q,n} built from the first k sequences."""
        return RecurrentSumSpec(k, self.q, self.n if n is None else n, self.seqs[:k])

    def with_seqs(self, seqs: Sequence[SeqSpec]) -> "RecurrentSumSpec":
        return RecurrentSumSpec(self.m, self.q, self.n, tuple(seqs))

    def summary(self) -> str:
        seqs = ",".join(s.describe() for s in self.seqs) or "-"
        return f"R(m={self.m}, q={self.q}, n={self.n}; {seqs})"

    def to_json(self) -> Dict[str, Any]:
        return {"m": self.m, "q": self.q, "n": self.n, "seqs": [s.to_json() for s in self.seqs]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "RecurrentSumSpec":
        return cls(int(data["m"]), int(data["q"]), int(data["n"]),
                   tuple(seq_from_json(s) for s in data["seqs"]))


@dataclass
class EvaluationStats:
    """Work counters filled in by the evaluators."""
    terms_touched: int = 0
    ring_ops: int = 0
    power_sum_updates: int = 0

    def to_dict(self) -> Dict[str, int]:
        return {
            "terms_touched": self.terms_touched,
            "ring_ops": self.ring_ops,
            "power_sum_updates": self.power_sum_updates,
        }


def _check_guard(spec: RecurrentSumSpec, guard: Optional[int]) -> int:
    guard = guard if guard is not None else get_config().naive_guard
    count = spec.tuple_count()
    if count > guard:
        raise ResourceGuardError("naive tuple count C(n-q+m, m)", count, guard)
    return count


# ---------------------------------------------------------------------------
# Direct enumeration
# ---------------------------------------------------------------------------

def eval_naive(spec: RecurrentSumSpec, guard: Optional[int] = None,
               stats: Optional[EvaluationStats] = None) -> Fraction:
    """
    Sum the product over every non-decreasing index tuple.

    Each sequence table is scaled by the lcm of its denominators so the
    inner loop multiplies integers; the common denominator is divided out
    once at the end.

    Args:
        spec: The recurrent sum
        guard: Largest tuple count allowed (defaults to the configured naive_guard)
        stats: Optional counters to fill in

    Returns:
        Exact value of R_{m,q,n}
    """
    if spec.m == 0:
        if stats is not None:
            stats.terms_touched += 1
        return Fraction(1)
    count = _check_guard(spec, guard)

    scaled: List[List[int]] = []
    scale = 1
    for s in spec.seqs:
        values = seq_table(s, spec.q, spec.n)
        denominator = math.lcm(*(v.denominator for v in values))
        scaled.append([v.numerator * (denominator // v.denominator) for v in values])
        scale *= denominator

    total = 0
    for combo in combinations_with_replacement(range(spec.width), spec.m):
        term = 1
        for table, index in zip(scaled, combo):
            term *= table[index]
        total += term

    if stats is not None:
        stats.terms_touched += count
        stats.ring_ops += count * spec.m
    return Fraction(total, scale)


def eval_symmetrized_naive(spec: RecurrentSumSpec, guard: Optional[int] = None) -> Fraction:
    """Sum of eval_naive over every ordering of the sequences."""
    total = Fraction(0)
    for order in permutations(spec.seqs):
        total += eval_naive(spec.with_seqs(order), guard)
    return total


# ---------------------------------------------------------------------------
# Incremental evaluation
# ---------------------------------------------------------------------------

def eval_incremental(spec: RecurrentSumSpec, stats: Optional[EvaluationStats] = None) -> Fraction:
    """
    Advance (R_0, ..., R_m) from upper bound t-1 to t for t = q..n.

    The step is R_k(t) = sum_{j=0..k} (a_(j+1)(t) * ... * a_(k)(t)) * R_j(t-1),
    applied for k = m down to 1 so that every R_j on the right is still the
    value at t-1. The inner sum is accumulated Horner-style.
    """
    m = spec.m
    if m == 0:
        if stats is not None:
            stats.terms_touched += 1
        return Fraction(1)

    R: List[Fraction] = [Fraction(1)] + [Fraction(0)] * m
    for t in range(spec.q, spec.n + 1):
        a = [s.at(t) for s in spec.seqs]
        for k in range(m, 0, -1):
            acc = R[0]
            for j in range(1, k + 1):
                acc = acc * a[j - 1] + R[j]
            R[k] = acc

    if stats is not None:
        per_step = m * (m + 1) // 2
        stats.terms_touched += spec.width * per_step
        stats.ring_ops += spec.width * per_step * 2
    return R[m]


# ---------------------------------------------------------------------------
# Reduction over integer partitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReductionTerm:
    """coefficient * prod_i S_i^y_i for one partition (y_1, ..., y_m)."""
    partition: MultPartition
    coefficient: Fraction

    @property
    def powers(self) -> Tuple[int, ...]:
        return self.partition.multiplicities

    def monomial(self) -> str:
        factors = []
        for i, y in enumerate(self.powers, start=1):
            if y == 1:
                factors.append(f"S{i}")
            elif y > 1:
                factors.append(f"S{i}^{y}")
        return "*".join(factors) or "1"


@dataclass(frozen=True)
class ReductionExpansion:
    """R_m as a combination of power-sum monomials, one term per partition of m."""
    m: int
    terms: Tuple[ReductionTerm, ...]

    def coefficients(self) -> Dict[Tuple[int, ...], Fraction]:
        return {t.powers: t.coefficient for t in self.terms}

    def evaluate(self, power_sums: Sequence[Any], ring: ValueRing = RATIONALS) -> Any:
        """Substitute S_1, ..., S_m (ring elements) into the expansion."""
        if len(power_sums) < self.m:
            raise InvalidInputError(f"Order {self.m} needs {self.m} power sums, got {len(power_sums)}")
        total = ring.zero
        for term in self.terms:
            product = ring.one
            for i, y in enumerate(term.powers, start=1):
                if y:
                    product = product * ring.power(power_sums[i - 1], y)
            total = total + term.coefficient * product
        return total

    def with_coefficient(self, index: int, value: Fraction) -> "ReductionExpansion":
        """Copy with the coefficient of term `index` replaced."""
        terms = list(self.terms)
        terms[index] = ReductionTerm(terms[index].partition, Fraction(value))
        return ReductionExpansion(self.m, tuple(terms))

    def to_json(self) -> List[Dict[str, Any]]:
        return [
            {"partition": t.partition.to_json(), "coefficient": rational_to_json(t.coefficient)}
            for t in self.terms
        ]

    def __str__(self) -> str:
        return " + ".join(f"{format_rational(t.coefficient)} * {t.monomial()}" for t in self.terms)


@lru_cache(maxsize=64)
def expand_reduction(m: int) -> ReductionExpansion:
    """
    Symbolic reduction of a same-sequence recurrent sum of order m.

    Args:
        m: Order, m >= 0

    Returns:
        ReductionExpansion with coefficient prod 1/(y_i! * i^y_i) per partition
    """
    if m < 0:
        raise InvalidInputError(f"Order m must be non-negative, got {m}")
    terms = tuple(ReductionTerm(k, partition_weight(k)) for k in enumerate_partitions(m))
    logger.debug(f"Expanded order-{m} reduction into {len(terms)} terms")
    return ReductionExpansion(m, terms)


def power_sums(seq: SeqSpec, q: int, n: int, m: int, ring: ValueRing = RATIONALS,
               stats: Optional[EvaluationStats] = None) -> List[Any]:
    """S_i = sum_{N=q..n} (a_N)^i for i = 1..m, embedded in `ring`."""
    sums = [Fraction(0)] * m
    for N in range(q, n + 1):
        value = seq.at(N)
        power = Fraction(1)
        for i in range(m):
            power *= value
            sums[i] += power
    if stats is not None:
        stats.power_sum_updates += m * max(n - q + 1, 0)
    return [ring.embed(s) for s in sums]


def reduce_power_sums(m: int, sums: Sequence[Any], ring: ValueRing = RATIONALS,
                      expansion: Optional[ReductionExpansion] = None) -> Any:
    """Combine power sums over the partitions of m."""
    expansion = expansion if expansion is not None else expand_reduction(m)
    if expansion.m != m:
        raise InvalidInputError(f"Expansion is for order {expansion.m}, not {m}")
    return expansion.evaluate(sums, ring)


def eval_reduced(spec: RecurrentSumSpec, ring: ValueRing = RATIONALS,
                 stats: Optional[EvaluationStats] = None,
                 expansion: Optional[ReductionExpansion] = None) -> Any:
    """
    Same-sequence recurrent sum from its power sums.

    Args:
        spec: A recurrent sum whose m sequences are identical
        ring: Ring the result is computed in
        stats: Optional counters to fill in
        expansion: Expansion to use instead of expand_reduction(m)

    Returns:
        sum over partitions of m of prod (1/y_i!) (S_i/i)^y_i
    """
    if not spec.is_same_sequence:
        raise InvalidInputError(
            "eval_reduced needs identical sequences; use eval_incremental for R itself "
            "or eval_general_reduced for the symmetrized sum"
        )
    if spec.m == 0:
        if stats is not None:
            stats.terms_touched += 1
        return ring.one
    sums = power_sums(spec.seqs[0], spec.q, spec.n, spec.m, ring, stats)
    result = reduce_power_sums(spec.m, sums, ring, expansion)
    if stats is not None:
        terms = len(expansion.terms) if expansion is not None else len(expand_reduction(spec.m).terms)
        stats.terms_touched += terms
        stats.ring_ops += terms * (spec.m + 1)
    return result


# ---------------------------------------------------------------------------
# Reversed summation order
# ---------------------------------------------------------------------------

class InversionMode(Enum):
    """Rearrangements of the summation order."""
    FULL = "full"
    ROTATE = "rotate"
    PARTIAL = "partial"
    PARTIAL_ROTATE = "partial-rotate"

    @classmethod
    def parse(cls, text: str) -> "InversionMode":
        for mode in cls:
            if mode.value == text:
                return mode
        raise InvalidInputError(f"Unknown inversion mode {text!r}; choose from {[m.value for m in cls]}")


class _Tables:
    """Sequence values a_(k)(N) for k = 1..m and N in [q, n]."""

    def __init__(self, spec: RecurrentSumSpec):
        self.q = spec.q
        self.rows = [seq_table(s, spec.q, spec.n) for s in spec.seqs]

    def a(self, k: int, N: int) -> Fraction:
        return self.rows[k - 1][N - self.q]


def _reversed_nest(t: _Tables, k: int, last: int, low: int, high: int) -> Fraction:
    """sum_{N_k=low}^{high} a_k(N_k) sum_{N_{k+1}=N_k}^{high} ... sum_{N_last=N_{last-1}}^{high} a_last."""
    if k > last:
        return Fraction(1)
    total = Fraction(0)
    for N in range(low, high + 1):
        total += t.a(k, N) * _reversed_nest(t, k + 1, last, N, high)
    return total


def _forward_nest(t: _Tables, k: int, first: int, low: int, high: int) -> Fraction:
    """sum_{N_k=low}^{high} a_k(N_k) sum_{N_{k-1}=low}^{N_k} ... sum_{N_first=low}^{N_{first+1}} a_first."""
    if k < first:
        return Fraction(1)
    total = Fraction(0)
    for N in range(low, high + 1):
        total += t.a(k, N) * _forward_nest(t, k - 1, first, low, N)
    return total


def _rotated_block(t: _Tables, p: int, low: int, high: int) -> Fraction:
    """sum_{N_1=low}^{high} a_1(N_1) sum_{N_p=N_1}^{high} ... sum_{N_2=N_1}^{N_3} a_2."""
    if p == 0:
        return Fraction(1)
    total = Fraction(0)
    for N1 in range(low, high + 1):
        total += t.a(1, N1) * _forward_nest(t, p, 2, N1, high)
    return total


def _outer_then_block(t: _Tables, k: int, p: int, q: int, high: int, rotate: bool) -> Fraction:
    """Sums over N_m..N_{p+1} in their original order, then the rearranged block of the inner p."""
    if k == p:
        if rotate:
            return _rotated_block(t, p, q, high)
        return _reversed_nest(t, 1, p, q, high)
    total = Fraction(0)
    for N in range(q, high + 1):
        total += t.a(k, N) * _outer_then_block(t, k - 1, p, q, N, rotate)
    return total


def eval_inverted(spec: RecurrentSumSpec, mode: InversionMode, p: Optional[int] = None,
                  guard: Optional[int] = None) -> Fraction:
    """
    Evaluate the recurrent sum with its summation order rearranged.

    FULL:            sum_{N_1=q}^{n} a_1 sum_{N_2=N_1}^{n} a_2 ... sum_{N_m=N_{m-1}}^{n} a_m
    ROTATE:          sum_{N_1=q}^{n} a_1 sum_{N_m=N_1}^{n} a_m ... sum_{N_2=N_1}^{N_3} a_2
    PARTIAL(p):      outer m-p sums unchanged; the inner p sums in FULL order
                     with upper bound N_{p+1} (n when p = m)
    PARTIAL_ROTATE(p): as PARTIAL, with the inner p sums in ROTATE order

    Args:
        spec: The recurrent sum
        mode: Rearrangement to evaluate
        p: Number of inner sums rearranged (PARTIAL modes only), 0 <= p <= m
        guard: Largest tuple count allowed

    Returns:
        Exact value, equal to eval_naive(spec)
    """
    m = spec.m
    if mode in (InversionMode.PARTIAL, InversionMode.PARTIAL_ROTATE):
        if p is None or p < 0 or p > m:
            raise InvalidInputError(f"Partial inversion needs 0 <= p <= m={m}, got p={p}")
    elif p is not None:
        raise InvalidInputError(f"Mode {mode.value} takes no p")
    if m == 0:
        return Fraction(1)
    _check_guard(spec, guard)

    t = _Tables(spec)
    if mode is InversionMode.FULL:
        return _reversed_nest(t, 1, m, spec.q, spec.n)
    if mode is InversionMode.ROTATE:
        return _rotated_block(t, m, spec.q, spec.n)
    return _outer_then_block(t, m, p, spec.q, spec.n, rotate=mode is InversionMode.PARTIAL_ROTATE)


# ---------------------------------------------------------------------------
# Reduction over set partitions
# ---------------------------------------------------------------------------

def eval_general_reduced(spec: RecurrentSumSpec, guard: Optional[int] = None,
                         stats: Optional[EvaluationStats] = None) -> Fraction:
    """
    Symmetrized recurrent sum of distinct sequences via set partitions.

    Returns sum over set partitions P of {1..m} of
    prod_blocks (|B|-1)! * sum_{N=q..n} prod_{h in B} a_h(N),
    which equals the sum of R_{m,q,n} over all m! orderings of the sequences.
    """
    if spec.m == 0:
        if stats is not None:
            stats.terms_touched += 1
        return Fraction(1)
    limit = guard if guard is not None else get_config().set_partition_guard
    if spec.m > limit:
        raise ResourceGuardError("set partition order m", spec.m, limit)
    tables = [seq_table(s, spec.q, spec.n) for s in spec.seqs]
    block_sums: Dict[Tuple[int, ...], Fraction] = {}

    def block_sum(block: Tuple[int, ...]) -> Fraction:
        if block not in block_sums:
            total = Fraction(0)
            for index in range(spec.width):
                term = Fraction(1)
                for h in block:
                    term *= tables[h - 1][index]
                total += term
            block_sums[block] = total
        return block_sums[block]

    partitions = enumerate_set_partitions(spec.m, limit)
    total = Fraction(0)
    for partition in partitions:
        term = Fraction(1)
        for block in partition.blocks:
            term *= math.factorial(len(block) - 1) * block_sum(block)
        total += term
    if stats is not None:
        stats.terms_touched += len(partitions)
        stats.ring_ops += len(block_sums) * spec.width * spec.m
    return total


# ---------------------------------------------------------------------------
# Variation identities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VariationSide:
    """Both sides of one identity relating upper bounds n and n+1."""
    name: str
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def _is_one(s: SeqSpec) -> bool:
    return isinstance(s, Constant) and s.value == 1


def variation_identity_sides(spec: RecurrentSumSpec, p: int,
                             guard: Optional[int] = None) -> List[VariationSide]:
    """
    Evaluate both sides of the identities linking R_{.,q,n+1} to R_{.,q,n}.

    Every R value is computed directly by eval_naive; the sequences must be
    defined on [q, n+1]. With b_k = a_(k)(n+1) and R_k built from the first
    k sequences, the identities are:

    step:          R_m(n+1) = b_m R_{m-1}(n+1) + R_m(n)                     (m >= 1)
    expansion:     R_m(n+1) = sum_{k=0..m} (b_m ... b_{k+1}) R_k(n)
    nested:        H_0 = 1, H_k = b_k H_{k-1} + R_k(n), R_m(n+1) = H_m
    pivot:         R_m(n+1) = sum_{k=p+1..m} (b_m ... b_{k+1}) R_k(n) + (b_m ... b_{p+1}) R_p(n+1)
    nested-pivot:  H_p = R_p(n+1), H_k = b_k H_{k-1} + R_k(n), R_m(n+1) = H_m
    ones:          with a_(2..m) = 1: R_m(n+1) = sum_{k=p+1..m} R_k(n) + R_p(n+1),
                   where R_0(n+1) is read as a_(1)(n+1)                     (only when applicable)
    """
    m = spec.m
    if p < 0 or p > m:
        raise InvalidInputError(f"Pivot needs 0 <= p <= m={m}, got p={p}")
    n, n1 = spec.n, spec.n + 1

    def R(k: int, upper: int) -> Fraction:
        return eval_naive(spec.prefix(k, upper), guard)

    b = [s.at(n1) for s in spec.seqs]

    def b_prod(low: int, high: int) -> Fraction:
        """b_low * ... * b_high (1 when empty)."""
        value = Fraction(1)
        for k in range(low, high + 1):
            value *= b[k - 1]
        return value

    target = R(m, n1)
    before = [R(k, n) for k in range(m + 1)]
    sides: List[VariationSide] = []

    if m >= 1:
        sides.append(VariationSide("step", target, b[m - 1] * R(m - 1, n1) + before[m]))

    sides.append(VariationSide(
        "expansion", target, sum((b_prod(k + 1, m) * before[k] for k in range(m + 1)), Fraction(0))
    ))

    nested = Fraction(1)
    for k in range(1, m + 1):
        nested = b[k - 1] * nested + before[k]
    sides.append(VariationSide("nested", target, nested))

    pivot_value = R(p, n1)
    pivot = sum((b_prod(k + 1, m) * before[k] for k in range(p + 1, m + 1)), Fraction(0))
    pivot += b_prod(p + 1, m) * pivot_value
    sides.append(VariationSide("pivot", target, pivot))

    nested_pivot = pivot_value
    for k in range(p + 1, m + 1):
        nested_pivot = b[k - 1] * nested_pivot + before[k]
    sides.append(VariationSide("nested-pivot", target, nested_pivot))

    if m >= 1 and all(_is_one(s) for s in spec.seqs[1:]):
        tail = b[0] if p == 0 else pivot_value
        ones = sum((before[k] for k in range(p + 1, m + 1)), Fraction(0)) + tail
        sides.append(VariationSide("ones", target, ones))

    return sides


def check_variation_identities(spec: RecurrentSumSpec, p: int, guard: Optional[int] = None) -> bool:
    """True iff every identity from variation_identity_sides holds exactly."""
    sides = variation_identity_sides(spec, p, guard)
    for side in sides:
        if not side.holds:
            logger.warning(f"Variation identity '{side.name}' fails for {spec.summary()} p={p}: "
                           f"{side.lhs} != {side.rhs}")
    return all(side.holds for side in sides)
