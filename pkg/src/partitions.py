"""
Integer and Set Partitions

Integer partitions are stored as multiplicity vectors (y_1, ..., y_m) where
y_i counts the parts equal to i; the vector always has length m, trailing
zeros included. Set partitions of {1, ..., m} are stored as canonical block
families (blocks sorted internally, then by smallest element).
"""

import logging
from dataclasses import dataclass
from math import factorial
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from src.config import get_config
from src.errors import InvalidInputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MultPartition:
    """Partition of m given by part multiplicities: sum(i * y_i) == m."""
    m: int
    multiplicities: Tuple[int, ...]

    def __post_init__(self):
        if self.m < 0:
            raise InvalidInputError(f"Partitioned integer must be non-negative, got {self.m}")
        if len(self.multiplicities) != self.m:
            raise InvalidInputError(
                f"Multiplicity vector of a partition of {self.m} must have length {self.m}, "
                f"got {len(self.multiplicities)}"
            )
        if any(y < 0 for y in self.multiplicities):
            raise InvalidInputError(f"Negative multiplicity in {self.multiplicities}")
        weight = sum(i * y for i, y in enumerate(self.multiplicities, start=1))
        if weight != self.m:
            raise InvalidInputError(f"Multiplicities {self.multiplicities} sum to {weight}, not {self.m}")

    @classmethod
    def from_parts(cls, parts: Sequence[int]) -> "MultPartition":
        """Build from a list of parts, e.g. [2, 1, 1] -> (2, 1, 0, 0)."""
        m = sum(parts)
        counts = [0] * m
        for part in parts:
            if part < 1:
                raise InvalidInputError(f"Parts must be positive, got {part}")
            counts[part - 1] += 1
        return cls(m, tuple(counts))

    @classmethod
    def from_counts(cls, counts: Dict[int, int]) -> "MultPartition":
        """Build from a {part: multiplicity} map, e.g. {2: 1, 1: 2}."""
        parts: List[int] = []
        for part, count in counts.items():
            parts.extend([part] * count)
        return cls.from_parts(parts)

    def y(self, i: int) -> int:
        """Multiplicity of part i (0 for i > m)."""
        return self.multiplicities[i - 1] if 1 <= i <= self.m else 0

    @property
    def length(self) -> int:
        """Number of parts r = sum(y_i)."""
        return sum(self.multiplicities)

    def parts(self) -> List[int]:
        """Parts in non-increasing order."""
        result: List[int] = []
        for i in range(self.m, 0, -1):
            result.extend([i] * self.multiplicities[i - 1])
        return result

    def largest_part(self) -> int:
        for i in range(self.m, 0, -1):
            if self.multiplicities[i - 1]:
                return i
        return 0

    def padded(self, size: int) -> Tuple[int, ...]:
        """Multiplicity vector extended with zeros to length `size`."""
        if size < self.m and any(self.multiplicities[size:]):
            raise InvalidInputError(f"Partition {self} has parts larger than {size}")
        return tuple(self.y(i) for i in range(1, size + 1))

    def to_json(self) -> List[int]:
        return list(self.multiplicities)

    def __str__(self) -> str:
        inner = ",".join(f"{i}={self.multiplicities[i - 1]}"
                         for i in range(self.m, 0, -1) if self.multiplicities[i - 1])
        return "{" + inner + "}"


def _descending_parts(remaining: int, max_part: int, count: Optional[int]) -> Iterator[List[int]]:
    """Part lists of `remaining` with parts <= max_part, largest part first."""
    if remaining == 0:
        if count is None or count == 0:
            yield []
        return
    if count is not None and (count == 0 or count > remaining):
        return
    for first in range(min(remaining, max_part), 0, -1):
        if count is not None and first * count < remaining:
            # even `count` copies of the largest allowed part cannot reach remaining
            break
        rest_count = None if count is None else count - 1
        for rest in _descending_parts(remaining - first, first, rest_count):
            yield [first] + rest


def iter_partitions(m: int, length: Optional[int] = None) -> Iterator[MultPartition]:
    """
    Stream the partitions of m, optionally only those with `length` parts.

    Order is by descending largest part, recursively, which is lexicographic
    descending on (y_m, ..., y_1).
    """
    if m < 0:
        raise InvalidInputError(f"Cannot partition a negative integer {m}")
    if length is not None and length < 0:
        raise InvalidInputError(f"Partition length must be non-negative, got {length}")
    for parts in _descending_parts(m, m, length):
        yield MultPartition.from_parts(parts) if parts else MultPartition(0, ())


def enumerate_partitions(m: int) -> List[MultPartition]:
    """All p(m) partitions of m as multiplicity vectors."""
    return list(iter_partitions(m))


def enumerate_partitions_with_length(m: int, r: int) -> List[MultPartition]:
    """All partitions of m with exactly r parts."""
    return list(iter_partitions(m, length=r))


def partition_function(m: int) -> int:
    """
    Number of partitions p(m), by Euler's pentagonal-number recurrence.

    p(k) = sum_{j>=1} (-1)^(j-1) [p(k - j(3j-1)/2) + p(k - j(3j+1)/2)],
    with p(0) = 1 and p of a negative argument equal to 0.
    """
    if m < 0:
        raise InvalidInputError(f"p(m) is undefined for negative m={m}")
    table = [1] + [0] * m
    for k in range(1, m + 1):
        total = 0
        j = 1
        while True:
            first = k - j * (3 * j - 1) // 2
            if first < 0:
                break
            second = k - j * (3 * j + 1) // 2
            term = table[first] + (table[second] if second >= 0 else 0)
            total += term if j % 2 == 1 else -term
            j += 1
        table[k] = total
    return table[m]


def largest_part_bound(m: int, r: int) -> int:
    """Largest part any length-r partition of m can contain: m - r + 1."""
    if r < 1 or r > m:
        raise InvalidInputError(f"Need 1 <= r <= m for the largest-part bound, got m={m}, r={r}")
    return m - r + 1


def cycle_type_count(k: MultPartition) -> int:
    """Number of permutations of m elements whose cycle type is k: m!/prod(i^y_i * y_i!)."""
    denominator = 1
    for i, y in enumerate(k.multiplicities, start=1):
        denominator *= i ** y * factorial(y)
    return factorial(k.m) // denominator


@dataclass(frozen=True)
class SetPartition:
    """Partition of {1, ..., m} into disjoint non-empty blocks, in canonical order."""
    m: int
    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.m < 1:
            raise InvalidInputError(f"Set partitions need m >= 1, got {self.m}")
        if any(not block for block in self.blocks):
            raise InvalidInputError("Set partition blocks must be non-empty")
        canonical = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        seen: List[int] = [e for block in canonical for e in block]
        if sorted(seen) != list(range(1, self.m + 1)):
            raise InvalidInputError(f"Blocks {self.blocks} do not partition {{1..{self.m}}}")
        object.__setattr__(self, "blocks", canonical)

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "SetPartition":
        """Build from a restricted growth string: labels[i] is the block of element i+1."""
        groups: Dict[int, List[int]] = {}
        for element, label in enumerate(labels, start=1):
            groups.setdefault(label, []).append(element)
        return cls(len(labels), tuple(tuple(g) for g in groups.values()))

    def shape(self) -> MultPartition:
        """Integer partition formed by the block sizes."""
        return MultPartition.from_parts([len(b) for b in self.blocks])

    def block_of(self, element: int) -> Tuple[int, ...]:
        for block in self.blocks:
            if element in block:
                return block
        raise InvalidInputError(f"Element {element} is not in {{1..{self.m}}}")

    def to_json(self) -> List[List[int]]:
        """Blocks ordered by (size, smallest element) for the JSON interface."""
        return [list(b) for b in sorted(self.blocks, key=lambda b: (len(b), b[0]))]

    def __str__(self) -> str:
        return "{" + "|".join(",".join(str(e) for e in block) for block in self.blocks) + "}"


def _growth_strings(m: int) -> Iterator[Tuple[int, ...]]:
    """Restricted growth strings of length m in lexicographic order."""
    def extend(prefix: List[int], top: int) -> Iterator[Tuple[int, ...]]:
        if len(prefix) == m:
            yield tuple(prefix)
            return
        for label in range(top + 2):
            prefix.append(label)
            yield from extend(prefix, max(top, label))
            prefix.pop()

    yield from extend([0], 0)


def enumerate_set_partitions(m: int, guard: Optional[int] = None) -> List[SetPartition]:
    """
    All set partitions of {1, ..., m}, each exactly once.

    Ordered by number of blocks, then by restricted growth string, so m=3
    gives {123}, {12|3}, {13|2}, {1|23}, {1|2|3}.

    Args:
        m: Size of the ground set
        guard: Largest m accepted (defaults to the configured set_partition_guard)

    Returns:
        List of SetPartition
    """
    guard = guard if guard is not None else get_config().set_partition_guard
    if m < 1:
        raise InvalidInputError(f"Set partitions need m >= 1, got {m}")
    if m > guard:
        raise InvalidInputError(f"Set partitions are enumerated for 1 <= m <= {guard}, got m={m}")
    labelled = list(_growth_strings(m))
    labelled.sort(key=lambda labels: (max(labels), labels))
    partitions = [SetPartition.from_labels(labels) for labels in labelled]
    logger.info(f"Enumerated {len(partitions)} set partitions of {{1..{m}}}")
    return partitions


def set_partition_class_size(k: MultPartition) -> int:
    """Number of set partitions of {1..m} whose block sizes form k: m!/prod(i!^y_i * y_i!)."""
    denominator = 1
    for i, y in enumerate(k.multiplicities, start=1):
        denominator *= factorial(i) ** y * factorial(y)
    return factorial(k.m) // denominator


def refines(p: SetPartition, rho: SetPartition) -> bool:
    """True iff every block of p lies inside some block of rho."""
    if p.m != rho.m:
        raise InvalidInputError(f"Cannot compare set partitions of sizes {p.m} and {rho.m}")
    owner = {e: index for index, block in enumerate(rho.blocks) for e in block}
    return all(len({owner[e] for e in block}) == 1 for block in p.blocks)
