"""
Identity Verification Suites

This module runs seeded property sweeps over the evaluators and identity
checkers and collects the outcome in a VerifyReport. Each suite compares two
independently computed quantities per case; any difference is recorded with
the full case description and both values.

Random tabulated sequences come from numpy's PCG64 generator seeded with the
requested seed: numerators uniform in [-5, 5], denominators uniform in [1, 6].
Cases are generated, run and reported in a fixed order, so one seed always
yields the same report.
"""

import json
import logging
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

from numpy.random import PCG64, Generator
from tqdm import tqdm

from src.arith import PI_POLYNOMIALS
from src.config import get_config
from src.engine import (
    Constant,
    InversionMode,
    Power,
    RecurrentSumSpec,
    SeqSpec,
    Tabulated,
    eval_general_reduced,
    eval_incremental,
    eval_inverted,
    eval_naive,
    eval_reduced,
    eval_symmetrized_naive,
    expand_reduction,
    power_sums,
    reduce_power_sums,
    variation_identity_sides,
)
from src.errors import InvalidInputError, RecurrentSumError
from src.partitions import enumerate_partitions
from src.special import (
    bell_reduction_value,
    check_binomial_partition_identity,
    check_multiset_count_identity,
    check_restricted_binomial_identity,
    check_stirling_length_identity,
    check_unit_partition_identity,
)
from src.zeta import (
    basel_general,
    bernoulli_partition_report,
    faulhaber_sum,
    recurrent_faulhaber,
    recurrent_zeta_star_even,
    zeta_even,
)

logger = logging.getLogger(__name__)

SUITES = (
    "variation",
    "inversion",
    "reduction",
    "general",
    "partition-identities",
    "faulhaber",
    "basel-general",
)

# suites whose second side goes through the partition expansion
POISONABLE_SUITES = ("reduction", "faulhaber", "basel-general")

# Closed forms of sum_{N_m..N_1} (N_m ... N_1)^p for (m, p)
FAULHABER_CLOSED_FORMS: Dict[Tuple[int, int], Callable[[int], Fraction]] = {
    (2, 1): lambda n: Fraction(n * (n + 1) * (n + 2) * (3 * n + 1), 24),
    (2, 2): lambda n: Fraction(n * (n + 1) * (n + 2) * (2 * n + 1) * (2 * n + 3) * (5 * n - 1), 360),
    (3, 1): lambda n: Fraction(n ** 2 * (n + 1) ** 2 * (n + 2) * (n + 3), 48),
}

# (equal, lhs, rhs, detail)
CaseOutcome = Tuple[bool, Any, Any, str]


@dataclass
class VerifyFailure:
    """One case whose two sides differed (or which raised)."""
    key: Tuple[Any, ...]
    case: str
    spec: Dict[str, Any]
    lhs: str
    rhs: str
    detail: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "case": self.case,
            "spec": self.spec,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "detail": self.detail,
        }


@dataclass
class VerifyReport:
    """Outcome of one suite run."""
    suite: str
    seed: int
    max_m: int
    max_n: int
    samples: int
    poisoned: bool
    cases_run: int = 0
    failures: List[VerifyFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 3

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "max_m": self.max_m,
            "max_n": self.max_n,
            "samples": self.samples,
            "poisoned": self.poisoned,
            "cases_run": self.cases_run,
            "failures": [f.to_dict() for f in self.failures],
            "passed": self.passed,
        }


@dataclass
class _Case:
    key: Tuple[Any, ...]
    label: str
    spec: Dict[str, Any]
    run: Callable[[], CaseOutcome]


def _text(value: Any) -> str:
    return str(value)


class VerificationRunner:
    """
    Builds and runs the cases of one verification suite.
    """

    def __init__(self, max_m: int, max_n: int, seed: int,
                 samples: Optional[int] = None, poison: bool = False):
        """
        Initialize the runner.

        Args:
            max_m: Largest order swept
            max_n: Number of upper bounds per lower bound (n in [q, q+max_n-1])
            seed: Seed of the PCG64 generator
            samples: Random specs per (m, q, n) point (defaults to verify_samples)
            poison: Corrupt one expansion coefficient to self-test the harness
        """
        if max_m < 0:
            raise InvalidInputError(f"max_m must be non-negative, got {max_m}")
        if max_n < 1:
            raise InvalidInputError(f"max_n must be at least 1, got {max_n}")
        self.max_m = max_m
        self.max_n = max_n
        self.seed = seed
        self.samples = samples if samples is not None else get_config().verify_samples
        self.poison = poison
        self.rng = Generator(PCG64(seed))

    # -- random input -------------------------------------------------------

    def random_tabulated(self, q: int, last: int) -> Tabulated:
        """Random rationals on [q, last]."""
        size = last - q + 1
        numerators = self.rng.integers(-5, 6, size=size)
        denominators = self.rng.integers(1, 7, size=size)
        values = tuple(Fraction(int(a), int(b)) for a, b in zip(numerators, denominators))
        return Tabulated(values, first_index=q)

    def _grid(self) -> Iterator[Tuple[int, int, int]]:
        for m in range(self.max_m + 1):
            for q in (1, 2):
                for n in range(q, q + self.max_n):
                    yield m, q, n

    def _spec_kind(self, m: int, q: int, n: int, sample: int) -> Tuple[str, RecurrentSumSpec]:
        """Rotate through distinct, same-sequence and constant-ones specs."""
        kind = ("distinct", "same", "ones")[sample % 3]
        if kind == "distinct" or m == 0:
            seqs: List[SeqSpec] = [self.random_tabulated(q, n + 1) for _ in range(m)]
            return "distinct", RecurrentSumSpec(m, q, n, tuple(seqs))
        if kind == "same":
            return "same", RecurrentSumSpec.same(m, q, n, self.random_tabulated(q, n + 1))
        inner = self.random_tabulated(q, n + 1)
        return "ones", RecurrentSumSpec(m, q, n, (inner,) + (Constant(Fraction(1)),) * (m - 1))

    def _expansion(self, m: int):
        expansion = expand_reduction(m)
        if self.poison:
            first = expansion.terms[0]
            expansion = expansion.with_coefficient(0, first.coefficient + 1)
        return expansion

    # -- suites ---------------------------------------------------------------

    def variation_cases(self) -> Iterator[_Case]:
        for m, q, n in self._grid():
            for sample in range(self.samples):
                kind, spec = self._spec_kind(m, q, n, sample)
                for p in range(m + 1):
                    yield _Case((m, q, n, sample, p), f"variation {kind} m={m} q={q} n={n} #{sample} p={p}",
                                spec.to_json(), partial(self._run_variation, spec, p))

    @staticmethod
    def _run_variation(spec: RecurrentSumSpec, p: int) -> CaseOutcome:
        sides = variation_identity_sides(spec, p)
        bad = [s for s in sides if not s.holds]
        if bad:
            return False, bad[0].lhs, bad[0].rhs, f"identity '{bad[0].name}'"
        return True, sides[0].lhs, sides[0].rhs, ",".join(s.name for s in sides)

    def inversion_cases(self) -> Iterator[_Case]:
        for m, q, n in self._grid():
            for sample in range(self.samples):
                kind, spec = self._spec_kind(m, q, n, sample)
                modes: List[Tuple[InversionMode, Optional[int]]] = [
                    (InversionMode.FULL, None), (InversionMode.ROTATE, None)
                ]
                for p in range(m + 1):
                    modes.append((InversionMode.PARTIAL, p))
                    modes.append((InversionMode.PARTIAL_ROTATE, p))
                for index, (mode, p) in enumerate(modes):
                    yield _Case((m, q, n, sample, index),
                                f"inversion {mode.value} p={p} {kind} m={m} q={q} n={n} #{sample}",
                                spec.to_json(), partial(self._run_inversion, spec, mode, p))

    @staticmethod
    def _run_inversion(spec: RecurrentSumSpec, mode: InversionMode, p: Optional[int]) -> CaseOutcome:
        lhs = eval_naive(spec)
        rhs = eval_inverted(spec, mode, p)
        return lhs == rhs, lhs, rhs, f"mode {mode.value}"

    def reduction_cases(self) -> Iterator[_Case]:
        for m, q, n in self._grid():
            expansion = self._expansion(m)
            for sample in range(self.samples):
                spec = RecurrentSumSpec.same(m, q, n, self.random_tabulated(q, n))
                yield _Case((m, q, n, sample), f"reduction m={m} q={q} n={n} #{sample}",
                            spec.to_json(), partial(self._run_reduction, spec, expansion))

    @staticmethod
    def _run_reduction(spec: RecurrentSumSpec, expansion) -> CaseOutcome:
        naive = eval_naive(spec)
        incremental = eval_incremental(spec)
        reduced = eval_reduced(spec, expansion=expansion)
        if naive != incremental:
            return False, naive, incremental, "naive vs incremental"
        if naive != reduced:
            return False, naive, reduced, "naive vs reduced"
        if spec.m > 0:
            sums = power_sums(spec.seqs[0], spec.q, spec.n, spec.m)
            bell = bell_reduction_value(spec.m, sums)
            if naive != bell:
                return False, naive, bell, "naive vs complete Bell form"
        return True, naive, reduced, "naive = incremental = reduced"

    def general_cases(self) -> Iterator[_Case]:
        for m, q, n in self._grid():
            for sample in range(self.samples):
                if sample % 2 == 0:
                    spec = RecurrentSumSpec(m, q, n, tuple(self.random_tabulated(q, n) for _ in range(m)))
                else:
                    spec = RecurrentSumSpec.same(m, q, n, self.random_tabulated(q, n))
                yield _Case((m, q, n, sample), f"general m={m} q={q} n={n} #{sample}",
                            spec.to_json(), partial(self._run_general, spec))

    @staticmethod
    def _run_general(spec: RecurrentSumSpec) -> CaseOutcome:
        general = eval_general_reduced(spec)
        symmetrized = eval_symmetrized_naive(spec)
        if general != symmetrized:
            return False, symmetrized, general, "symmetrized naive vs set-partition reduction"
        if spec.is_same_sequence:
            scaled = math.factorial(spec.m) * eval_reduced(spec)
            if general != scaled:
                return False, scaled, general, "m! * reduced vs set-partition reduction"
        return True, symmetrized, general, "symmetrized"

    def partition_identity_cases(self) -> Iterator[_Case]:
        top = self.max_m
        for m in range(top + 1):
            for r in range(m + 1):
                yield _Case(("stirling-length", m, r), f"stirling-length m={m} r={r}", {"m": m, "r": r},
                            partial(self._run_check, check_stirling_length_identity, m, r))
        for m in range(top + 1):
            yield _Case(("unit-partition", m, 0), f"unit-partition m={m}", {"m": m},
                        partial(self._run_check, check_unit_partition_identity, m))
        for m in range(top + 1):
            for weight in range(m + 1):
                for phi in enumerate_partitions(weight):
                    for r in range(m + 1):
                        yield _Case(("restricted-binomial", m, weight, phi.multiplicities, r),
                                    f"restricted-binomial m={m} r={r} phi={phi}",
                                    {"m": m, "r": r, "phi": phi.to_json()},
                                    partial(self._run_check, check_restricted_binomial_identity, m, r, phi))
                    yield _Case(("binomial-partition", m, weight, phi.multiplicities),
                                f"binomial-partition m={m} phi={phi}", {"m": m, "phi": phi.to_json()},
                                partial(self._run_check, check_binomial_partition_identity, m, phi))
        for m in range(top + 1):
            for n in range(self.max_n + 1):
                yield _Case(("multiset-count", m, n), f"multiset-count m={m} n={n}", {"m": m, "n": n},
                            partial(self._run_check, check_multiset_count_identity, m, n))

    @staticmethod
    def _run_check(check: Callable[..., bool], *args) -> CaseOutcome:
        ok = check(*args)
        return ok, ok, True, check.__name__

    def faulhaber_cases(self) -> Iterator[_Case]:
        for m in range(1, self.max_m + 1):
            expansion = self._expansion(m)
            for p in range(4):
                for n in range(1, self.max_n + 1):
                    yield _Case(("recurrent", m, p, n), f"faulhaber m={m} p={p} n={n}",
                                {"m": m, "p": p, "n": n},
                                partial(self._run_faulhaber, m, p, n, expansion))
        for (m, p), closed_form in sorted(FAULHABER_CLOSED_FORMS.items()):
            expansion = self._expansion(m)
            for n in range(1, self.max_n + 1):
                yield _Case(("closed-form", m, p, n), f"faulhaber closed form m={m} p={p} n={n}",
                            {"m": m, "p": p, "n": n},
                            partial(self._run_closed_form, m, p, n, closed_form, expansion))

    @staticmethod
    def _run_faulhaber(m: int, p: int, n: int, expansion) -> CaseOutcome:
        sums = [faulhaber_sum(n, i * p) for i in range(1, m + 1)]
        closed = reduce_power_sums(m, sums, expansion=expansion)
        naive = eval_naive(RecurrentSumSpec.same(m, 1, n, Power(p)))
        return closed == naive, naive, closed, "naive vs recurrent Faulhaber"

    @staticmethod
    def _run_closed_form(m: int, p: int, n: int, closed_form: Callable[[int], Fraction],
                         expansion) -> CaseOutcome:
        sums = [faulhaber_sum(n, i * p) for i in range(1, m + 1)]
        value = reduce_power_sums(m, sums, expansion=expansion)
        expected = closed_form(n)
        if value != expected:
            return False, expected, value, "closed form vs recurrent Faulhaber"
        unreduced = recurrent_faulhaber(m, p, n)
        return unreduced == expected, expected, unreduced, "closed form"

    def basel_cases(self) -> Iterator[_Case]:
        for m in range(1, self.max_m + 1):
            yield _Case(("basel", m), f"basel-general m={m}", {"m": m},
                        partial(self._run_basel, m, self._expansion(m)))
            yield _Case(("bernoulli-partition", m), f"bernoulli-partition m={m}", {"m": m, "p": 1},
                        partial(self._run_bernoulli_partition, m))

    @staticmethod
    def _run_basel(m: int, expansion) -> CaseOutcome:
        sums = [zeta_even(i) for i in range(1, m + 1)]
        star = reduce_power_sums(m, sums, PI_POLYNOMIALS, expansion)
        basel = basel_general(m)
        if star != basel:
            return False, basel, star, "generalized Basel vs zeta-star reduction"
        unpoisoned = recurrent_zeta_star_even(m, 1)
        return unpoisoned == basel, basel, unpoisoned, "generalized Basel"

    @staticmethod
    def _run_bernoulli_partition(m: int) -> CaseOutcome:
        report = bernoulli_partition_report(m, 1)
        if not report.signed_form_consistent:
            return False, report.lhs, report.rhs, "sign-factored form disagrees with zeta-star value"
        return report.holds, report.lhs, report.rhs, "Bernoulli partition identity"

    # -- driver ---------------------------------------------------------------

    def cases(self, suite: str) -> List[_Case]:
        builders = {
            "variation": self.variation_cases,
            "inversion": self.inversion_cases,
            "reduction": self.reduction_cases,
            "general": self.general_cases,
            "partition-identities": self.partition_identity_cases,
            "faulhaber": self.faulhaber_cases,
            "basel-general": self.basel_cases,
        }
        if suite not in builders:
            raise InvalidInputError(f"Unknown suite {suite!r}; choose from {', '.join(SUITES)}")
        if self.poison and suite not in POISONABLE_SUITES:
            raise InvalidInputError(
                f"--poison applies to suites {', '.join(POISONABLE_SUITES)}, not {suite!r}"
            )
        return list(builders[suite]())

    def run(self, suite: str, progress: bool = True) -> VerifyReport:
        """
        Run every case of `suite`.

        Args:
            suite: Suite name, one of SUITES
            progress: Show a progress bar on standard error

        Returns:
            VerifyReport with failures sorted by case key
        """
        cases = self.cases(suite)
        report = VerifyReport(suite, self.seed, self.max_m, self.max_n, self.samples, self.poison)
        logger.info(f"Running suite '{suite}': {len(cases)} cases (seed {self.seed})")

        for case in tqdm(cases, desc=f"verify {suite}", file=sys.stderr, disable=not progress):
            try:
                ok, lhs, rhs, detail = case.run()
            except RecurrentSumError as e:
                ok, lhs, rhs, detail = False, "-", "-", f"{type(e).__name__}: {e}"
            report.cases_run += 1
            if not ok:
                report.failures.append(VerifyFailure(case.key, case.label, case.spec,
                                                     _text(lhs), _text(rhs), detail))

        report.failures.sort(key=lambda f: repr(f.key))
        if report.passed:
            logger.info(f"Suite '{suite}': all {report.cases_run} cases passed")
        else:
            logger.warning(f"Suite '{suite}': {len(report.failures)} of {report.cases_run} cases failed")
        return report


def run_verify(suite: str, max_m: int, max_n: int, seed: int, poison: bool = False,
               samples: Optional[int] = None, progress: Optional[bool] = None) -> VerifyReport:
    """
    Run one verification suite.

    Args:
        suite: One of SUITES
        max_m: Largest order swept
        max_n: Upper bounds per lower bound
        seed: Generator seed
        poison: Corrupt one expansion coefficient (reduction-based suites only)
        samples: Random specs per sweep point
        progress: Progress bar on/off (defaults to the configured setting)

    Returns:
        VerifyReport
    """
    runner = VerificationRunner(max_m, max_n, seed, samples, poison)
    show = get_config().progress if progress is None else progress
    return runner.run(suite, progress=show)


def generate_verification_report(report: VerifyReport) -> str:
    """Human-readable summary of a verification run."""
    status = "PASSED" if report.passed else "FAILED"
    lines = [
        f"=== VERIFY {report.suite} ===",
        f"Status: {status}",
        f"Cases run: {report.cases_run}",
        f"Failures: {len(report.failures)}",
        f"Seed: {report.seed}  max_m: {report.max_m}  max_n: {report.max_n}  samples: {report.samples}",
    ]
    if report.poisoned:
        lines.append("Poisoned run: one expansion coefficient was corrupted")
    for failure in report.failures[:20]:
        lines.append(f"- {failure.case}: {failure.lhs} != {failure.rhs} ({failure.detail})")
    if len(report.failures) > 20:
        lines.append(f"... and {len(report.failures) - 20} more")
    return "\n".join(lines)


def save_report(report: VerifyReport, path: Optional[str] = None) -> str:
    """
    Write the report as JSON.

    Args:
        report: Report to write
        path: Output file (defaults to verification_results_<suite>_seed<seed>.json)

    Returns:
        Path written
    """
    path = path or f"verification_results_{report.suite}_seed{report.seed}.json"
    with open(path, "w", encoding="utf-8") as f:
        json.dump(report.to_dict(), f, indent=2)
    logger.info(f"Verification report saved to {path}")
    return path
