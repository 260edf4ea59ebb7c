"""
Evaluation Benchmark

Runs the same recurrent sum through several evaluators and records how much
work each one did. The counters (terms touched, ring operations, power-sum
updates) are the figures to compare; wall time is recorded for information.
"""

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from src.arith import rational_to_json
from src.engine import (
    EvaluationStats,
    RecurrentSumSpec,
    SeqSpec,
    eval_incremental,
    eval_naive,
    eval_reduced,
)
from src.errors import IdentityCheckError, InvalidInputError, ResourceGuardError

logger = logging.getLogger(__name__)

BENCH_METHODS = ("naive", "incremental", "reduced")


@dataclass
class BenchRecord:
    """Work done by one evaluator on one recurrent sum."""
    spec: str
    method: str
    value: Optional[Fraction]
    terms_touched: int
    ring_ops: int
    power_sum_updates: int
    wall_time: float
    skipped: bool = False
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "spec": self.spec,
            "method": self.method,
            "value": rational_to_json(self.value) if self.value is not None else None,
            "terms_touched": self.terms_touched,
            "ring_ops": self.ring_ops,
            "power_sum_updates": self.power_sum_updates,
            "wall_time": round(self.wall_time, 6),
            "skipped": self.skipped,
            "reason": self.reason,
        }


def _evaluate(method: str, spec: RecurrentSumSpec, stats: EvaluationStats,
              guard: Optional[int]) -> Fraction:
    if method == "naive":
        return eval_naive(spec, guard, stats)
    if method == "incremental":
        return eval_incremental(spec, stats)
    return eval_reduced(spec, stats=stats)


def run_bench(m: int, q: int, n: int, methods: Sequence[str], seq: SeqSpec,
              guard: Optional[int] = None) -> List[BenchRecord]:
    """
    Evaluate R_{m,q,n} of one sequence with each method.

    Args:
        m: Order
        q: Lower bound
        n: Upper bound
        methods: Subset of BENCH_METHODS
        seq: The summed sequence (all m positions)
        guard: Tuple-count guard for the naive method

    Returns:
        One BenchRecord per method; a naive run over the guard is marked skipped
    """
    unknown = [method for method in methods if method not in BENCH_METHODS]
    if unknown or not methods:
        raise InvalidInputError(f"Bench methods must be chosen from {', '.join(BENCH_METHODS)}, got {list(methods)}")
    spec = RecurrentSumSpec.same(m, q, n, seq)
    summary = spec.summary()
    logger.info(f"Benchmarking {summary} with {', '.join(methods)}")

    records: List[BenchRecord] = []
    for method in methods:
        stats = EvaluationStats()
        start_time = time.time()
        try:
            value = _evaluate(method, spec, stats, guard)
        except ResourceGuardError as e:
            logger.warning(f"Skipping {method}: {e}")
            records.append(BenchRecord(summary, method, None, 0, 0, 0, 0.0, skipped=True, reason=str(e)))
            continue
        elapsed = time.time() - start_time
        logger.info(f"{method}: {stats.terms_touched:,} terms in {elapsed:.3f} seconds")
        records.append(BenchRecord(summary, method, value, stats.terms_touched, stats.ring_ops,
                                   stats.power_sum_updates, elapsed))

    values = {r.method: r.value for r in records if not r.skipped}
    if len(set(values.values())) > 1:
        raise IdentityCheckError(f"Evaluators disagree on {summary}: " +
                                 ", ".join(f"{k}={v}" for k, v in values.items()))
    return records


def generate_bench_report(records: List[BenchRecord]) -> str:
    """Plain-text table of bench records."""
    if not records:
        return "No bench records"
    lines = [records[0].spec, f"{'method':<12} {'terms':>12} {'ring ops':>12} {'power-sum':>10} {'seconds':>9}  value"]
    for r in records:
        if r.skipped:
            lines.append(f"{r.method:<12} skipped: {r.reason}")
            continue
        lines.append(f"{r.method:<12} {r.terms_touched:>12,} {r.ring_ops:>12,} "
                     f"{r.power_sum_updates:>10,} {r.wall_time:>9.3f}  {r.value}")
    return "\n".join(lines)
