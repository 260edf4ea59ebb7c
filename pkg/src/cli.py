"""
Command-line front end for the recurrent-sums toolkit.

Results go to standard output, as text or (with --json) as one JSON
document; logging and progress bars go to standard error. Exit codes:
0 ok, 2 invalid input, 3 identity-check failure, 4 resource guard.
"""

import argparse
import json
import logging
import re
import sys
from typing import Any, Dict, Optional, Sequence

from src.arith import format_rational, parse_rational, pipoly_eval_numeric, rational_to_json
from src.benchmark import BENCH_METHODS, generate_bench_report, run_bench
from src.config import get_config, load_config, set_config
from src.engine import (
    EvaluationStats,
    InversionMode,
    RecurrentSumSpec,
    eval_general_reduced,
    eval_incremental,
    eval_inverted,
    eval_naive,
    eval_reduced,
    expand_reduction,
    parse_seq_spec,
)
from src.errors import InvalidInputError, RecurrentSumError
from src.partitions import (
    MultPartition,
    enumerate_partitions,
    enumerate_partitions_with_length,
    enumerate_set_partitions,
    partition_function,
)
from src.special import (
    bernoulli,
    check_binomial_partition_identity,
    check_multiset_count_identity,
    check_restricted_binomial_identity,
    check_stirling_length_identity,
    check_unit_partition_identity,
    partial_bell,
    stirling_first_unsigned,
)
from src.verification import SUITES, generate_verification_report, run_verify, save_report
from src.zeta import (
    basel_limit_table,
    basel_partial_sums,
    bernoulli_partition_identity,
    bernoulli_partition_report,
    recurrent_faulhaber,
    recurrent_zeta_star_even,
    truncated_zeta_star,
)

logger = logging.getLogger(__name__)

IDENTITIES = (
    "stirling-length",
    "unit-partition",
    "restricted-binomial",
    "binomial-partition",
    "multiset-count",
    "bernoulli-partition",
)

EVAL_METHODS = ("naive", "incremental", "reduced", "general", "inverted")

_COUNT_RE = re.compile(r"^(\d+)=(\d+)$")


def emit(args: argparse.Namespace, payload: Dict[str, Any], text: str) -> None:
    """Print the JSON payload or the text rendering."""
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def parse_phi(text: str) -> MultPartition:
    """Parse a partition given as part counts, e.g. `{2=1,1=1}` or `2=1,1=1`; empty for 0."""
    body = text.strip().strip("{}").strip()
    if not body:
        return MultPartition(0, ())
    counts: Dict[int, int] = {}
    for item in body.split(","):
        match = _COUNT_RE.match(item.strip())
        if not match:
            raise InvalidInputError(f"Partition entries look like part=count, got {item!r}")
        counts[int(match.group(1))] = counts.get(int(match.group(1)), 0) + int(match.group(2))
    return MultPartition.from_counts(counts)


def build_spec(m: int, q: int, n: int, seq_text: str) -> RecurrentSumSpec:
    """One sequence spec is used for all m positions; otherwise give exactly m, innermost first."""
    seqs = [parse_seq_spec(s) for s in seq_text.split(",") if s.strip()]
    if len(seqs) == 1:
        return RecurrentSumSpec.same(m, q, n, seqs[0])
    if m == 0 and not seqs:
        return RecurrentSumSpec(0, q, n, ())
    return RecurrentSumSpec(m, q, n, tuple(seqs))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_partitions(args: argparse.Namespace) -> int:
    if args.sets:
        partitions = enumerate_set_partitions(args.m)
        emit(args, {"m": args.m, "count": len(partitions), "set_partitions": [p.to_json() for p in partitions]},
             "\n".join(str(p) for p in partitions))
        return 0
    if args.length is not None:
        found = enumerate_partitions_with_length(args.m, args.length)
    else:
        found = enumerate_partitions(args.m)
    emit(args, {"m": args.m, "length": args.length, "count": len(found), "partitions": [k.to_json() for k in found]},
         "\n".join(str(k) for k in found))
    return 0


def cmd_pfunc(args: argparse.Namespace) -> int:
    value = partition_function(args.m)
    emit(args, {"m": args.m, "value": value}, str(value))
    return 0


def cmd_stirling(args: argparse.Namespace) -> int:
    value = stirling_first_unsigned(args.m, args.r)
    emit(args, {"m": args.m, "r": args.r, "value": value}, str(value))
    return 0


def cmd_bernoulli(args: argparse.Namespace) -> int:
    value = bernoulli(args.j)
    emit(args, {"j": args.j, "value": rational_to_json(value)}, format_rational(value))
    return 0


def cmd_bell(args: argparse.Namespace) -> int:
    x = [parse_rational(v) for v in args.x.split(",") if v.strip()] if args.x else []
    value = partial_bell(args.m, args.r, x)
    emit(args, {"m": args.m, "r": args.r, "value": rational_to_json(value)}, format_rational(value))
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    spec = build_spec(args.m, args.q, args.n, args.seq)
    stats = EvaluationStats()
    if args.method == "naive":
        value = eval_naive(spec, stats=stats)
    elif args.method == "incremental":
        value = eval_incremental(spec, stats)
    elif args.method == "reduced":
        value = eval_reduced(spec, stats=stats)
    elif args.method == "general":
        value = eval_general_reduced(spec, stats=stats)
    else:
        value = eval_inverted(spec, InversionMode.parse(args.mode), args.p)
        stats.terms_touched = spec.tuple_count()

    payload = {"value": rational_to_json(value), "method": args.method, "terms_touched": stats.terms_touched}
    if args.method == "inverted":
        payload["mode"] = args.mode
    if args.method == "general":
        payload["note"] = "sum over all orderings of the sequences"
    emit(args, payload, format_rational(value))
    return 0


def cmd_reduce(args: argparse.Namespace) -> int:
    expansion = expand_reduction(args.m)
    emit(args, {"m": args.m, "terms": expansion.to_json()}, str(expansion))
    return 0


def cmd_faulhaber(args: argparse.Namespace) -> int:
    value = recurrent_faulhaber(args.m, args.p, args.n)
    emit(args, {"m": args.m, "p": args.p, "n": args.n, "value": rational_to_json(value)}, format_rational(value))
    return 0


def cmd_zeta_star(args: argparse.Namespace) -> int:
    value = recurrent_zeta_star_even(args.m, args.p)
    digits = args.digits or get_config().numeric_digits
    payload: Dict[str, Any] = {"m": args.m, "p": args.p, "value": value.to_json(), "text": str(value)}
    lines = [str(value)]
    if args.numeric:
        numeric = pipoly_eval_numeric(value, digits)
        payload["numeric"] = numeric
        lines.append(numeric)
    if args.truncate is not None:
        report = truncated_zeta_star(args.m, args.p, args.truncate, digits)
        payload["truncation"] = report.to_dict()
        lines.append(f"n={report.n}: partial {format_rational(report.partial)}, error {report.abs_error}")
    emit(args, payload, "\n".join(lines))
    return 0


def cmd_basel(args: argparse.Namespace) -> int:
    rows = basel_limit_table(args.max_m, args.digits)
    payload: Dict[str, Any] = {"rows": [row.to_dict() for row in rows]}
    lines = [f"m={row.m}: {row.value} ~ {row.numeric} (2 - value = {row.gap})" for row in rows]
    if args.partial_sums:
        sums = basel_partial_sums(args.max_m, args.digits)
        payload["partial_sums"] = [{"n": n, "value": v} for n, v in sums]
        lines.extend(f"sum m=0..{n}: {v}" for n, v in sums)
    emit(args, payload, "\n".join(lines))
    return 0


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(args, name) is None]
    if missing:
        raise InvalidInputError(f"Identity {args.identity} needs {', '.join(missing)}")


def cmd_check(args: argparse.Namespace) -> int:
    identity = args.identity
    payload: Dict[str, Any] = {"identity": identity}
    if identity == "stirling-length":
        _require(args, "m", "r")
        ok = check_stirling_length_identity(args.m, args.r)
    elif identity == "unit-partition":
        _require(args, "m")
        ok = check_unit_partition_identity(args.m)
    elif identity == "restricted-binomial":
        _require(args, "m", "r", "phi")
        ok = check_restricted_binomial_identity(args.m, args.r, parse_phi(args.phi))
    elif identity == "binomial-partition":
        _require(args, "m", "phi")
        ok = check_binomial_partition_identity(args.m, parse_phi(args.phi))
    elif identity == "multiset-count":
        _require(args, "m", "n")
        ok = check_multiset_count_identity(args.m, args.n)
    else:
        _require(args, "m")
        p = args.p if args.p is not None else 1
        if p != 1:
            if not args.experimental:
                raise InvalidInputError("bernoulli-partition at p > 1 is experimental; add --experimental")
            report = bernoulli_partition_report(args.m, p)
            payload.update(report.to_dict())
            emit(args, payload, f"experimental p={p}: {'equal' if report.holds else 'different'} "
                                f"({report.lhs} vs {report.rhs})")
            return 0
        ok = bernoulli_partition_identity(args.m, p)

    payload["holds"] = ok
    emit(args, payload, "true" if ok else "false")
    return 0 if ok else 3


def cmd_verify(args: argparse.Namespace) -> int:
    progress = get_config().progress and not args.json
    report = run_verify(args.suite, args.max_m, args.max_n, args.seed,
                        poison=args.poison, samples=args.samples, progress=progress)
    if args.output:
        save_report(report, args.output)
    emit(args, report.to_dict(), generate_verification_report(report))
    return report.exit_code


def cmd_bench(args: argparse.Namespace) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    seqs = [s for s in args.seq.split(",") if s.strip()]
    if len(seqs) != 1:
        raise InvalidInputError("bench sums a single sequence; pass one --seq spec")
    records = run_bench(args.m, args.q, args.n, methods, parse_seq_spec(seqs[0]))
    emit(args, {"records": [r.to_dict() for r in records]}, generate_bench_report(records))
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document on standard output")
    common.add_argument("--verbose", "-v", action="store_true", help="log at DEBUG level")
    common.add_argument("--quiet", "-q", action="store_true", help="log warnings and errors only")
    common.add_argument("--config", help="settings file (default recsum_config.json or $RECSUM_CONFIG)")
    common.add_argument("--naive-guard", type=int, help="largest tuple count for direct enumeration")

    parser = argparse.ArgumentParser(prog="recsum", description="Exact evaluation of recurrent sums.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partitions", parents=[common], help="list partitions of m")
    p.add_argument("m", type=int)
    p.add_argument("--length", type=int, help="only partitions with this many parts")
    p.add_argument("--sets", action="store_true", help="list set partitions of {1..m} instead")
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("pfunc", parents=[common], help="partition function p(m)")
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_pfunc)

    p = sub.add_parser("stirling", parents=[common], help="unsigned Stirling number of the first kind")
    p.add_argument("m", type=int)
    p.add_argument("r", type=int)
    p.set_defaults(func=cmd_stirling)

    p = sub.add_parser("bernoulli", parents=[common], help="Bernoulli number B_j (B_1 = -1/2)")
    p.add_argument("j", type=int)
    p.set_defaults(func=cmd_bernoulli)

    p = sub.add_parser("bell", parents=[common], help="partial Bell polynomial B_{m,r}(x)")
    p.add_argument("m", type=int)
    p.add_argument("r", type=int)
    p.add_argument("--x", default="", help="comma-separated rationals x_1,x_2,...")
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("eval", parents=[common], help="evaluate a recurrent sum")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seq", required=True,
                   help="pow:<e>, const:<r> or tab:<file.json>; one spec, or m specs innermost first")
    p.add_argument("--method", choices=EVAL_METHODS, default="incremental")
    p.add_argument("--mode", choices=[mode.value for mode in InversionMode], default="full",
                   help="summation order for --method inverted")
    p.add_argument("--p", type=int, help="inner sums rearranged by the partial modes")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("reduce", parents=[common], help="print the power-sum expansion of order m")
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("faulhaber", parents=[common], help="recurrent sum of N^p in closed form")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_faulhaber)

    p = sub.add_parser("zeta-star", parents=[common], help="recurrent sum of 1/N^(2p) to infinity")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--numeric", action="store_true", help="also print a decimal value")
    p.add_argument("--digits", type=int, help="significant digits (default numeric_digits)")
    p.add_argument("--truncate", type=int, help="compare with the finite sum up to N")
    p.set_defaults(func=cmd_zeta_star)

    p = sub.add_parser("basel", parents=[common], help="generalized Basel values for m = 1..max-m")
    p.add_argument("--max-m", type=int, required=True)
    p.add_argument("--digits", type=int)
    p.add_argument("--partial-sums", action="store_true", help="also print sums of the values over m")
    p.set_defaults(func=cmd_basel)

    p = sub.add_parser("check", parents=[common], help="check one partition identity exactly")
    p.add_argument("--identity", choices=IDENTITIES, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--phi", help="partition as part counts, e.g. {2=1,1=1}")
    p.add_argument("--experimental", action="store_true", help="allow bernoulli-partition at p > 1 (report only)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", parents=[common], help="run a seeded verification suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--max-m", type=int, required=True)
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, help="random specs per sweep point (default verify_samples)")
    p.add_argument("--poison", action="store_true", help="corrupt one expansion coefficient (harness self-test)")
    p.add_argument("--output", help="also write the JSON report to this file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", parents=[common], help="count the work of each evaluator")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seq", default="pow:1")
    p.add_argument("--methods", default=",".join(BENCH_METHODS))
    p.set_defaults(func=cmd_bench)

    return parser


def configure(args: argparse.Namespace) -> None:
    """Load settings, apply command-line overrides and set up logging."""
    config = load_config(args.config)
    if args.naive_guard is not None:
        if args.naive_guard < 1:
            raise InvalidInputError(f"--naive-guard must be positive, got {args.naive_guard}")
        config.naive_guard = args.naive_guard
    if args.verbose:
        config.log_level = "DEBUG"
    elif args.quiet:
        config.log_level = "WARNING"
    set_config(config)

    level = getattr(logging, config.log_level, logging.INFO)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s", force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        configure(args)
        return args.func(args)
    except RecurrentSumError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"recsum: error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
