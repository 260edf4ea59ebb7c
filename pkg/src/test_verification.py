"""
Tests for the verification suites, the bench harness and the command line.
"""

import json

import pytest

from src.benchmark import BENCH_METHODS, generate_bench_report, run_bench
from src.cli import main, parse_phi
from src.engine import Power
from src.errors import InvalidInputError
from src.partitions import MultPartition
from src.verification import (
    SUITES,
    VerificationRunner,
    generate_verification_report,
    run_verify,
    save_report,
)


class TestVerify:
    @pytest.mark.parametrize("suite", SUITES)
    def test_every_suite_passes(self, suite):
        report = run_verify(suite, max_m=3, max_n=3, seed=7, samples=3, progress=False)
        assert report.cases_run > 0
        assert report.passed, generate_verification_report(report)
        assert report.exit_code == 0

    def test_reduction_suite_at_full_size(self):
        report = run_verify("reduction", max_m=5, max_n=8, seed=42, samples=20, progress=False)
        assert report.passed
        assert report.cases_run == 6 * 2 * 8 * 20

    def test_partition_identities_sweep(self):
        report = run_verify("partition-identities", max_m=8, max_n=8, seed=0, progress=False)
        assert report.passed

    @pytest.mark.parametrize("suite", ["reduction", "faulhaber", "basel-general"])
    def test_poison_is_detected(self, suite):
        report = run_verify(suite, max_m=3, max_n=3, seed=1, poison=True, samples=2, progress=False)
        assert report.poisoned
        assert len(report.failures) >= 1
        assert report.exit_code == 3
        assert "Poisoned" in generate_verification_report(report)

    def test_poison_rejected_for_other_suites(self):
        with pytest.raises(InvalidInputError):
            run_verify("variation", max_m=2, max_n=2, seed=0, poison=True, progress=False)

    def test_unknown_suite(self):
        with pytest.raises(InvalidInputError):
            run_verify("nonsense", max_m=2, max_n=2, seed=0, progress=False)

    def test_same_seed_same_report(self):
        first = run_verify("inversion", max_m=2, max_n=3, seed=11, samples=3, progress=False)
        second = run_verify("inversion", max_m=2, max_n=3, seed=11, samples=3, progress=False)
        assert json.dumps(first.to_dict()) == json.dumps(second.to_dict())

    def test_random_tabulated_is_seeded(self):
        a = VerificationRunner(2, 2, seed=5).random_tabulated(1, 6)
        b = VerificationRunner(2, 2, seed=5).random_tabulated(1, 6)
        assert a == b
        assert all(-5 <= v <= 5 for v in a.values)
        assert a.first_index == 1 and a.last_index == 6

    def test_save_report(self, tmp_path):
        report = run_verify("basel-general", max_m=3, max_n=2, seed=3, progress=False)
        path = save_report(report, str(tmp_path / "report.json"))
        with open(path, "r", encoding="utf-8") as f:
            saved = json.load(f)
        assert saved["suite"] == "basel-general"
        assert saved["passed"] is True


class TestBench:
    def test_operation_counts_at_order_six(self):
        records = {r.method: r for r in run_bench(6, 1, 30, BENCH_METHODS, Power(1))}
        assert records["naive"].terms_touched == 1623160
        assert records["reduced"].terms_touched == 11
        assert records["incremental"].terms_touched == 30 * 21
        assert len({r.value for r in records.values()}) == 1

    def test_order_zero_counts_one_term(self):
        records = run_bench(0, 1, 5, BENCH_METHODS, Power(1))
        assert [r.terms_touched for r in records] == [1, 1, 1]
        assert all(r.value == 1 for r in records)

    def test_order_one_touches_each_index(self):
        records = {r.method: r for r in run_bench(1, 3, 9, BENCH_METHODS, Power(2))}
        assert records["naive"].terms_touched == 7
        assert records["incremental"].terms_touched == 7
        assert records["reduced"].power_sum_updates == 7
        summary = [{k: r.to_dict()[k] for k in ("method", "terms_touched", "power_sum_updates")}
                   for r in records.values()]
        assert summary == [
            {"method": "naive", "terms_touched": 7, "power_sum_updates": 0},
            {"method": "incremental", "terms_touched": 7, "power_sum_updates": 0},
            {"method": "reduced", "terms_touched": 1, "power_sum_updates": 7},
        ]

    def test_guard_skips_naive_only(self):
        records = run_bench(4, 1, 10, BENCH_METHODS, Power(1), guard=10)
        naive = records[0]
        assert naive.skipped and naive.value is None
        assert not any(r.skipped for r in records[1:])
        assert "skipped" in generate_bench_report(records)

    def test_unknown_method(self):
        with pytest.raises(InvalidInputError):
            run_bench(2, 1, 3, ["naive", "magic"], Power(1))


class TestCommandLine:
    def test_eval_json(self, capsys):
        code = main(["eval", "--m", "2", "--q", "1", "--n", "2", "--seq", "pow:1", "--method", "reduced", "--json"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["value"] == "7/1"
        assert payload["method"] == "reduced"
        assert payload["terms_touched"] == 2

    def test_eval_distinct_sequences(self, capsys, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        a.write_text(json.dumps([1, 2]))
        b.write_text(json.dumps([1, 3]))
        seqs = f"tab:{a},tab:{b}"
        assert main(["eval", "--m", "2", "--q", "1", "--n", "2", "--seq", seqs, "--method", "general"]) == 0
        assert capsys.readouterr().out.strip() == "19"
        assert main(["eval", "--m", "2", "--q", "1", "--n", "2", "--seq", seqs,
                     "--method", "inverted", "--mode", "partial-rotate", "--p", "1"]) == 0
        assert capsys.readouterr().out.strip() == "10"

    def test_invalid_input_exit_code(self):
        assert main(["eval", "--m", "2", "--q", "3", "--n", "1", "--seq", "pow:1"]) == 2

    def test_guard_exit_code(self):
        code = main(["eval", "--m", "3", "--q", "1", "--n", "4", "--seq", "const:1",
                     "--method", "naive", "--naive-guard", "5"])
        assert code == 4

    def test_small_commands(self, capsys):
        assert main(["pfunc", "6"]) == 0
        assert main(["stirling", "3", "2"]) == 0
        assert main(["bernoulli", "12"]) == 0
        assert main(["bell", "4", "2", "--x", "1,2,3"]) == 0
        assert capsys.readouterr().out.split() == ["11", "3", "-691/2730", "24"]

    def test_partitions(self, capsys):
        assert main(["partitions", "3", "--sets"]) == 0
        assert capsys.readouterr().out.split() == ["{1,2,3}", "{1,2|3}", "{1,3|2}", "{1|2,3}", "{1|2|3}"]
        assert main(["partitions", "4", "--length", "2", "--json"]) == 0
        assert json.loads(capsys.readouterr().out)["partitions"] == [[1, 0, 1, 0], [0, 2, 0, 0]]

    def test_zeta_star(self, capsys):
        assert main(["zeta-star", "--m", "4", "--p", "1", "--numeric", "--digits", "10"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out == ["127/604800 * pi^8", "1.992466004"]

    def test_check(self, capsys):
        assert main(["check", "--identity", "stirling-length", "--m", "4", "--r", "2"]) == 0
        assert main(["check", "--identity", "restricted-binomial", "--m", "4", "--r", "2", "--phi", "{2=1}"]) == 0
        assert capsys.readouterr().out.split() == ["true", "true"]
        assert main(["check", "--identity", "multiset-count", "--m", "3"]) == 2

    def test_check_experimental_bernoulli(self, capsys):
        assert main(["check", "--identity", "bernoulli-partition", "--m", "2", "--p", "2"]) == 2
        assert main(["check", "--identity", "bernoulli-partition", "--m", "2", "--p", "2",
                     "--experimental", "--json"]) == 0
        assert json.loads(capsys.readouterr().out)["experimental"] is True

    def test_verify_poison_exit_code(self, capsys):
        code = main(["verify", "--suite", "reduction", "--max-m", "2", "--max-n", "3", "--seed", "1",
                     "--samples", "2", "--poison", "--json"])
        assert code == 3
        assert json.loads(capsys.readouterr().out)["passed"] is False

    def test_bench(self, capsys):
        assert main(["bench", "--m", "3", "--n", "6", "--json"]) == 0
        records = json.loads(capsys.readouterr().out)["records"]
        assert [r["method"] for r in records] == list(BENCH_METHODS)
        assert records[0]["terms_touched"] == 56

    def test_parse_phi(self):
        assert parse_phi("{2=1,1=1}") == MultPartition.from_counts({2: 1, 1: 1})
        assert parse_phi("") == MultPartition(0, ())
        with pytest.raises(InvalidInputError):
            parse_phi("2:1")
