"""
Test task expansion, the runner and report rendering.
"""
import json

import pytest

from qcong.errors import UsageError
from qcong.models.schemas import CheckResult, CheckTask, OutputFormat, RunConfig
from qcong.services.registry import check_names, expand_tasks, run_task
from qcong.services.report import render, render_csv, render_json, render_text, write_report
from qcong.services.runner import run_tasks


def config(*checks, n="1..=5", **kwargs):
    """RunConfig for an inclusive range written as A..=B."""
    start, end = (int(x) for x in n.split("..="))
    return RunConfig(checks=list(checks), n_start=start, n_end=end, **kwargs)


def result(check, holds=True, n=3, valuation=2):
    return CheckResult(check=check, n=n, power=2, holds=holds, valuation=valuation, detail="exact")


class TestExpandTasks:
    """Test turning names and ranges into tasks."""

    def test_names(self):
        """Test that every documented family is registered."""
        names = check_names()
        for name in ["a1", "wang-yu", "carlitz", "morley-b9", "qpow-lemma", "sun", "q-to-1", "proof-chain-s2"]:
            assert name in names
        assert names == sorted(names)

    def test_unknown_name(self):
        """Test that unknown names raise."""
        with pytest.raises(UsageError):
            expand_tasks(config("a7"))

    def test_no_odd_n(self):
        """Test that a range without odd n yields a usage error."""
        with pytest.raises(UsageError):
            expand_tasks(config("a1", n="4..=4"))

    def test_series_on_odd_n(self):
        """Test series tasks run on odd n with the power override."""
        tasks = expand_tasks(config("a1", n="1..=7", power=1))
        assert [t.n for t in tasks] == [1, 3, 5, 7]
        assert all(t.power == 1 for t in tasks)

    def test_wang_yu_defaults(self):
        """Test every admissible d by default and a fixed d when given."""
        tasks = expand_tasks(config("wang-yu", n="1..=5"))
        assert [t.params["d"] for t in tasks if t.n == 3] == [-1, 0, 1]
        assert len(tasks) == 1 + 3 + 5
        fixed = expand_tasks(config("wang-yu", n="1..=7", d=2))
        assert [t.n for t in fixed] == [5, 7]

    def test_case_steps_skip_other_residue(self):
        """Test b16 only runs for n ≡ 1 (mod 4) and steps start at n = 3."""
        assert [t.n for t in expand_tasks(config("b16", n="1..=13"))] == [5, 9, 13]
        assert [t.n for t in expand_tasks(config("c10", n="1..=11"))] == [3, 7, 11]
        assert [t.n for t in expand_tasks(config("b4", n="1..=5"))] == [3, 5]

    def test_k_out_of_range_skipped(self):
        """Test that k > n - 1 drops the smaller n."""
        tasks = expand_tasks(config("b3", n="3..=9", k=5))
        assert [t.n for t in tasks] == [7, 9]
        assert tasks[0].params == {"k": 5}

    def test_carlitz(self):
        """Test the grid default, explicit a/b and a missing b."""
        tasks = expand_tasks(config("carlitz", n="0..=2"))
        assert [t.n for t in tasks] == [0, 1, 2]
        assert tasks[0].params == {}
        tasks = expand_tasks(config("carlitz", n="2..=2", a="q", b="-1", base_power=2))
        assert tasks[0].params == {"a": "q", "b": "-1", "base_power": 2}
        with pytest.raises(UsageError):
            expand_tasks(config("carlitz", a="q"))

    def test_classical_on_primes(self):
        """Test classical checks over odd primes and p^r."""
        tasks = expand_tasks(config("sun", n="1..=10", r=2))
        assert [t.params["p"] for t in tasks] == [3, 5, 7]
        assert [t.n for t in tasks] == [9, 25, 49]

    def test_q_to_1(self):
        """Test one task per target and prime."""
        tasks = expand_tasks(config("q-to-1", n="3..=7"))
        assert len(tasks) == 12
        assert tasks[0].params == {"target": "anew3", "p": 3, "r": 1}

    def test_proof_chains_and_specializations(self):
        """Test chain tasks on odd n and one random-specialisation task."""
        assert [t.n for t in expand_tasks(config("proof-chain-s3", n="1..=5"))] == [1, 3, 5]
        tasks = expand_tasks(config("carlitz-specialization", n="1..=6", count=5, seed=1))
        assert len(tasks) == 1
        assert tasks[0].n == 6
        assert tasks[0].params == {"count": 5, "seed": 1}


class TestRunTask:
    """Test running single tasks."""

    def test_series_task(self, cache):
        """Test a Wang-Yu task carries d into the result."""
        results = run_task(CheckTask(check="wang-yu", n=7, params={"d": -3}), cache)
        assert len(results) == 1
        assert results[0].holds
        assert results[0].params == {"d": -3}

    def test_chain_task(self, cache):
        """Test a chain task returns one result per step."""
        results = run_task(CheckTask(check="proof-chain-s3", n=5), cache)
        assert results[-1].check == "c1"
        assert all(r.holds for r in results)

    def test_classical_and_random_tasks(self):
        """Test parameter conversion for classical and random tasks."""
        assert run_task(CheckTask(check="sun-tauraso", n=5, params={"p": 5, "r": 1}))[0].holds
        (random,) = run_task(CheckTask(check="carlitz-specialization", n=4, params={"count": 5, "seed": 2}))
        assert random.holds

    def test_unknown(self):
        """Test that an unregistered name raises."""
        with pytest.raises(UsageError):
            run_task(CheckTask(check="nope", n=1))


class TestRunTasks:
    """Test serial and pooled execution."""

    def test_parallel_matches_serial(self, cache):
        """Test identical reports for parallelism 1 and 2."""
        tasks = expand_tasks(config("a1", "anew4", "b5", n="1..=9"))
        serial = run_tasks(tasks, 1, cache)
        pooled = run_tasks(tasks, 2, cache)
        assert render_json(serial, timing=False) == render_json(pooled, timing=False)

    def test_fail_fast(self, mocker):
        """Test the output stops at the first failure."""
        outcomes = [[result("a1")], [result("a1", holds=False, valuation=1), result("a1")], [result("a1")]]
        mocked = mocker.patch("qcong.services.runner.run_task", side_effect=outcomes)
        tasks = [CheckTask(check="a1", n=n) for n in (1, 3, 5)]
        results = run_tasks(tasks, 1, fail_fast=True)
        assert [r.holds for r in results] == [True, False]
        assert mocked.call_count == 2


class TestReport:
    """Test the three report formats."""

    def test_text(self):
        """Test the table marks and summary line."""
        text = render_text([result("a1"), result("b1", holds=False, valuation=1)])
        assert "✓" in text and "✗" in text
        assert text.endswith("2 checks, 1 failed\n")
        assert render_text([]) == "no results\n"

    def test_json_lines(self):
        """Test one JSON object per line with an infinite valuation as 'inf'."""
        lines = render_json([result("a1"), result("b12", valuation=None)], timing=False).splitlines()
        assert len(lines) == 2
        assert json.loads(lines[1])["valuation"] == "inf"
        assert "ms" not in json.loads(lines[0])

    def test_csv(self):
        """Test the CSV header and the flattened params column."""
        res = CheckResult(check="wang-yu", n=7, power=1, holds=True, valuation=1, params={"d": 2})
        text = render_csv([res], timing=False)
        header, row = text.splitlines()
        assert header == "check,n,power,params,holds,valuation"
        assert row == "wang-yu,7,1,d=2,True,1"

    def test_render_dispatch(self):
        """Test format dispatch by enum and string."""
        results = [result("a1")]
        assert render(results, OutputFormat.JSON) == render_json(results)
        assert render(results, "csv") == render_csv(results)

    def test_write_report(self, tmp_path, capsys):
        """Test writing to a file and to stdout."""
        path = tmp_path / "report.txt"
        write_report("hello\n", str(path))
        assert path.read_text(encoding="utf-8") == "hello\n"
        write_report("to stdout\n")
        assert capsys.readouterr().out == "to stdout\n"
