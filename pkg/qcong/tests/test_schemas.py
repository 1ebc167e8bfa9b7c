"""
Test result and configuration schemas, and the settings helpers.
"""
import json
import math
import time

import pytest
from pydantic import ValidationError

from qcong.config import settings
from qcong.errors import ConfigError
from qcong.models.schemas import CheckResult, CheckTask, RunConfig


class TestCheckResult:
    """Test valuation handling and report records."""

    def test_infinite_valuation(self):
        """Test that math.inf is stored as None and reported as 'inf'."""
        result = CheckResult(check="b12", n=5, power=0, holds=True, valuation=math.inf)
        assert result.valuation is None
        assert result.valuation_text() == "inf"
        assert json.loads(result.model_dump_json())["valuation"] == "inf"
        assert result.report_record()["valuation"] == "inf"

    def test_finite_valuation(self):
        """Test float valuations from the cover ring become ints."""
        result = CheckResult(check="a1", n=5, power=2, holds=True, valuation=2.0)
        assert result.valuation == 2
        assert result.report_record(timing=False) == {
            "check": "a1",
            "n": 5,
            "power": 2,
            "params": {},
            "holds": True,
            "valuation": 2,
        }

    def test_record_sorts_params(self):
        """Test params are sorted by key and ms is optional."""
        result = CheckResult(check="carlitz", n=3, power=0, holds=True, params={"b": "-1", "a": "q"}, ms=1.5)
        record = result.report_record()
        assert list(record["params"]) == ["a", "b"]
        assert record["ms"] == 1.5

    def test_timed(self):
        """Test that timed() records a non-negative elapsed time."""
        result = CheckResult.timed("a1", 3, 2, time.perf_counter(), True, 2)
        assert result.ms >= 0
        assert result.params == {}


class TestRunConfig:
    """Test run configuration validation."""

    def test_valid(self):
        """Test defaults."""
        config = RunConfig(checks=["a1"], n_start=1, n_end=9)
        assert config.parallelism == 1
        assert config.timing
        assert not config.fail_fast

    def test_empty_range(self):
        """Test that n_end < n_start is rejected."""
        with pytest.raises(ValidationError):
            RunConfig(checks=["a1"], n_start=9, n_end=1)

    def test_bounds(self):
        """Test the field bounds."""
        with pytest.raises(ValidationError):
            RunConfig(checks=[], n_start=1, n_end=1)
        with pytest.raises(ValidationError):
            RunConfig(checks=["a1"], n_start=1, n_end=1, power=3)
        with pytest.raises(ValidationError):
            RunConfig(checks=["a1"], n_start=1, n_end=1, parallelism=0)

    def test_task_label(self):
        """Test the task label used in logs."""
        assert CheckTask(check="wang-yu", n=7, params={"d": -2}).label() == "wang-yu n=7 d=-2"
        assert CheckTask(check="a1", n=7).label() == "a1 n=7"


class TestSettings:
    """Test the settings helpers."""

    def test_native_power(self):
        """Test stated powers for series, classical and other checks."""
        assert settings.native_power("anew3") == 1
        assert settings.native_power("a2") == 2
        assert settings.native_power("sun-tauraso") == 1
        assert settings.native_power("sun") == 2
        assert settings.native_power("b4") == 2

    def test_qpow_exponents(self):
        """Test the exponents deduplicate in order."""
        assert settings.qpow_exponents(9) == (1, 2, 3, 4, 5)
        assert settings.qpow_exponents(3) == (1, 2, 3, 0)
        assert settings.qpow_exponents(7) == (1, 2, 3, 4)

    def test_env_int(self, monkeypatch):
        """Test integer overrides from the environment."""
        monkeypatch.setenv("QCONG_TEST_INT", "12")
        assert settings._env_int("QCONG_TEST_INT", 5) == 12
        monkeypatch.setenv("QCONG_TEST_INT", " ")
        assert settings._env_int("QCONG_TEST_INT", 5) == 5
        monkeypatch.delenv("QCONG_TEST_INT")
        assert settings._env_int("QCONG_TEST_INT", 5) == 5

    def test_env_int_rejects_bad_values(self, monkeypatch):
        """Test non-integers and values below the minimum."""
        monkeypatch.setenv("QCONG_TEST_INT", "many")
        with pytest.raises(ConfigError):
            settings._env_int("QCONG_TEST_INT", 5)
        monkeypatch.setenv("QCONG_TEST_INT", "1")
        with pytest.raises(ConfigError):
            settings._env_int("QCONG_TEST_INT", 5, minimum=2)
