"""Tests for scenario file validation and the shipped scenario catalogue."""
import json

import pytest

from app.scenarios import SCENARIO_DIR, shipped, validate_scenario
from histories import is_loss_free
from utils.config import Settings
from utils.errors import ScenarioValidationError

SHIPPED = sorted(path.stem for path in SCENARIO_DIR.glob("*.json"))


def write_scenario(tmp_path, **overrides):
    data = {
        "name": "t",
        "processes": {"count": 2},
        "algorithm": {"name": "abd"},
        "delay": {"kind": "fixed", "d": 10},
        "seed": 1,
        "horizon": 100,
    }
    data.update(overrides)
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(data))
    return path


class TestValidateScenario:
    """Tests for validate_scenario and the shipped files."""

    @pytest.mark.unit
    @pytest.mark.parametrize("name", SHIPPED)
    def test_shipped_scenarios_are_valid(self, name):
        """Test every shipped file validates and is named after its stem."""
        spec = shipped(name)
        assert spec.name == name

    @pytest.mark.unit
    def test_catalogue_is_complete(self):
        assert {
            "theorem1_e1", "theorem1_e2", "theorem3_partitioned", "theorem3_healed",
            "availability_partition", "abd_basic", "leader_stale_read", "causal_concurrent",
        } <= set(SHIPPED)

    @pytest.mark.unit
    def test_abd_basic_message_count(self, run_scenario):
        """Test the basic abd run sends eight messages per operation and delivers them all."""
        history = run_scenario(shipped("abd_basic"))
        assert len(history.ops) == 7
        assert len(history.sends) == 56
        assert len(history.deliveries) == 56
        assert is_loss_free(history)

    @pytest.mark.unit
    def test_uncertainty_above_delay_names_the_delay_model(self, tmp_path):
        """Test u > d is reported against the delay model."""
        path = write_scenario(tmp_path, delay={"kind": "uniform", "d": 10, "u": 20})
        with pytest.raises(ScenarioValidationError) as info:
            validate_scenario(path)
        [error] = info.value.errors
        assert error["loc"] == "delay"
        assert "exceeds delay" in error["msg"]

    @pytest.mark.unit
    def test_unknown_algorithm_lists_valid_names(self, tmp_path):
        """Test an unknown algorithm error lists the valid choices."""
        path = write_scenario(tmp_path, algorithm={"name": "paxos"})
        with pytest.raises(ScenarioValidationError) as info:
            validate_scenario(path)
        [error] = info.value.errors
        assert error["loc"] == "algorithm.name"
        assert "'abd'" in error["msg"] and "'local-fallback'" in error["msg"]

    @pytest.mark.unit
    def test_reports_every_error_at_once(self, tmp_path):
        """Test all field errors come back in one exception."""
        path = write_scenario(tmp_path, seed="x", horizon=0, delay={"kind": "fixed", "d": -1})
        with pytest.raises(ScenarioValidationError) as info:
            validate_scenario(path)
        locs = {error["loc"] for error in info.value.errors}
        assert {"seed", "horizon", "delay.d"} <= locs

    @pytest.mark.unit
    def test_parse_error(self, tmp_path):
        """Test broken JSON becomes a validation error."""
        path = tmp_path / "broken.json"
        path.write_text('{"name": ')
        with pytest.raises(ScenarioValidationError, match="parse error"):
            validate_scenario(path)

    @pytest.mark.unit
    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            validate_scenario(tmp_path / "absent.json")


class TestSettings:
    """Tests for CAPSIM_* settings."""

    @pytest.mark.unit
    def test_defaults(self, monkeypatch):
        """Test defaults with no environment overrides."""
        for var in ("CAPSIM_OUTPUT_DIR", "CAPSIM_RETRY_FACTOR", "CAPSIM_CHECK_OP_BOUND"):
            monkeypatch.delenv(var, raising=False)
        settings = Settings(_env_file=None)
        assert settings.output_dir == "out"
        assert settings.retry_factor == 5
        assert settings.check_op_bound == 12
        assert settings.independent_slope == 0.05
        assert settings.sensitive_slope == 0.5

    @pytest.mark.unit
    def test_environment_overrides(self, monkeypatch):
        """Test environment variables override the defaults."""
        monkeypatch.setenv("CAPSIM_OUTPUT_DIR", "/tmp/capsim")
        monkeypatch.setenv("CAPSIM_SWEEP_WORKERS", "4")
        settings = Settings(_env_file=None)
        assert settings.output_dir == "/tmp/capsim"
        assert settings.sweep_workers == 4
