"""Shared pytest fixtures for all tests."""
from typing import Any, Optional, Union

import pytest

from app.models import ScenarioSpec
from app.models_history import History
from simnet import build_sim, run_to_quiescence
from tests.fixtures.histories import HistoryBuilder


def scenario(
    algorithm: Union[str, dict[str, Any]] = "abd",
    processes: Union[int, dict[str, Any]] = 3,
    d: int = 10,
    workload: Optional[list[dict[str, Any]]] = None,
    faults: Optional[list[dict[str, Any]]] = None,
    seed: int = 1,
    horizon: int = 5000,
    **extra: Any,
) -> ScenarioSpec:
    """Small scenario with a fixed delay model unless `delay` is given."""
    data: dict[str, Any] = {
        "name": "test-scenario",
        "processes": processes if isinstance(processes, dict) else {"count": processes},
        "algorithm": algorithm if isinstance(algorithm, dict) else {"name": algorithm},
        "delay": {"kind": "fixed", "d": d},
        "faults": faults or [],
        "workload": workload or [],
        "seed": seed,
        "horizon": horizon,
    }
    data.update(extra)
    return ScenarioSpec.model_validate(data)


def run(spec: ScenarioSpec, require_termination: bool = False) -> History:
    return run_to_quiescence(build_sim(spec), require_termination=require_termination)


@pytest.fixture
def make_scenario():
    """Factory for small ScenarioSpecs."""
    return scenario


@pytest.fixture
def run_scenario():
    """Build and run a scenario to quiescence."""
    return run


@pytest.fixture
def history_builder():
    """Factory for HistoryBuilder instances."""
    return HistoryBuilder


@pytest.fixture
def output_dir(tmp_path, mocker):
    """Point the default output directory at a temporary path."""
    mocker.patch("utils.config.settings.output_dir", str(tmp_path / "out"))
    return tmp_path / "out"
