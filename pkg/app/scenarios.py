"""Scenario file ingestion and the shipped scenario catalogue."""
import json
import logging
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from app.models import ScenarioSpec
from utils.errors import ScenarioValidationError

logger = logging.getLogger(__name__)

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def validate_scenario(path: Union[str, Path]) -> ScenarioSpec:
    """Parse and schema-check a scenario file, reporting every error at once."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ScenarioValidationError(
            str(path), [{"loc": f"line {e.lineno}", "msg": f"parse error: {e.msg}"}]
        ) from e
    try:
        spec = ScenarioSpec.model_validate(raw)
    except ValidationError as e:
        errors = [
            {"loc": ".".join(str(part) for part in err["loc"]) or "(root)", "msg": err["msg"]}
            for err in e.errors()
        ]
        logger.error(f"Scenario {path} failed validation with {len(errors)} error(s)")
        raise ScenarioValidationError(str(path), errors) from e
    logger.debug(f"Loaded scenario '{spec.name}' from {path}")
    return spec


def shipped(name: str) -> ScenarioSpec:
    """Load one of the scenario files under scenarios/ by stem."""
    return validate_scenario(SCENARIO_DIR / f"{name}.json")
