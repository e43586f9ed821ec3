"""Report files: one CSV row per (swept value, op kind) plus a JSON summary."""
import csv
import json
import logging
from pathlib import Path
from typing import Union

from pydantic import BaseModel

from experiments.latency import LatencyReport

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "algorithm",
    "sweep_variable",
    "value",
    "op",
    "count",
    "min",
    "median",
    "max",
    "classification",
    "convergence_max",
]


def latency_rows(report: LatencyReport) -> list[dict]:
    rows = []
    for row in report.rows:
        for kind in ("read", "write"):
            stats = getattr(row, kind)
            if stats is None:
                continue
            label = report.classification(kind)
            rows.append({
                "algorithm": report.algorithm,
                "sweep_variable": report.sweep_variable,
                "value": row.d,
                "op": kind,
                "count": stats.count,
                "min": stats.min,
                "median": stats.median,
                "max": stats.max,
                "classification": label.value if label else "",
                "convergence_max": "" if row.convergence_max is None else row.convergence_max,
            })
    return rows


def write_latency_csv(reports: Union[LatencyReport, list[LatencyReport]], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(reports, LatencyReport):
        reports = [reports]
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for report in reports:
            writer.writerows(latency_rows(report))
    logger.info(f"Wrote latency CSV to {path}")
    return path


def dump_json(model: Union[BaseModel, list[BaseModel]]) -> str:
    if isinstance(model, list):
        data = [item.model_dump(mode="json") for item in model]
    else:
        data = model.model_dump(mode="json")
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def write_json(model: Union[BaseModel, list[BaseModel]], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(model), encoding="utf-8")
    logger.info(f"Wrote JSON report to {path}")
    return path
