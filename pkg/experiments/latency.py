"""Latency sweeps and their O(1) / O(d) classification.

Each swept value runs one fault-free simulation. Per-op latencies are taken
at steady state (the first few operations of every process are warm-up) and
the worst case is fitted against the swept delay by least squares.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from typing import Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from app.models import DelayModel, ScenarioSpec, WorkloadOp
from app.models_history import History, OpRecord
from experiments.workloads import alternating_workload, build_scenario
from simnet import build_sim, run_to_quiescence
from utils.config import settings
from utils.errors import ClassificationGapError

logger = logging.getLogger(__name__)

OpKind = Literal["read", "write"]


class Classification(str, Enum):
    DELAY_SENSITIVE = "DELAY_SENSITIVE"
    DELAY_INDEPENDENT = "DELAY_INDEPENDENT"


class LatencyStats(BaseModel):
    count: int
    min: int
    median: float
    max: int

    @classmethod
    def of(cls, latencies: Sequence[int]) -> Optional["LatencyStats"]:
        if not latencies:
            return None
        values = np.asarray(latencies)
        return cls(
            count=len(latencies),
            min=int(values.min()),
            median=float(np.median(values)),
            max=int(values.max()),
        )


class LatencyRow(BaseModel):
    d: int
    read: Optional[LatencyStats] = None
    write: Optional[LatencyStats] = None
    convergence_max: Optional[int] = None  # set registers only


class LatencyReport(BaseModel):
    algorithm: str
    seed: int
    sweep_variable: str = "d"
    rows: list[LatencyRow] = Field(default_factory=list)
    read_class: Optional[Classification] = None
    write_class: Optional[Classification] = None
    read_slope: Optional[float] = None
    write_slope: Optional[float] = None

    def classification(self, kind: OpKind) -> Optional[Classification]:
        return self.read_class if kind == "read" else self.write_class


def steady_state(history: History, warmup: Optional[int] = None) -> list[OpRecord]:
    """Client ops with the first `warmup` of each process discarded; probes excluded."""
    warmup = settings.warmup_ops if warmup is None else warmup
    seen = [0] * history.process_count
    kept = []
    for op in history.ops:
        if op.probe:
            continue
        seen[op.process] += 1
        if seen[op.process] > warmup:
            kept.append(op)
    return kept


def latencies(ops: Sequence[OpRecord], kind: OpKind) -> list[int]:
    return [op.latency for op in ops if op.kind == kind and op.completed]


def convergence_max(history: History) -> Optional[int]:
    """Longest gap between a write's invocation and its last remote application."""
    if not history.applies:
        return None
    last_apply: dict[tuple[int, int], int] = {}
    for record in history.applies:
        tag = record.value.tag
        last_apply[tag] = max(last_apply.get(tag, record.time), record.time)
    gaps = [
        last_apply[op.value_in.tag] - op.invoke_time
        for op in history.writes
        if op.value_in and op.value_in.tag in last_apply
    ]
    return max(gaps, default=None)


def classify(
    swept: Sequence[int], maxima: Sequence[int]
) -> tuple[Classification, float]:
    """Fit max latency against the swept delay and name the latency class."""
    slope = round(float(np.polyfit(np.asarray(swept, dtype=float), np.asarray(maxima, dtype=float), 1)[0]), 6)
    if abs(slope) < settings.independent_slope and len(set(maxima)) == 1:
        return Classification.DELAY_INDEPENDENT, slope
    if slope >= settings.sensitive_slope:
        return Classification.DELAY_SENSITIVE, slope
    raise ClassificationGapError(
        f"slope {slope} for maxima {list(maxima)} over {list(swept)} falls between "
        f"{settings.independent_slope} and {settings.sensitive_slope}"
    )


def run_point(spec: ScenarioSpec) -> History:
    """One fault-free run; every operation must terminate."""
    return run_to_quiescence(build_sim(spec), require_termination=True)


def run_points(specs: Sequence[ScenarioSpec], workers: Optional[int] = None) -> list[History]:
    workers = settings.sweep_workers if workers is None else workers
    if workers <= 1 or len(specs) <= 1:
        return [run_point(spec) for spec in specs]
    logger.info(f"Running {len(specs)} simulations on {workers} worker processes")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_point, specs))


def assemble_report(
    algorithm: str,
    seed: int,
    swept: Sequence[int],
    histories: Sequence[History],
    sweep_variable: str = "d",
) -> LatencyReport:
    rows: list[LatencyRow] = []
    maxima: dict[str, list[int]] = {"read": [], "write": []}
    for value, history in zip(swept, histories):
        ops = steady_state(history)
        row = LatencyRow(d=value, convergence_max=convergence_max(history))
        for kind in ("read", "write"):
            stats = LatencyStats.of(latencies(ops, kind))
            setattr(row, kind, stats)
            if stats is not None:
                maxima[kind].append(stats.max)
        rows.append(row)

    report = LatencyReport(algorithm=algorithm, seed=seed, sweep_variable=sweep_variable, rows=rows)
    for kind in ("read", "write"):
        if len(maxima[kind]) != len(swept):
            logger.warning(f"{algorithm}: no steady-state {kind}s at some swept value; unclassified")
            continue
        label, slope = classify(swept, maxima[kind])
        setattr(report, f"{kind}_class", label)
        setattr(report, f"{kind}_slope", slope)
    logger.info(
        f"{algorithm} over {sweep_variable}={list(swept)}: reads {report.read_class and report.read_class.value}"
        f" (slope {report.read_slope}), writes {report.write_class and report.write_class.value}"
        f" (slope {report.write_slope})"
    )
    return report


def latency_sweep(
    algorithm: str,
    d_values: Sequence[int],
    workload: Optional[Sequence[WorkloadOp]] = None,
    seed: int = 0,
    *,
    processes: int = 3,
    uncertainty: Optional[int] = None,
    sites: Optional[list[str]] = None,
    workers: Optional[int] = None,
) -> LatencyReport:
    """Run `algorithm` once per delay value and classify read and write latency.

    With `uncertainty` set the delay model is uniform on [d - u, d] (u capped
    at d); otherwise every message takes exactly d ticks.
    """
    swept = list(d_values)
    if len(set(swept)) < 3:
        raise ValueError(f"a latency sweep needs at least 3 distinct delay values, got {swept}")
    if workload is None:
        workload = alternating_workload(processes)

    specs = []
    for d in swept:
        if uncertainty is None:
            delay = DelayModel(kind="fixed", d=d)
        else:
            delay = DelayModel(kind="uniform", d=d, u=min(uncertainty, d))
        specs.append(build_scenario(
            algorithm, delay, workload, seed, processes=processes, sites=sites,
            name=f"sweep-{algorithm}-d{d}",
        ))
    return assemble_report(algorithm, seed, swept, run_points(specs, workers))
