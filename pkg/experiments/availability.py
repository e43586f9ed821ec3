"""SLA-style availability: the share of requests answered within a latency bound."""
import logging
from typing import Optional, Sequence

from pydantic import BaseModel, Field

from app.models import ScenarioSpec
from app.models_history import History
from simnet import build_sim, run_to_quiescence
from utils.config import settings

logger = logging.getLogger(__name__)


class AvailabilityReport(BaseModel):
    algorithm: str
    latency_bound: int
    window_start: int = 0
    window_end: Optional[int] = None  # None means up to quiescence
    invoked: int
    within_bound: int
    fraction_within_bound: float = Field(ge=0.0, le=1.0)


def availability_report(
    history: History,
    sla_bound: Optional[int] = None,
    window: Optional[tuple[int, Optional[int]]] = None,
) -> AvailabilityReport:
    """Fraction of client requests in `window` that completed within `sla_bound`.

    Latency is measured from the time the client issued the request, so time
    spent queued behind a blocked operation counts against the bound. Requests
    that never completed, or never started, are misses.
    """
    sla_bound = settings.default_sla if sla_bound is None else sla_bound
    start, end = window or (0, None)

    def in_window(time: int) -> bool:
        return start <= time and (end is None or time < end)

    invoked = within = 0
    for op in history.ops:
        if op.probe or not in_window(op.requested_time):
            continue
        invoked += 1
        if op.completed and op.response_time - op.requested_time <= sla_bound:
            within += 1
    invoked += sum(1 for record in history.unstarted if in_window(record.requested_time))

    fraction = within / invoked if invoked else 1.0
    logger.info(
        f"{history.algorithm}: {within}/{invoked} requests within {sla_bound} ticks "
        f"({fraction:.3f})"
    )
    return AvailabilityReport(
        algorithm=history.algorithm,
        latency_bound=sla_bound,
        window_start=start,
        window_end=end,
        invoked=invoked,
        within_bound=within,
        fraction_within_bound=fraction,
    )


def availability_experiment(
    spec: ScenarioSpec,
    sla_bound: Optional[int] = None,
    algorithms: Sequence[str] = ("abd", "causal"),
    window: Optional[tuple[int, Optional[int]]] = None,
) -> list[AvailabilityReport]:
    """Run one scenario under each algorithm and report availability for each."""
    reports = []
    for name in algorithms:
        variant = spec.model_copy(update={
            "algorithm": spec.algorithm.model_copy(update={"name": name}),
            "name": f"{spec.name}-{name}",
        })
        history = run_to_quiescence(build_sim(variant))
        reports.append(availability_report(history, sla_bound, window))
    return reports
