"""Workload generators and scenario builders shared by the experiments."""
import random
from typing import Optional, Sequence

from app.models import (
    AlgorithmSpec,
    DelayModel,
    FaultSpec,
    ProcessLayout,
    ScenarioSpec,
    WorkloadOp,
)

SWEEP_SPACING = 1000


def alternating_workload(
    processes: int,
    ops_per_process: int = 6,
    spacing: int = SWEEP_SPACING,
    first_value: int = 1,
) -> list[WorkloadOp]:
    """Each process alternates writes and reads, neighbours out of phase."""
    ops: list[WorkloadOp] = []
    value = first_value
    for round_ in range(ops_per_process):
        for pid in range(processes):
            time = round_ * spacing + pid
            if (round_ + pid) % 2 == 0:
                ops.append(WorkloadOp(time=time, process=pid, op="write", value=value))
                value += 1
            else:
                ops.append(WorkloadOp(time=time, process=pid, op="read"))
    return ops


def random_workload(
    rng: random.Random,
    processes: int,
    max_ops: int,
    max_time: int,
    first_value: int = 1,
) -> list[WorkloadOp]:
    """Up to `max_ops` requests at random times and processes."""
    count = rng.randint(1, max_ops)
    ops = []
    for index in range(count):
        pid = rng.randrange(processes)
        time = rng.randint(0, max_time)
        if rng.random() < 0.5:
            ops.append(WorkloadOp(time=time, process=pid, op="write", value=first_value + index))
        else:
            ops.append(WorkloadOp(time=time, process=pid, op="read"))
    return sorted(ops, key=lambda op: op.time)


def default_horizon(workload: Sequence[WorkloadOp], max_delay: int) -> int:
    last = max((op.time for op in workload), default=0)
    return last + 200 * max(1, max_delay) + 1000


def build_scenario(
    algorithm: str,
    delay: DelayModel,
    workload: Sequence[WorkloadOp],
    seed: int,
    processes: int = 3,
    sites: Optional[list[str]] = None,
    faults: Sequence[FaultSpec] = (),
    probes: bool = False,
    horizon: Optional[int] = None,
    name: Optional[str] = None,
    leader: int = 0,
) -> ScenarioSpec:
    return ScenarioSpec(
        name=name or f"{algorithm}-d{delay.max_delay}-s{seed}",
        processes=ProcessLayout(count=processes, sites=sites),
        algorithm=AlgorithmSpec(name=algorithm, leader=leader),
        delay=delay,
        faults=list(faults),
        workload=list(workload),
        probes=probes,
        seed=seed,
        horizon=horizon or default_horizon(workload, delay.max_delay),
    )
