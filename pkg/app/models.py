"""Pydantic models for scenario files."""
from typing import Literal, Optional, get_args

from pydantic import BaseModel, Field, model_validator

AlgorithmName = Literal[
    "abd",
    "leader-fast-read",
    "leader-fast-write",
    "causal",
    "eventual",
    "local-fallback",
]
ALGORITHM_NAMES: tuple[str, ...] = get_args(AlgorithmName)

DEFAULT_SITE = "dc0"


class ProcessLayout(BaseModel):
    """Process count and the datacenter label of each process."""
    count: int = Field(ge=1)
    sites: Optional[list[str]] = None

    @model_validator(mode="after")
    def _sites_match_count(self) -> "ProcessLayout":
        if self.sites is not None and len(self.sites) != self.count:
            raise ValueError(
                f"sites lists {len(self.sites)} labels for {self.count} processes"
            )
        return self

    def site_of(self, pid: int) -> str:
        return self.sites[pid] if self.sites else DEFAULT_SITE


class AlgorithmSpec(BaseModel):
    """Register algorithm selection and its parameters."""
    name: AlgorithmName
    leader: int = Field(default=0, ge=0)
    retry_interval: Optional[int] = Field(default=None, ge=1)
    timeout: Optional[int] = Field(default=None, ge=1)  # local-fallback only


class DelayModel(BaseModel):
    """Network delay between replicas, in virtual ticks."""
    kind: Literal["fixed", "uniform", "topology"]
    d: int = Field(default=0, ge=0)
    u: Optional[int] = Field(default=None, ge=0)  # uniform only; defaults to d
    d_local: Optional[int] = Field(default=None, ge=0)
    d_remote: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _check_kind_fields(self) -> "DelayModel":
        if self.kind == "uniform" and self.u is not None and self.u > self.d:
            raise ValueError(f"uncertainty u={self.u} exceeds delay d={self.d}")
        if self.kind == "topology":
            if self.d_local is None or self.d_remote is None:
                raise ValueError("topology delay needs both d_local and d_remote")
            if self.d_local > self.d_remote:
                raise ValueError(
                    f"d_local={self.d_local} exceeds d_remote={self.d_remote}"
                )
        return self

    @property
    def uncertainty(self) -> int:
        if self.kind != "uniform":
            return 0
        return self.d if self.u is None else self.u

    @property
    def max_delay(self) -> int:
        if self.kind == "topology":
            return self.d_remote or 0
        return self.d


class FaultSpec(BaseModel):
    """A partition or a message-drop fault, active during [start, end)."""
    kind: Literal["partition", "drop"]
    groups: list[list[int]] = Field(default_factory=list)
    start: int = Field(default=0, ge=0)
    end: Optional[int] = None  # None means FOREVER
    retransmit: bool = False
    probability: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    ids: Optional[tuple[int, int]] = None

    @model_validator(mode="after")
    def _check_shape(self) -> "FaultSpec":
        if self.end is not None and self.end <= self.start:
            raise ValueError(f"end={self.end} must be after start={self.start}")
        if self.kind == "partition":
            if len(self.groups) < 2:
                raise ValueError("a partition needs at least two groups")
            if any(not group for group in self.groups):
                raise ValueError("partition groups must not be empty")
            seen: set[int] = set()
            for group in self.groups:
                overlap = seen.intersection(group)
                if overlap or len(set(group)) != len(group):
                    dup = sorted(overlap) or sorted(group)
                    raise ValueError(f"partition groups overlap on process(es) {dup}")
                seen.update(group)
        else:
            if (self.probability is None) == (self.ids is None):
                raise ValueError("a drop fault needs exactly one of probability or ids")
            if self.ids is not None and self.ids[0] > self.ids[1]:
                raise ValueError(f"empty id range {list(self.ids)}")
        return self

    @property
    def forever(self) -> bool:
        return self.end is None

    def active_at(self, now: int) -> bool:
        return self.start <= now and (self.end is None or now < self.end)

    def separates(self, a: int, b: int) -> bool:
        """True if a and b sit in different groups of this partition."""
        side_a = side_b = None
        for index, group in enumerate(self.groups):
            if a in group:
                side_a = index
            if b in group:
                side_b = index
        return side_a is not None and side_b is not None and side_a != side_b


class WorkloadOp(BaseModel):
    """One client request: `op` at `process` at virtual time `time`."""
    time: int = Field(ge=0)
    process: int = Field(ge=0)
    op: Literal["read", "write"]
    value: Optional[int] = None

    @model_validator(mode="after")
    def _write_has_value(self) -> "WorkloadOp":
        if self.op == "write" and self.value is None:
            raise ValueError("write operations need a value")
        return self


class ScenarioSpec(BaseModel):
    """Full declarative description of one simulation."""
    name: str = "scenario"
    processes: ProcessLayout
    algorithm: AlgorithmSpec
    delay: DelayModel
    faults: list[FaultSpec] = Field(default_factory=list)
    workload: list[WorkloadOp] = Field(default_factory=list)
    probes: bool = False
    initial_value: int = 0
    seed: int
    horizon: int = Field(gt=0)

    @model_validator(mode="after")
    def _check_process_ids(self) -> "ScenarioSpec":
        count = self.processes.count
        problems: list[str] = []
        if self.algorithm.leader >= count:
            problems.append(f"algorithm.leader: unknown process {self.algorithm.leader}")
        for index, fault in enumerate(self.faults):
            unknown = sorted(p for group in fault.groups for p in group if p >= count)
            if unknown:
                problems.append(f"faults.{index}.groups: unknown process id(s) {unknown}")
        for index, request in enumerate(self.workload):
            if request.process >= count:
                problems.append(f"workload.{index}.process: unknown process {request.process}")
            if request.time > self.horizon:
                problems.append(f"workload.{index}.time: {request.time} is past the horizon")
        if problems:
            raise ValueError("; ".join(problems))
        return self

    def with_seed(self, seed: int) -> "ScenarioSpec":
        return self.model_copy(update={"seed": seed})

    def retry_interval(self, factor: int) -> int:
        if self.algorithm.retry_interval is not None:
            return self.algorithm.retry_interval
        return max(1, factor * self.delay.max_delay)
