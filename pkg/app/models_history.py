"""Pydantic models for recorded executions and checker verdicts."""
from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

Tag = tuple[int, int]  # (logical timestamp, writer id)

INITIAL_TAG: Tag = (0, -1)


class Value(BaseModel):
    """A register value. `tag` identifies the write that produced it."""
    model_config = ConfigDict(frozen=True)

    payload: int
    writer: Optional[int] = None  # None for the initial value
    tag: Optional[Tag] = None  # None until the algorithm has ordered the write

    @classmethod
    def initial(cls, payload: int) -> "Value":
        return cls(payload=payload, writer=None, tag=INITIAL_TAG)

    @property
    def is_initial(self) -> bool:
        return self.tag == INITIAL_TAG


ValueOut = Union[Value, list[Value]]


class OpRecord(BaseModel):
    """One read or write as observed by its client."""
    model_config = ConfigDict(frozen=True)

    op_id: int
    process: int
    kind: Literal["read", "write"]
    value_in: Optional[Value] = None
    value_out: Optional[ValueOut] = None
    requested_time: int
    invoke_time: int
    response_time: Optional[int] = None
    invoke_seq: int = 0
    response_seq: Optional[int] = None
    probe: bool = False

    @model_validator(mode="after")
    def _response_after_invoke(self) -> "OpRecord":
        if self.response_time is not None and self.response_time < self.invoke_time:
            raise ValueError(
                f"op {self.op_id} responds at {self.response_time} before its "
                f"invocation at {self.invoke_time}"
            )
        return self

    @property
    def completed(self) -> bool:
        return self.response_time is not None

    @property
    def latency(self) -> Optional[int]:
        if self.response_time is None:
            return None
        return self.response_time - self.invoke_time

    @property
    def set_valued(self) -> bool:
        return isinstance(self.value_out, list)


class SendRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    msg_id: int
    sender: int
    receiver: int
    payload: dict[str, Any]
    send_time: int
    seq: int = 0


class DeliverRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    msg_id: int
    sender: int
    receiver: int
    payload: dict[str, Any]
    deliver_time: int
    seq: int = 0


class ApplyRecord(BaseModel):
    """A replica made a remote write visible to its local reads."""
    model_config = ConfigDict(frozen=True)

    process: int
    value: Value
    time: int
    seq: int = 0


class FaultRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["partition", "drop"]
    groups: list[list[int]] = Field(default_factory=list)
    start: int = 0
    end: Optional[int] = None
    retransmit: bool = False
    probability: Optional[float] = None
    ids: Optional[tuple[int, int]] = None

    @property
    def permanent(self) -> bool:
        return self.kind == "partition" and self.end is None


class UnstartedRecord(BaseModel):
    """A workload request still queued behind an unfinished operation."""
    model_config = ConfigDict(frozen=True)

    process: int
    kind: Literal["read", "write"]
    value: Optional[int] = None
    requested_time: int


class History(BaseModel):
    """A recorded execution: client operations plus the message log."""
    model_config = ConfigDict(frozen=True)

    algorithm: str
    process_count: int
    initial_value: Value
    horizon: int
    ops: list[OpRecord] = Field(default_factory=list)
    sends: list[SendRecord] = Field(default_factory=list)
    deliveries: list[DeliverRecord] = Field(default_factory=list)
    applies: list[ApplyRecord] = Field(default_factory=list)
    faults: list[FaultRecord] = Field(default_factory=list)
    unstarted: list[UnstartedRecord] = Field(default_factory=list)
    partition_permanent: bool = False
    complete: bool = True

    @property
    def unfinished(self) -> list[int]:
        return [op.op_id for op in self.ops if not op.completed]

    @property
    def writes(self) -> list[OpRecord]:
        return [op for op in self.ops if op.kind == "write"]

    @property
    def reads(self) -> list[OpRecord]:
        return [op for op in self.ops if op.kind == "read"]

    def op(self, op_id: int) -> OpRecord:
        for record in self.ops:
            if record.op_id == op_id:
                return record
        raise KeyError(op_id)


class Witness(BaseModel):
    """Evidence for a satisfied property."""
    kind: Literal["serialization", "partitioned", "convergence", "causal-closure"]
    order: list[int] = Field(default_factory=list)


class Verdict(BaseModel):
    """Checker output: exactly one of witness or counterexample is present."""
    property: str
    satisfied: bool
    witness: Optional[Witness] = None
    counterexample: Optional[dict[str, Any]] = None

    @model_validator(mode="after")
    def _one_side(self) -> "Verdict":
        if self.satisfied and (self.witness is None or self.counterexample is not None):
            raise ValueError("a satisfied verdict carries a witness and no counterexample")
        if not self.satisfied and (self.counterexample is None or self.witness is not None):
            raise ValueError("a violated verdict carries a counterexample and no witness")
        return self
