"""Local-fallback register: always terminates, never waits past a timeout.

A write applies locally and broadcasts; a read asks every peer for its
value. Either operation finishes when every peer has answered or when the
timeout fires, using whatever has been heard by then. Under total message
loss this register answers from local state only, which is what makes it a
terminating algorithm in the partitionable model.
"""
import itertools
from dataclasses import dataclass, field
from typing import Any, Literal, Optional

from app.models import ScenarioSpec
from app.models_history import Value
from registers.base import Replica, decode, encode, newer
from utils.config import settings

TIMEOUT = "fallback-timeout"


@dataclass
class _Operation:
    op_id: int
    kind: Literal["read", "write"]
    round: int
    heard: set[int] = field(default_factory=set)


class LocalFallbackReplica(Replica):
    algorithm = "local-fallback"

    def __init__(self, node, spec: ScenarioSpec, initial: Value):
        super().__init__(node, spec, initial)
        self.current = initial
        self.timeout = spec.algorithm.timeout or (
            settings.fallback_timeout_factor * max(1, spec.delay.max_delay)
        )
        self._op: Optional[_Operation] = None
        self._rounds = itertools.count()

    def visible(self) -> Value:
        return self.current

    def write(self, op_id: int, payload: int) -> None:
        value = Value(payload=payload, writer=self.pid, tag=(self.current.tag[0] + 1, self.pid))
        self.node.tag_write(op_id, value)
        self.current = value
        self._start(op_id, "write", {"type": "update", "value": encode(value)})

    def read(self, op_id: int) -> None:
        self._start(op_id, "read", {"type": "query"})

    def _start(self, op_id: int, kind: Literal["read", "write"], message: dict[str, Any]) -> None:
        op = _Operation(op_id=op_id, kind=kind, round=next(self._rounds))
        self._op = op
        self.node.broadcast({**message, "round": op.round})
        self.node.set_timer(self.timeout, TIMEOUT, op.round)
        self._maybe_finish()

    def on_message(self, sender: int, payload: dict[str, Any]) -> None:
        kind = payload["type"]
        if kind == "update":
            self._adopt(decode(payload["value"]))
            self.node.send(sender, {"type": "update-ack", "round": payload["round"]})
        elif kind == "query":
            self.node.send(sender, {
                "type": "query-ack",
                "round": payload["round"],
                "value": encode(self.current),
            })
        elif self._op is not None and payload["round"] == self._op.round:
            if kind == "query-ack":
                self._adopt(decode(payload["value"]))
            self._op.heard.add(sender)
            self._maybe_finish()

    def on_timer(self, timer_id: str, data: Any) -> None:
        if timer_id == TIMEOUT and self._op is not None and self._op.round == data:
            self._finish()

    def _adopt(self, value: Value) -> None:
        if newer(value, self.current):
            self.current = value

    def _maybe_finish(self) -> None:
        if self._op is not None and len(self._op.heard) >= len(self.node.peers):
            self._finish()

    def _finish(self) -> None:
        op, self._op = self._op, None
        if op.kind == "write":
            self.node.complete(op.op_id)
        else:
            self.node.complete(op.op_id, self.current)
