"""Multi-writer ABD quorum register (linearizable).

Both operations run two majority round trips: a query phase that learns the
highest tag, then an update phase that stores the chosen value at a majority.
Reads write back what they return, so later reads never go backwards.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Literal, Optional

from app.models import ScenarioSpec
from app.models_history import Tag, Value
from registers.base import Replica, decode, encode, newer

logger = logging.getLogger(__name__)


@dataclass
class _Operation:
    op_id: int
    kind: Literal["read", "write"]
    payload: Optional[int]
    round: int
    phase: Literal["query", "update"] = "query"
    replies: dict[int, Value] = field(default_factory=dict)
    acks: set[int] = field(default_factory=set)
    chosen: Optional[Value] = None


class AbdReplica(Replica):
    algorithm = "abd"

    def __init__(self, node, spec: ScenarioSpec, initial: Value):
        super().__init__(node, spec, initial)
        self.current = initial
        self.adopted: list[Tag] = []
        self._op: Optional[_Operation] = None
        self._rounds = itertools.count()

    def visible(self) -> Value:
        return self.current

    def write(self, op_id: int, payload: int) -> None:
        self._start(op_id, "write", payload)

    def read(self, op_id: int) -> None:
        self._start(op_id, "read", None)

    def _start(self, op_id: int, kind: Literal["read", "write"], payload: Optional[int]) -> None:
        op = _Operation(op_id=op_id, kind=kind, payload=payload, round=next(self._rounds))
        op.replies[self.pid] = self.current
        self._op = op
        self.node.broadcast({"type": "query", "round": op.round})
        self._advance()

    def on_message(self, sender: int, payload: dict[str, Any]) -> None:
        kind = payload["type"]
        op = self._op
        if kind == "query":
            self.node.send(sender, {
                "type": "query-ack",
                "round": payload["round"],
                "value": encode(self.current),
            })
        elif kind == "update":
            self._store(decode(payload["value"]))
            self.node.send(sender, {"type": "update-ack", "round": payload["round"]})
        elif op is None or payload["round"] != op.round:
            return  # reply to an operation that already finished
        elif kind == "query-ack" and op.phase == "query":
            op.replies[sender] = decode(payload["value"])
            self._advance()
        elif kind == "update-ack" and op.phase == "update":
            op.acks.add(sender)
            self._advance()

    def _store(self, value: Value) -> None:
        if newer(value, self.current):
            self.current = value

    def _advance(self) -> None:
        op = self._op
        majority = self.node.majority
        if op.phase == "query" and len(op.replies) >= majority:
            highest = max(op.replies.values(), key=lambda v: v.tag)
            if op.kind == "write":
                tag = (highest.tag[0] + 1, self.pid)
                op.chosen = Value(payload=op.payload, writer=self.pid, tag=tag)
                self.node.tag_write(op.op_id, op.chosen)
            else:
                op.chosen = highest
            self._store(op.chosen)
            op.phase = "update"
            op.round = next(self._rounds)
            op.acks = {self.pid}
            self.node.broadcast({"type": "update", "round": op.round, "value": encode(op.chosen)})
            self._advance()
        elif op.phase == "update" and len(op.acks) >= majority:
            self._op = None
            logger.debug(f"p{self.pid} abd {op.kind} op {op.op_id} settled on tag {op.chosen.tag}")
            if op.kind == "write":
                self.node.complete(op.op_id)
            else:
                self.adopted.append(op.chosen.tag)
                self.node.complete(op.op_id, op.chosen)
