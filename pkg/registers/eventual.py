"""Eventually consistent grow-only set register: broadcast every write, merge by union."""
import itertools
from typing import Any

from app.models import ScenarioSpec
from app.models_history import Value
from registers.base import SetReplica, decode, encode


class EventualReplica(SetReplica):
    algorithm = "eventual"

    def __init__(self, node, spec: ScenarioSpec, initial: Value):
        super().__init__(node, spec, initial)
        self._counter = itertools.count(1)

    def write(self, op_id: int, payload: int) -> None:
        value = Value(payload=payload, writer=self.pid, tag=(next(self._counter), self.pid))
        self.node.tag_write(op_id, value)
        self.store.add(value)
        self.node.broadcast({"type": "gossip", "value": encode(value)})
        self.node.complete(op_id)

    def on_message(self, sender: int, payload: dict[str, Any]) -> None:
        value = decode(payload["value"])
        if value not in self.store:
            self.store.add(value)
            self.node.record_apply(value)
