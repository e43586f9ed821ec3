"""Causally consistent grow-only register using vector clocks.

Writes apply locally and complete at once, then broadcast with the writer's
vector clock. A receiver buffers an update until it has applied everything
the update depends on.
"""
import logging
from typing import Any

from app.models import ScenarioSpec
from app.models_history import Value
from registers.base import SetReplica, decode, encode

logger = logging.getLogger(__name__)


class CausalReplica(SetReplica):
    algorithm = "causal"

    def __init__(self, node, spec: ScenarioSpec, initial: Value):
        super().__init__(node, spec, initial)
        self.clock: list[int] = [0] * node.n
        self.buffer: list[tuple[int, list[int], Value]] = []

    def write(self, op_id: int, payload: int) -> None:
        self.clock[self.pid] += 1
        value = Value(payload=payload, writer=self.pid, tag=(self.clock[self.pid], self.pid))
        self.node.tag_write(op_id, value)
        self.store.add(value)
        self.node.broadcast({"type": "update", "clock": list(self.clock), "value": encode(value)})
        self.node.complete(op_id)

    def on_message(self, sender: int, payload: dict[str, Any]) -> None:
        self.buffer.append((sender, payload["clock"], decode(payload["value"])))
        self._drain()

    def deliverable(self, sender: int, clock: list[int]) -> bool:
        if clock[sender] != self.clock[sender] + 1:
            return False
        return all(clock[k] <= self.clock[k] for k in range(len(clock)) if k != sender)

    def _drain(self) -> None:
        progress = True
        while progress:
            progress = False
            for entry in list(self.buffer):
                sender, clock, value = entry
                if not self.deliverable(sender, clock):
                    continue
                self.buffer.remove(entry)
                self.store.add(value)
                self.clock[sender] = clock[sender]
                self.node.record_apply(value)
                progress = True
        if self.buffer:
            logger.debug(f"p{self.pid} holding {len(self.buffer)} update(s) for causal delivery")
