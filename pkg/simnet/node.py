"""The per-process handle a replica uses to talk to the simulator."""
from __future__ import annotations

from typing import TYPE_CHECKING, Any, Optional

from app.models_history import Value, ValueOut

if TYPE_CHECKING:
    from simnet.simulator import Simulator


class Node:
    """Process `pid`'s view of the partitionable model.

    A replica can send over its links, arm timeouts on its own clock,
    complete client operations and report when it makes a remote write
    visible. It never sees global time or other processes' state.
    """

    def __init__(self, sim: Simulator, pid: int):
        self._sim = sim
        self.pid = pid

    @property
    def n(self) -> int:
        return self._sim.spec.processes.count

    @property
    def peers(self) -> list[int]:
        return [p for p in range(self.n) if p != self.pid]

    @property
    def majority(self) -> int:
        return self.n // 2 + 1

    def local_clock(self) -> int:
        return self._sim.now + self._sim.clock_skew[self.pid]

    def send(self, to: int, payload: dict[str, Any]) -> int:
        return self._sim.send(self.pid, to, payload)

    def broadcast(self, payload: dict[str, Any]) -> list[int]:
        return [self.send(peer, payload) for peer in self.peers]

    def set_timer(self, delay: int, timer_id: str, data: Any = None) -> None:
        self._sim.set_timer(self.pid, delay, timer_id, data)

    def complete(self, op_id: int, value_out: Optional[ValueOut] = None) -> None:
        self._sim.complete(self.pid, op_id, value_out)

    def tag_write(self, op_id: int, value: Value) -> None:
        self._sim.tag_write(op_id, value)

    def record_apply(self, value: Value) -> None:
        self._sim.record_apply(self.pid, value)
