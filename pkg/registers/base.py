"""Common shape of a replica hosted by the simulator."""
from __future__ import annotations

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Any, ClassVar

from app.models import ScenarioSpec
from app.models_history import Value

if TYPE_CHECKING:
    from simnet.node import Node


def encode(value: Value) -> dict[str, Any]:
    return value.model_dump(mode="json")


def decode(data: dict[str, Any]) -> Value:
    return Value.model_validate(data)


def newer(candidate: Value, current: Value) -> bool:
    return candidate.tag is not None and candidate.tag > current.tag


class Replica(ABC):
    """One process's replica of the register plus its client front end.

    The simulator calls `write`/`read` when a client operation starts,
    `on_message` on delivery and `on_timer` when a timeout fires. Handlers
    finish an operation through `node.complete`.
    """

    algorithm: ClassVar[str]

    def __init__(self, node: Node, spec: ScenarioSpec, initial: Value):
        self.node = node
        self.pid = node.pid
        self.spec = spec
        self.initial = initial

    @abstractmethod
    def write(self, op_id: int, payload: int) -> None: ...

    @abstractmethod
    def read(self, op_id: int) -> None: ...

    @abstractmethod
    def on_message(self, sender: int, payload: dict[str, Any]) -> None: ...

    def on_timer(self, timer_id: str, data: Any) -> None:
        pass

    @abstractmethod
    def visible(self) -> Value | list[Value]:
        """What a read issued right now would observe locally."""


class SetReplica(Replica):
    """Shared state of the grow-only set registers: values are never removed."""

    def __init__(self, node: Node, spec: ScenarioSpec, initial: Value):
        super().__init__(node, spec, initial)
        self.store: set[Value] = set()

    def visible(self) -> list[Value]:
        return sorted(self.store, key=lambda v: v.tag)

    def read(self, op_id: int) -> None:
        self.node.complete(op_id, self.visible())
