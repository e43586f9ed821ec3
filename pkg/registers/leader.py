"""Static-leader sequencer registers (sequentially consistent).

The leader orders client requests into a log, proposes each entry, commits
it once a majority has acknowledged and broadcasts the commit. Every replica
applies committed entries in log order. Requests from one client are
sequenced in the order that client issued them.

Two variants trade read latency against write latency:

- fast-read: reads return the local applied value at once; a write
  completes when its own replica applies it.
- fast-write: writes complete at once; a read is sequenced as a "sync"
  entry and returns the local value when that entry applies.
"""
import itertools
import logging
from typing import Any, ClassVar

from app.models import ScenarioSpec
from app.models_history import Value
from registers.base import Replica, decode, encode

logger = logging.getLogger(__name__)


class LeaderReplica(Replica):
    fast_read: ClassVar[bool]

    def __init__(self, node, spec: ScenarioSpec, initial: Value):
        super().__init__(node, spec, initial)
        self.leader = spec.algorithm.leader
        self.applied = initial
        self.applied_index = 0
        self._committed: dict[int, dict[str, Any]] = {}
        self._requests = itertools.count()
        self._writes: dict[int, int] = {}  # request id -> op id
        self._syncs: dict[int, int] = {}

        # leader-only state
        self._log: list[dict[str, Any]] = []
        self._acks: dict[int, set[int]] = {}
        self._commit_index = 0
        self._next_request: dict[int, int] = {}
        self._held: dict[int, dict[int, dict[str, Any]]] = {}

    @property
    def is_leader(self) -> bool:
        return self.pid == self.leader

    def visible(self) -> Value:
        return self.applied

    # -- client side ------------------------------------------------------

    def write(self, op_id: int, payload: int) -> None:
        request = next(self._requests)
        self._writes[request] = op_id
        self._submit({"type": "request", "client": self.pid, "request": request,
                      "kind": "write", "payload": payload})
        if not self.fast_read:
            self.node.complete(op_id)

    def read(self, op_id: int) -> None:
        if self.fast_read:
            self.node.complete(op_id, self.applied)
            return
        request = next(self._requests)
        self._syncs[request] = op_id
        self._submit({"type": "request", "client": self.pid, "request": request, "kind": "sync"})

    def _submit(self, request: dict[str, Any]) -> None:
        if self.is_leader:
            self._receive_request(request)
        else:
            self.node.send(self.leader, request)

    # -- message handling -------------------------------------------------

    def on_message(self, sender: int, payload: dict[str, Any]) -> None:
        kind = payload["type"]
        if kind == "request":
            self._receive_request(payload)
        elif kind == "propose":
            self.node.send(self.leader, {"type": "ack", "index": payload["entry"]["index"]})
        elif kind == "ack":
            self._acks[payload["index"]].add(sender)
            self._try_commit()
        elif kind == "commit":
            self._deliver_commit(payload["entry"])

    def _receive_request(self, request: dict[str, Any]) -> None:
        client = request["client"]
        held = self._held.setdefault(client, {})
        held[request["request"]] = request
        expected = self._next_request.get(client, 0)
        while expected in held:
            self._sequence(held.pop(expected))
            expected += 1
        self._next_request[client] = expected

    def _sequence(self, request: dict[str, Any]) -> None:
        index = len(self._log) + 1
        entry: dict[str, Any] = {
            "index": index,
            "kind": request["kind"],
            "client": request["client"],
            "request": request["request"],
        }
        if request["kind"] == "write":
            value = Value(payload=request["payload"], writer=request["client"],
                          tag=(index, request["client"]))
            entry["value"] = encode(value)
        self._log.append(entry)
        self._acks[index] = {self.pid}
        self.node.broadcast({"type": "propose", "entry": entry})
        self._try_commit()

    def _try_commit(self) -> None:
        majority = self.node.majority
        while self._commit_index < len(self._log):
            index = self._commit_index + 1
            if len(self._acks[index]) < majority:
                break
            self._commit_index = index
            entry = self._log[index - 1]
            self.node.broadcast({"type": "commit", "entry": entry})
            self._deliver_commit(entry)

    def _deliver_commit(self, entry: dict[str, Any]) -> None:
        self._committed[entry["index"]] = entry
        while self.applied_index + 1 in self._committed:
            self.applied_index += 1
            self._apply(self._committed.pop(self.applied_index))

    def _apply(self, entry: dict[str, Any]) -> None:
        own = entry["client"] == self.pid
        if entry["kind"] == "write":
            self.applied = decode(entry["value"])
            if own:
                op_id = self._writes.pop(entry["request"])
                self.node.tag_write(op_id, self.applied)
                if self.fast_read:
                    self.node.complete(op_id)
        elif own:
            self.node.complete(self._syncs.pop(entry["request"]), self.applied)
        logger.debug(f"p{self.pid} applied log entry {entry['index']} ({entry['kind']})")


class FastReadLeaderReplica(LeaderReplica):
    algorithm = "leader-fast-read"
    fast_read = True


class FastWriteLeaderReplica(LeaderReplica):
    algorithm = "leader-fast-write"
    fast_read = False
