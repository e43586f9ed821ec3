"""Deterministic discrete-event simulator of the partitionable model."""
import heapq
import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping, Optional, Union

import numpy as np
from pydantic import ValidationError

from app.models import FaultSpec, ScenarioSpec, WorkloadOp
from app.models_history import (
    ApplyRecord,
    DeliverRecord,
    FaultRecord,
    History,
    OpRecord,
    SendRecord,
    UnstartedRecord,
    Value,
    ValueOut,
)
from histories.predicates import check_link_invariants
from registers import build_replica
from simnet.delays import DelaySampler, draw_clock_skews
from simnet.faults import FaultSchedule
from simnet.node import Node
from utils.config import settings
from utils.errors import InvalidSpecError, LinkInvariantError, NonTerminatingError

logger = logging.getLogger(__name__)

RETRANSMIT_TIMER = "link-retransmit"


class EventKind(str, Enum):
    DELIVER = "deliver"
    TIMER = "timer"
    INVOKE = "invoke"


@dataclass(frozen=True)
class Message:
    msg_id: int
    sender: int
    receiver: int
    payload: dict[str, Any]
    send_time: int


@dataclass(frozen=True)
class Event:
    """A queued simulator event, processed in strict (time, seq) order.

    INVOKE events with no request only wake a process so it can start the
    next queued client request.
    """
    time: int
    seq: int
    kind: EventKind
    process: int
    message: Optional[Message] = None
    timer_id: Optional[str] = None
    data: Any = None
    request: Optional[WorkloadOp] = None
    probe: bool = False


@dataclass
class _Request:
    op: WorkloadOp
    probe: bool = False


@dataclass
class _OpState:
    op_id: int
    process: int
    kind: str
    value_in: Optional[Value]
    requested_time: int
    invoke_time: int
    invoke_seq: int
    probe: bool
    value_out: Optional[ValueOut] = None
    response_time: Optional[int] = None
    response_seq: Optional[int] = None


@dataclass
class _Trace:
    ops: dict[int, _OpState] = field(default_factory=dict)
    sends: list[SendRecord] = field(default_factory=list)
    deliveries: list[DeliverRecord] = field(default_factory=list)
    applies: list[ApplyRecord] = field(default_factory=list)
    faults: list[FaultRecord] = field(default_factory=list)


class Simulator:
    """Single-threaded event loop hosting one replica per process.

    Instances share no mutable state, so distinct simulators may run in
    parallel.
    """

    def __init__(self, spec: ScenarioSpec):
        self.spec = spec
        self.now = 0
        self._rng = np.random.default_rng(spec.seed)
        self.clock_skew = draw_clock_skews(spec.delay, spec.processes.count, self._rng)
        self.delays = DelaySampler(spec.delay, spec.processes, self._rng)
        self.faults = FaultSchedule(spec.faults, self._rng)
        self.retry_interval = spec.retry_interval(settings.retry_factor)

        self._queue: list[tuple[int, int, Event]] = []
        self._event_seq = itertools.count()
        self._record_seq = itertools.count(1)
        self._msg_ids = itertools.count()
        self._op_ids = itertools.count()

        count = spec.processes.count
        self._busy: list[Optional[int]] = [None] * count
        self._backlog: list[deque[_Request]] = [deque() for _ in range(count)]
        self._probes_issued = False
        self._trace = _Trace(faults=[_fault_record(f) for f in spec.faults])

        self.initial_value = Value.initial(spec.initial_value)
        self.nodes = [Node(self, pid) for pid in range(count)]
        self.replicas = [
            build_replica(spec.algorithm.name, node, spec, self.initial_value)
            for node in self.nodes
        ]

        for request in spec.workload:
            self._schedule(request.time, EventKind.INVOKE, request.process, request=request)

        logger.debug(
            f"Built simulator '{spec.name}' ({spec.algorithm.name}, {count} processes, "
            f"{len(spec.workload)} requests, seed={spec.seed})"
        )

    # -- scheduling -------------------------------------------------------

    def _schedule(self, time: int, kind: EventKind, process: int, **fields: Any) -> Event:
        event = Event(time=time, seq=next(self._event_seq), kind=kind, process=process, **fields)
        heapq.heappush(self._queue, (event.time, event.seq, event))
        return event

    def peek(self) -> Optional[Event]:
        """The earliest queued event, left in the queue."""
        return self._queue[0][2] if self._queue else None

    # -- links ------------------------------------------------------------

    def send(self, sender: int, receiver: int, payload: dict[str, Any]) -> int:
        if sender == receiver:
            raise ValueError(f"process {sender} cannot send to itself")
        msg = Message(
            msg_id=next(self._msg_ids),
            sender=sender,
            receiver=receiver,
            payload=payload,
            send_time=self.now,
        )
        self._trace.sends.append(SendRecord(
            msg_id=msg.msg_id,
            sender=sender,
            receiver=receiver,
            payload=payload,
            send_time=self.now,
            seq=next(self._record_seq),
        ))
        self._transmit(msg, attempt=0)
        return msg.msg_id

    def _transmit(self, msg: Message, attempt: int) -> None:
        link = self.faults.evaluate(msg.msg_id, msg.sender, msg.receiver, self.now, attempt)
        if not link.dropped:
            delay = self.delays.sample(msg.sender, msg.receiver)
            self._schedule(self.now + delay, EventKind.DELIVER, msg.receiver, message=msg)
        elif link.retransmit:
            self._schedule(
                self.now + self.retry_interval,
                EventKind.TIMER,
                msg.sender,
                timer_id=RETRANSMIT_TIMER,
                message=msg,
                data=attempt + 1,
            )

    def add_fault(self, fault: FaultSpec) -> None:
        self.faults.add(fault)
        self._trace.faults.append(_fault_record(fault))

    # -- processes --------------------------------------------------------

    def set_timer(self, pid: int, delay: int, timer_id: str, data: Any = None) -> None:
        self._schedule(self.now + max(0, delay), EventKind.TIMER, pid, timer_id=timer_id, data=data)

    def complete(self, pid: int, op_id: int, value_out: Optional[ValueOut]) -> None:
        state = self._trace.ops[op_id]
        if state.response_time is not None:
            raise RuntimeError(f"operation {op_id} completed twice")
        state.value_out = value_out
        state.response_time = self.now
        state.response_seq = next(self._record_seq)
        self._busy[pid] = None
        logger.debug(f"t={self.now} p{pid} completed {state.kind} op {op_id}")
        if self._backlog[pid]:
            self._schedule(self.now, EventKind.INVOKE, pid)

    def tag_write(self, op_id: int, value: Value) -> None:
        self._trace.ops[op_id].value_in = value

    def record_apply(self, pid: int, value: Value) -> None:
        self._trace.applies.append(
            ApplyRecord(process=pid, value=value, time=self.now, seq=next(self._record_seq))
        )

    def _try_start(self, pid: int) -> None:
        if self._busy[pid] is not None or not self._backlog[pid]:
            return
        request = self._backlog[pid].popleft()
        op = request.op
        op_id = next(self._op_ids)
        value_in = Value(payload=op.value, writer=pid) if op.op == "write" else None
        self._trace.ops[op_id] = _OpState(
            op_id=op_id,
            process=pid,
            kind=op.op,
            value_in=value_in,
            requested_time=op.time,
            invoke_time=self.now,
            invoke_seq=next(self._record_seq),
            probe=request.probe,
        )
        self._busy[pid] = op_id
        replica = self.replicas[pid]
        if op.op == "write":
            replica.write(op_id, op.value)
        else:
            replica.read(op_id)

    # -- event loop -------------------------------------------------------

    def step(self) -> Optional[Event]:
        if not self._queue or self._queue[0][0] > self.spec.horizon:
            return None
        time, _, event = heapq.heappop(self._queue)
        if time < self.now:
            raise RuntimeError(f"event at t={time} popped after t={self.now}")
        self.now = time
        self._dispatch(event)
        return event

    def _dispatch(self, event: Event) -> None:
        if event.kind is EventKind.INVOKE:
            if event.request is not None:
                self._backlog[event.process].append(_Request(event.request, event.probe))
            self._try_start(event.process)
        elif event.kind is EventKind.DELIVER:
            msg = event.message
            self._trace.deliveries.append(DeliverRecord(
                msg_id=msg.msg_id,
                sender=msg.sender,
                receiver=msg.receiver,
                payload=msg.payload,
                deliver_time=self.now,
                seq=next(self._record_seq),
            ))
            self.replicas[msg.receiver].on_message(msg.sender, msg.payload)
        elif event.timer_id == RETRANSMIT_TIMER:
            self._transmit(event.message, attempt=event.data)
        else:
            self.replicas[event.process].on_timer(event.timer_id, event.data)

    def issue_probes(self) -> None:
        """Queue one probe read per process at the current time."""
        self._probes_issued = True
        for pid in range(self.spec.processes.count):
            probe = WorkloadOp(time=self.now, process=pid, op="read")
            self._schedule(self.now, EventKind.INVOKE, pid, request=probe, probe=True)
        logger.debug(f"Issued probe reads at t={self.now}")

    @property
    def probes_pending(self) -> bool:
        return self.spec.probes and not self._probes_issued

    # -- history ----------------------------------------------------------

    def history(self, complete: bool = False) -> History:
        trace = self._trace
        ops = sorted(
            (
                OpRecord(
                    op_id=s.op_id,
                    process=s.process,
                    kind=s.kind,
                    value_in=s.value_in,
                    value_out=s.value_out,
                    requested_time=s.requested_time,
                    invoke_time=s.invoke_time,
                    response_time=s.response_time,
                    invoke_seq=s.invoke_seq,
                    response_seq=s.response_seq,
                    probe=s.probe,
                )
                for s in trace.ops.values()
            ),
            key=lambda op: (op.invoke_time, op.invoke_seq),
        )
        unstarted = [
            UnstartedRecord(
                process=pid,
                kind=request.op.op,
                value=request.op.value,
                requested_time=request.op.time,
            )
            for pid, backlog in enumerate(self._backlog)
            for request in backlog
        ]
        permanent = any(f.permanent and f.start <= self.spec.horizon for f in trace.faults)
        return History(
            algorithm=self.spec.algorithm.name,
            process_count=self.spec.processes.count,
            initial_value=self.initial_value,
            horizon=self.spec.horizon,
            ops=ops,
            sends=list(trace.sends),
            deliveries=list(trace.deliveries),
            applies=list(trace.applies),
            faults=list(trace.faults),
            unstarted=unstarted,
            partition_permanent=permanent,
            complete=complete,
        )


def _fault_record(fault: FaultSpec) -> FaultRecord:
    return FaultRecord(**fault.model_dump())


def build_sim(spec: Union[ScenarioSpec, Mapping[str, Any]]) -> Simulator:
    """Construct a simulator with an empty history and the workload queued."""
    if not isinstance(spec, ScenarioSpec):
        try:
            spec = ScenarioSpec.model_validate(spec)
        except ValidationError as e:
            raise InvalidSpecError(str(e)) from e
    return Simulator(spec)


def send(sim: Simulator, sender: int, receiver: int, payload: dict[str, Any]) -> int:
    return sim.send(sender, receiver, payload)


def step(sim: Simulator) -> Optional[Event]:
    """Dispatch the next event, or return None once the run is quiescent."""
    return sim.step()


def apply_partition(sim: Simulator, fault: Union[FaultSpec, Mapping[str, Any]]) -> None:
    """Install a partition on a built simulator.

    Sends crossing groups while it is active are dropped; messages already in
    flight are unaffected.
    """
    if not isinstance(fault, FaultSpec):
        try:
            fault = FaultSpec.model_validate(fault)
        except ValidationError as e:
            raise InvalidSpecError(str(e)) from e
    if fault.kind != "partition":
        raise InvalidSpecError(f"apply_partition needs a partition fault, got '{fault.kind}'")
    count = sim.spec.processes.count
    unknown = sorted(p for group in fault.groups for p in group if p >= count)
    if unknown:
        raise InvalidSpecError(f"partition names unknown process id(s) {unknown}")
    sim.add_fault(fault)
    logger.info(
        f"Partition {fault.groups} installed for [{fault.start}, "
        f"{'FOREVER' if fault.forever else fault.end}) retransmit={fault.retransmit}"
    )


def run_to_quiescence(sim: Simulator, require_termination: bool = False) -> History:
    """Step until no event remains before the horizon and return the History.

    Raises NonTerminatingError when `require_termination` is set and some
    invoked operation never completed.
    """
    while True:
        while sim.step() is not None:
            pass
        if sim.probes_pending:
            sim.issue_probes()
            continue
        break

    history = sim.history(complete=True)
    violations = check_link_invariants(history)
    if violations:
        logger.error(f"Link invariants broken in '{sim.spec.name}': {violations}")
        raise LinkInvariantError("; ".join(violations))

    unfinished = history.unfinished
    if unfinished:
        logger.warning(
            f"Scenario '{sim.spec.name}' quiesced at t={sim.now} with "
            f"{len(unfinished)} unfinished operation(s): {unfinished}"
        )
        if require_termination:
            raise NonTerminatingError(history, unfinished)
    logger.info(
        f"Scenario '{sim.spec.name}' quiesced at t={sim.now}: {len(history.ops)} ops, "
        f"{len(history.sends)} sent, {len(history.deliveries)} delivered"
    )
    return history
