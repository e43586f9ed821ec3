"""Fault schedule: decides, per transmission attempt, whether a link drops a message."""
import logging
from dataclasses import dataclass

import numpy as np

from app.models import FaultSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinkState:
    """Outcome of one transmission attempt on a p->q link."""
    dropped: bool
    retransmit: bool


DELIVERABLE = LinkState(dropped=False, retransmit=False)


class FaultSchedule:
    """The active fault list of one simulator.

    Faults are evaluated at send (and retry) time only: a message already in
    flight when a partition starts is never dropped retroactively.
    """

    def __init__(self, faults: list[FaultSpec], rng: np.random.Generator):
        self._faults = list(faults)
        self._rng = rng

    def add(self, fault: FaultSpec) -> None:
        self._faults.append(fault)

    def evaluate(self, msg_id: int, sender: int, receiver: int, now: int, attempt: int) -> LinkState:
        dropped = False
        retransmit = False
        for fault in self._faults:
            if not fault.active_at(now):
                continue
            if fault.kind == "partition":
                hit = fault.separates(sender, receiver)
            elif fault.ids is not None:
                hit = attempt == 0 and fault.ids[0] <= msg_id <= fault.ids[1]
            else:
                hit = bool(self._rng.random() < fault.probability)
            if hit:
                dropped = True
                retransmit = retransmit or fault.retransmit
        if not dropped:
            return DELIVERABLE
        logger.debug(
            f"Dropped message {msg_id} {sender}->{receiver} at t={now} "
            f"(attempt {attempt}, retransmit={retransmit})"
        )
        return LinkState(dropped=True, retransmit=retransmit)
