"""Execution predicates: loss-free, partitioned, and opportunistic properties."""
import logging
from typing import Callable

from app.models_history import History, Verdict, Witness
from utils.errors import IncompleteHistoryError

logger = logging.getLogger(__name__)

PropertyCheck = Callable[[History], Verdict]


def _require_complete(history: History) -> None:
    if not history.complete:
        raise IncompleteHistoryError(
            f"history of {history.algorithm} has not reached quiescence"
        )


def is_loss_free(history: History) -> bool:
    """Every sent message was delivered and no partition is permanent.

    On a finite trace "eventually delivered" means delivered before
    quiescence; a FOREVER partition makes the execution partitioned even if
    nothing happened to cross it.
    """
    _require_complete(history)
    if history.partition_permanent:
        return False
    delivered = {record.msg_id for record in history.deliveries}
    return all(record.msg_id in delivered for record in history.sends)


def is_partitioned(history: History) -> bool:
    return not is_loss_free(history)


def opportunistic(check: PropertyCheck, history: History) -> Verdict:
    """P': holds iff the execution is partitioned or satisfies P."""
    if is_partitioned(history):
        name = getattr(check, "property_name", getattr(check, "__name__", "property"))
        logger.debug(f"{name} holds opportunistically: execution is partitioned")
        return Verdict(
            property=f"opportunistic-{name}",
            satisfied=True,
            witness=Witness(kind="partitioned"),
        )
    verdict = check(history)
    return verdict.model_copy(update={"property": f"opportunistic-{verdict.property}"})


def opportunistic_implication(check: PropertyCheck, history: History) -> bool:
    """The equivalent formulation: lossfree(E) implies P(E)."""
    return (not is_loss_free(history)) or check(history).satisfied


def check_link_invariants(history: History) -> list[str]:
    """No duplication and no creation on every link; deliveries never precede sends."""
    violations: list[str] = []
    sends = {record.msg_id: record for record in history.sends}
    seen: set[int] = set()
    for delivery in history.deliveries:
        if delivery.msg_id in seen:
            violations.append(f"message {delivery.msg_id} delivered twice")
        seen.add(delivery.msg_id)
        sent = sends.get(delivery.msg_id)
        if sent is None:
            violations.append(f"message {delivery.msg_id} delivered but never sent")
            continue
        if (sent.sender, sent.receiver, sent.payload) != (
            delivery.sender, delivery.receiver, delivery.payload
        ):
            violations.append(f"message {delivery.msg_id} altered in transit")
        if delivery.deliver_time < sent.send_time or delivery.seq < sent.seq:
            violations.append(f"message {delivery.msg_id} delivered before it was sent")
    return violations
