"""Sequential specification of a single-value read-write register."""
from typing import Sequence

from app.models_history import History, OpRecord, Tag


def write_key(op: OpRecord) -> Tag:
    """The tag a write installs.

    Some algorithms only tag a write when it is applied, so a completed write
    can still be untagged. It gets a per-operation key no read can return.
    """
    tag = op.value_in.tag if op.value_in is not None else None
    return tag if tag is not None else (-1, op.op_id)


def legal_sequence(ops: Sequence[OpRecord], initial: Tag) -> bool:
    """Every read returns the latest preceding write, or the initial value."""
    current = initial
    for op in ops:
        if op.kind == "write":
            current = write_key(op)
        elif op.completed and op.value_out.tag != current:
            return False
    return True


def replay_witness(history: History, order: Sequence[int]) -> bool:
    """Run a witness serialization through the register automaton.

    The order must be a permutation of a subset of op ids that contains
    every completed operation.
    """
    if len(set(order)) != len(order):
        return False
    completed = {op.op_id for op in history.ops if op.completed}
    if not completed.issubset(order):
        return False
    try:
        ops = [history.op(op_id) for op_id in order]
    except KeyError:
        return False
    return legal_sequence(ops, history.initial_value.tag)
