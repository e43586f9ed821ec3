"""Causal consistency for set-valued registers.

A write w causally precedes a read r at process q when w is earlier in q's
program order, or when q applied w (or a write that w precedes) before r
was invoked; the relation is closed transitively through each write's own
causal past. A history is causal when every read's value set contains every
write that causally precedes it.
"""
import logging
from typing import Any

from app.models_history import History, Tag, Verdict, Witness
from utils.errors import MissingMetadataError, WrongRegisterKindError

logger = logging.getLogger(__name__)


def check_causal(history: History) -> Verdict:
    writes = {op.value_in.tag: op for op in history.writes if op.value_in and op.value_in.tag}
    for op in history.reads:
        if op.completed and not op.set_valued:
            raise WrongRegisterKindError(
                f"op {op.op_id} returned a single value; causal checking needs set-valued reads"
            )

    stream: list[tuple[int, str, Any]] = []
    for op in history.ops:
        stream.append((op.invoke_seq, "invoke", op))
        if op.completed:
            stream.append((op.response_seq, "response", op))
    for record in history.applies:
        stream.append((record.seq, "apply", record))
    stream.sort(key=lambda item: item[0])

    known: list[set[Tag]] = [set() for _ in range(history.process_count)]
    past: dict[Tag, frozenset[Tag]] = {}
    required: dict[int, frozenset[Tag]] = {}
    checked: list[int] = []

    for _, kind, item in stream:
        if kind == "apply":
            tag = item.value.tag
            if tag not in writes:
                raise MissingMetadataError(
                    f"process {item.process} applied {tag} but no write produced it"
                )
            known[item.process] |= past.get(tag, frozenset()) | {tag}
        elif kind == "invoke":
            op = item
            if op.kind == "write" and op.value_in and op.value_in.tag:
                past[op.value_in.tag] = frozenset(known[op.process])
                known[op.process].add(op.value_in.tag)
            elif op.kind == "read":
                required[op.op_id] = frozenset(known[op.process])
        elif item.kind == "read":
            op = item
            returned = {value.tag for value in op.value_out}
            unexplained = sorted(t for t in returned - known[op.process] if t in writes)
            if unexplained:
                raise MissingMetadataError(
                    f"read {op.op_id} at process {op.process} returned {unexplained} "
                    f"without a recorded application"
                )
            missing = sorted(required[op.op_id] - returned)
            if missing:
                counterexample = {
                    "reason": "read misses a causally preceding write",
                    "read": op.op_id,
                    "process": op.process,
                    "missing": [list(tag) for tag in missing],
                    "missing_writes": [writes[tag].op_id for tag in missing],
                }
                logger.info(f"causal consistency violated: {counterexample}")
                return Verdict(property="causal", satisfied=False, counterexample=counterexample)
            checked.append(op.op_id)

    return Verdict(
        property="causal",
        satisfied=True,
        witness=Witness(kind="causal-closure", order=checked),
    )
