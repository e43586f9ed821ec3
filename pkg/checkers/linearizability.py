"""Exhaustive linearizability and sequential-consistency checking.

Both properties ask for a total order of the operations that is a legal
register execution. Linearizability constrains the order by real time
(op1 responds before op2 is invoked => op1 first) and program order;
sequential consistency by program order alone.

The search extends a linearized prefix one minimal operation at a time and
memoizes failed (prefix, register value) states, so each frontier is
explored once. Unfinished reads are dropped; unfinished writes may or may
not take effect.
"""
import logging
from dataclasses import dataclass
from typing import Any, Optional

from app.models_history import History, OpRecord, Tag, Verdict, Witness
from checkers.register_model import replay_witness, write_key
from utils.config import settings
from utils.errors import TooLargeError, WrongRegisterKindError

logger = logging.getLogger(__name__)


@dataclass
class _Search:
    ops: list[OpRecord]
    preds: list[int]
    required: int
    initial: Tag
    deepest_mask: int = 0
    deepest_tag: Optional[Tag] = None

    def run(self) -> Optional[list[int]]:
        self.deepest_tag = self.initial
        failed: set[tuple[int, Tag]] = set()

        def visit(mask: int, tag: Tag) -> Optional[list[int]]:
            if mask & self.required == self.required:
                return []
            if (mask, tag) in failed:
                return None
            for i, op in enumerate(self.ops):
                bit = 1 << i
                if mask & bit or self.preds[i] & ~mask:
                    continue
                if op.kind == "write":
                    following = write_key(op)
                elif op.value_out.tag == tag:
                    following = tag
                else:
                    continue
                rest = visit(mask | bit, following)
                if rest is not None:
                    return [i, *rest]
            failed.add((mask, tag))
            if mask.bit_count() > self.deepest_mask.bit_count():
                self.deepest_mask, self.deepest_tag = mask, tag
            return None

        return visit(0, self.initial)


def _candidates(history: History, bound: Optional[int]) -> list[OpRecord]:
    ops: list[OpRecord] = []
    for op in history.ops:
        if op.kind == "read" and not op.completed:
            continue
        if op.kind == "read" and op.set_valued:
            raise WrongRegisterKindError(
                f"op {op.op_id} returned a set of values; "
                f"{history.algorithm} is not a single-value register"
            )
        ops.append(op)
    limit = settings.check_op_bound if bound is None else bound
    if len(ops) > limit:
        raise TooLargeError(f"{len(ops)} operations exceed the exhaustive-search bound of {limit}")
    return ops


def _precedence(ops: list[OpRecord], real_time: bool) -> list[int]:
    preds = [0] * len(ops)
    for j, later in enumerate(ops):
        for i, earlier in enumerate(ops):
            if i == j:
                continue
            same_process = earlier.process == later.process and (
                (earlier.invoke_time, earlier.invoke_seq) < (later.invoke_time, later.invoke_seq)
            )
            before = (
                real_time
                and earlier.response_time is not None
                and earlier.response_time < later.invoke_time
            )
            if same_process or before:
                preds[j] |= 1 << i
    return preds


def _value_dump(op: Optional[OpRecord], history: History) -> dict[str, Any]:
    if op is None:
        return history.initial_value.model_dump(mode="json")
    return op.value_in.model_dump(mode="json")


def _explain(history: History, ops: list[OpRecord], search: _Search) -> dict[str, Any]:
    written = {write_key(op): op for op in ops if op.kind == "write"}
    for op in ops:
        if op.kind == "read" and op.value_out.tag != search.initial and op.value_out.tag not in written:
            return {
                "reason": "read returned a value no write produced",
                "read": op.op_id,
                "returned": op.value_out.model_dump(mode="json"),
            }

    mask, tag = search.deepest_mask, search.deepest_tag
    prefix = [ops[i].op_id for i in range(len(ops)) if mask >> i & 1]
    latest = written.get(tag)
    for i, op in enumerate(ops):
        if mask >> i & 1 or search.preds[i] & ~mask:
            continue
        if op.kind == "read" and op.value_out.tag != tag:
            return {
                "reason": "stale read",
                "read": op.op_id,
                "returned": op.value_out.model_dump(mode="json"),
                "expected": _value_dump(latest, history),
                "write": latest.op_id if latest else None,
                "linearized_prefix": prefix,
            }
    blocked = [op.op_id for i, op in enumerate(ops) if op.completed and not mask >> i & 1]
    return {
        "reason": "no legal order places these operations",
        "operations": blocked,
        "linearized_prefix": prefix,
    }


def _check(history: History, property_name: str, real_time: bool, bound: Optional[int]) -> Verdict:
    ops = _candidates(history, bound)
    required = sum(1 << i for i, op in enumerate(ops) if op.completed)
    search = _Search(
        ops=ops,
        preds=_precedence(ops, real_time),
        required=required,
        initial=history.initial_value.tag,
    )
    order = search.run()
    if order is None:
        counterexample = _explain(history, ops, search)
        logger.info(f"{property_name} violated for {history.algorithm}: {counterexample['reason']}")
        return Verdict(property=property_name, satisfied=False, counterexample=counterexample)

    witness = [ops[i].op_id for i in order]
    if not replay_witness(history, witness):
        raise AssertionError(f"{property_name} search produced an illegal witness")
    return Verdict(
        property=property_name,
        satisfied=True,
        witness=Witness(kind="serialization", order=witness),
    )


def check_linearizable(history: History, bound: Optional[int] = None) -> Verdict:
    return _check(history, "linearizability", real_time=True, bound=bound)


def check_sequential(history: History, bound: Optional[int] = None) -> Verdict:
    return _check(history, "sequential", real_time=False, bound=bound)


def check_terminating_linearizable(history: History, bound: Optional[int] = None) -> Verdict:
    """Every invoked operation completed, and the history is linearizable."""
    stuck = history.unfinished
    if stuck or history.unstarted:
        return Verdict(
            property="terminating-linearizability",
            satisfied=False,
            counterexample={
                "reason": "operation did not terminate",
                "operations": stuck,
                "unstarted": len(history.unstarted),
            },
        )
    verdict = check_linearizable(history, bound)
    return verdict.model_copy(update={"property": "terminating-linearizability"})
