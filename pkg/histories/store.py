"""Newline-delimited JSON record stream for histories.

One JSON object per line, keys sorted. Record kinds and their fields are
frozen; regression fixtures compare files byte for byte.

    header       algorithm, process_count, initial_value, horizon,
                 partition_permanent, complete
    fault        kind=fault plus the fault's fields under "fault"
    op-invoke    seq, op_id, process, op, value_in, requested_time,
                 invoke_time, probe
    op-response  seq, op_id, value_out, response_time
    send         seq, msg_id, sender, receiver, payload, send_time
    deliver      seq, msg_id, sender, receiver, payload, deliver_time
    apply        seq, process, value, time
    unstarted    process, op, value, requested_time

Records after the faults appear in simulator order (ascending seq).
"""
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Iterator, Union

from pydantic import ValidationError

from app.models_history import (
    ApplyRecord,
    DeliverRecord,
    FaultRecord,
    History,
    OpRecord,
    SendRecord,
    UnstartedRecord,
    Value,
)
from utils.errors import HistoryFormatError

logger = logging.getLogger(__name__)

RECORD_KINDS = (
    "header",
    "fault",
    "op-invoke",
    "op-response",
    "send",
    "deliver",
    "apply",
    "unstarted",
)


def _dump_value(value: Any) -> Any:
    if value is None:
        return None
    if isinstance(value, list):
        return [v.model_dump(mode="json") for v in value]
    return value.model_dump(mode="json")


def iter_records(history: History) -> Iterator[dict[str, Any]]:
    yield {
        "kind": "header",
        "algorithm": history.algorithm,
        "process_count": history.process_count,
        "initial_value": _dump_value(history.initial_value),
        "horizon": history.horizon,
        "partition_permanent": history.partition_permanent,
        "complete": history.complete,
    }
    for fault in history.faults:
        yield {"kind": "fault", "fault": fault.model_dump(mode="json")}

    body: list[tuple[int, dict[str, Any]]] = []
    for op in history.ops:
        body.append((op.invoke_seq, {
            "kind": "op-invoke",
            "seq": op.invoke_seq,
            "op_id": op.op_id,
            "process": op.process,
            "op": op.kind,
            "value_in": _dump_value(op.value_in),
            "requested_time": op.requested_time,
            "invoke_time": op.invoke_time,
            "probe": op.probe,
        }))
        if op.completed:
            body.append((op.response_seq, {
                "kind": "op-response",
                "seq": op.response_seq,
                "op_id": op.op_id,
                "value_out": _dump_value(op.value_out),
                "response_time": op.response_time,
            }))
    for record in history.sends:
        body.append((record.seq, {"kind": "send", **record.model_dump(mode="json")}))
    for record in history.deliveries:
        body.append((record.seq, {"kind": "deliver", **record.model_dump(mode="json")}))
    for record in history.applies:
        body.append((record.seq, {"kind": "apply", **record.model_dump(mode="json")}))
    body.sort(key=lambda item: item[0])
    for _, record in body:
        yield record

    for record in history.unstarted:
        yield {
            "kind": "unstarted",
            "process": record.process,
            "op": record.kind,
            "value": record.value,
            "requested_time": record.requested_time,
        }


def dump_history(history: History) -> str:
    lines = (json.dumps(r, sort_keys=True, separators=(",", ":")) for r in iter_records(history))
    return "\n".join(lines) + "\n"


def load_history(lines: Union[str, Iterable[str]]) -> History:
    if isinstance(lines, str):
        lines = lines.splitlines()

    header: dict[str, Any] | None = None
    faults: list[FaultRecord] = []
    invokes: dict[int, dict[str, Any]] = {}
    responses: dict[int, dict[str, Any]] = {}
    sends: list[SendRecord] = []
    deliveries: list[DeliverRecord] = []
    applies: list[ApplyRecord] = []
    unstarted: list[UnstartedRecord] = []

    try:
        for number, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise HistoryFormatError(f"line {number}: {e}") from e
            if not isinstance(record, dict):
                raise HistoryFormatError(
                    f"line {number}: expected a JSON object, got {type(record).__name__}"
                )
            kind = record.pop("kind", None)
            if kind not in RECORD_KINDS:
                raise HistoryFormatError(f"line {number}: unknown record kind {kind!r}")
            if kind == "header":
                header = record
            elif kind == "fault":
                faults.append(FaultRecord.model_validate(record["fault"]))
            elif kind == "op-invoke":
                invokes[record["op_id"]] = record
            elif kind == "op-response":
                responses[record["op_id"]] = record
            elif kind == "send":
                sends.append(SendRecord.model_validate(record))
            elif kind == "deliver":
                deliveries.append(DeliverRecord.model_validate(record))
            elif kind == "apply":
                applies.append(ApplyRecord.model_validate(record))
            elif kind == "unstarted":
                unstarted.append(UnstartedRecord(
                    process=record["process"],
                    kind=record["op"],
                    value=record.get("value"),
                    requested_time=record["requested_time"],
                ))

        if header is None:
            raise HistoryFormatError("history has no header record")
        orphans = sorted(set(responses) - set(invokes))
        if orphans:
            raise HistoryFormatError(f"op-response without op-invoke for op(s) {orphans}")

        ops = []
        for op_id, invoke in invokes.items():
            response = responses.get(op_id, {})
            ops.append(OpRecord(
                op_id=op_id,
                process=invoke["process"],
                kind=invoke["op"],
                value_in=invoke.get("value_in"),
                value_out=response.get("value_out"),
                requested_time=invoke["requested_time"],
                invoke_time=invoke["invoke_time"],
                response_time=response.get("response_time"),
                invoke_seq=invoke["seq"],
                response_seq=response.get("seq"),
                probe=invoke.get("probe", False),
            ))
        ops.sort(key=lambda op: (op.invoke_time, op.invoke_seq))

        return History(
            algorithm=header["algorithm"],
            process_count=header["process_count"],
            initial_value=Value.model_validate(header["initial_value"]),
            horizon=header["horizon"],
            ops=ops,
            sends=sends,
            deliveries=deliveries,
            applies=applies,
            faults=faults,
            unstarted=unstarted,
            partition_permanent=header["partition_permanent"],
            complete=header["complete"],
        )
    except (KeyError, TypeError, ValidationError) as e:
        raise HistoryFormatError(f"malformed history record: {e}") from e


def write_history(history: History, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_history(history), encoding="utf-8")
    logger.info(f"Wrote history ({len(history.ops)} ops) to {path}")
    return path


def read_history(path: Union[str, Path]) -> History:
    with open(path, encoding="utf-8") as handle:
        return load_history(handle)
