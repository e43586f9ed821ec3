"""Eventual consistency decided by quiescence probes.

The liveness property ("only finitely many reads miss v") cannot be decided
on a finite trace. Instead each process issues one probe read after the run
has settled; the history converged iff every probe returns exactly the set
of values ever written.
"""
import logging

from app.models_history import History, Verdict, Witness
from utils.errors import NoProbeReadsError, WrongRegisterKindError

logger = logging.getLogger(__name__)


def check_eventual(history: History) -> Verdict:
    probes = sorted((op for op in history.ops if op.probe), key=lambda op: op.process)
    if not probes:
        raise NoProbeReadsError(
            f"history of {history.algorithm} has no probe reads; run the scenario with probes"
        )
    written = {op.value_in.tag: op for op in history.writes if op.value_in and op.value_in.tag}

    for probe in probes:
        if not probe.completed:
            return Verdict(property="eventual", satisfied=False, counterexample={
                "reason": "probe read did not terminate",
                "process": probe.process,
                "read": probe.op_id,
            })
        if not probe.set_valued:
            raise WrongRegisterKindError(f"probe {probe.op_id} returned a single value")
        returned = {value.tag for value in probe.value_out}
        missing = sorted(set(written) - returned)
        if missing:
            write = written[missing[0]]
            logger.info(
                f"eventual consistency violated: process {probe.process} never saw "
                f"write {write.op_id}"
            )
            return Verdict(property="eventual", satisfied=False, counterexample={
                "reason": "value never reached process",
                "value": write.value_in.model_dump(mode="json"),
                "write": write.op_id,
                "process": probe.process,
                "missing_count": len(missing),
            })
        unknown = sorted(returned - set(written))
        if unknown:
            return Verdict(property="eventual", satisfied=False, counterexample={
                "reason": "probe returned a value nobody wrote",
                "process": probe.process,
                "tags": [list(tag) for tag in unknown],
            })

    return Verdict(
        property="eventual",
        satisfied=True,
        witness=Witness(kind="convergence", order=[probe.op_id for probe in probes]),
    )
