"""Replays of the impossibility constructions from shipped scenarios.

The first replay builds two executions of a terminating register under total
message loss between the writer and the reader. In the first the loss is
permanent; in the second the same messages are only held back until after
the read has responded, which makes the execution loss-free yet still not
linearizable.

The second replay shows an eventually consistent register failing eventual
consistency under a permanent partition, while the opportunistic form of the
property still holds.
"""
import logging

from pydantic import BaseModel, Field

from app.models_history import History, Verdict
from app.scenarios import shipped
from checkers import check_eventual, check_linearizable
from histories import is_loss_free, is_partitioned, opportunistic
from simnet import build_sim, run_to_quiescence

logger = logging.getLogger(__name__)

THEOREM_1_SCENARIOS = ("theorem1_e1", "theorem1_e2")
THEOREM_3_SCENARIOS = ("theorem3_partitioned", "theorem3_healed")


def _run(name: str) -> History:
    return run_to_quiescence(build_sim(shipped(name)))


class TheoremOneReplay(BaseModel):
    e1_verdict: Verdict
    e2_verdict: Verdict
    e1_loss_free: bool
    e2_loss_free: bool
    e1_terminated: bool
    e2_terminated: bool
    read_response_time: int
    e2_released_after_read: bool
    histories: dict[str, History] = Field(default_factory=dict, exclude=True)

    @property
    def matches_construction(self) -> bool:
        return (
            not self.e1_verdict.satisfied
            and not self.e2_verdict.satisfied
            and not self.e1_loss_free
            and self.e2_loss_free
            and self.e1_terminated
            and self.e2_terminated
            and self.e2_released_after_read
        )


class TheoremThreeReplay(BaseModel):
    verdict: Verdict
    opportunistic_verdict: Verdict
    partitioned: bool
    healed_verdict: Verdict
    healed_loss_free: bool
    histories: dict[str, History] = Field(default_factory=dict, exclude=True)

    @property
    def matches_construction(self) -> bool:
        return (
            not self.verdict.satisfied
            and self.opportunistic_verdict.satisfied
            and self.partitioned
            and self.healed_verdict.satisfied
        )


def _the_read(history: History):
    reads = [op for op in history.reads if not op.probe]
    if len(reads) != 1:
        raise ValueError(f"expected exactly one read in the replay, found {len(reads)}")
    return reads[0]


def replay_theorem_1() -> TheoremOneReplay:
    e1, e2 = (_run(name) for name in THEOREM_1_SCENARIOS)
    read = _the_read(e2)
    delivered = {record.msg_id for record in e2.deliveries}
    released_after = (
        read.completed
        and all(record.msg_id in delivered for record in e2.sends)
        and all(record.deliver_time > read.response_time for record in e2.deliveries)
    )
    replay = TheoremOneReplay(
        e1_verdict=check_linearizable(e1),
        e2_verdict=check_linearizable(e2),
        e1_loss_free=is_loss_free(e1),
        e2_loss_free=is_loss_free(e2),
        e1_terminated=not e1.unfinished and not e1.unstarted,
        e2_terminated=not e2.unfinished and not e2.unstarted,
        read_response_time=read.response_time if read.completed else -1,
        e2_released_after_read=released_after,
        histories={"e1": e1, "e2": e2},
    )
    log = logger.info if replay.matches_construction else logger.warning
    log(
        f"Replay of the terminating-register construction: E1 linearizable="
        f"{replay.e1_verdict.satisfied} loss-free={replay.e1_loss_free}; E2 linearizable="
        f"{replay.e2_verdict.satisfied} loss-free={replay.e2_loss_free}"
    )
    return replay


def replay_theorem_3() -> TheoremThreeReplay:
    partitioned, healed = (_run(name) for name in THEOREM_3_SCENARIOS)
    replay = TheoremThreeReplay(
        verdict=check_eventual(partitioned),
        opportunistic_verdict=opportunistic(check_eventual, partitioned),
        partitioned=is_partitioned(partitioned),
        healed_verdict=check_eventual(healed),
        healed_loss_free=is_loss_free(healed),
        histories={"partitioned": partitioned, "healed": healed},
    )
    log = logger.info if replay.matches_construction else logger.warning
    log(
        f"Replay of the permanent-partition construction: eventual={replay.verdict.satisfied}, "
        f"opportunistic={replay.opportunistic_verdict.satisfied}, "
        f"healed={replay.healed_verdict.satisfied}"
    )
    return replay
