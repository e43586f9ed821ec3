"""Replicated read-write register algorithms, selected by name."""
from __future__ import annotations

from typing import TYPE_CHECKING

from app.models import ScenarioSpec
from app.models_history import Value
from registers.abd import AbdReplica
from registers.base import Replica, SetReplica
from registers.causal import CausalReplica
from registers.eventual import EventualReplica
from registers.fallback import LocalFallbackReplica
from registers.leader import FastReadLeaderReplica, FastWriteLeaderReplica, LeaderReplica

if TYPE_CHECKING:
    from simnet.node import Node

REPLICAS: dict[str, type[Replica]] = {
    cls.algorithm: cls
    for cls in (
        AbdReplica,
        FastReadLeaderReplica,
        FastWriteLeaderReplica,
        CausalReplica,
        EventualReplica,
        LocalFallbackReplica,
    )
}

# Registers whose reads return a set of values rather than one value.
SET_VALUED = frozenset({"causal", "eventual"})


def build_replica(name: str, node: Node, spec: ScenarioSpec, initial: Value) -> Replica:
    return REPLICAS[name](node, spec, initial)


__all__ = [
    "AbdReplica",
    "CausalReplica",
    "EventualReplica",
    "FastReadLeaderReplica",
    "FastWriteLeaderReplica",
    "LeaderReplica",
    "LocalFallbackReplica",
    "REPLICAS",
    "Replica",
    "SET_VALUED",
    "SetReplica",
    "build_replica",
]
