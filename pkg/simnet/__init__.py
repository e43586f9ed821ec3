"""Discrete-event simulation of processes, clocks and partitionable links."""
from simnet.simulator import (
    Event,
    EventKind,
    Message,
    Simulator,
    apply_partition,
    build_sim,
    run_to_quiescence,
    send,
    step,
)

__all__ = [
    "Event",
    "EventKind",
    "Message",
    "Simulator",
    "apply_partition",
    "build_sim",
    "run_to_quiescence",
    "send",
    "step",
]
