"""Latency sweeps, lower-bound checks, availability and construction replays."""
from experiments.availability import (
    AvailabilityReport,
    availability_experiment,
    availability_report,
)
from experiments.bounds import BoundReport, bound_check_attiya_welch, bound_check_lipton_sandberg
from experiments.latency import (
    Classification,
    LatencyReport,
    LatencyRow,
    LatencyStats,
    classify,
    latency_sweep,
)
from experiments.theorems import (
    TheoremOneReplay,
    TheoremThreeReplay,
    replay_theorem_1,
    replay_theorem_3,
)
from experiments.topology import TopologyReport, topology_experiment

__all__ = [
    "AvailabilityReport",
    "BoundReport",
    "Classification",
    "LatencyReport",
    "LatencyRow",
    "LatencyStats",
    "TheoremOneReplay",
    "TheoremThreeReplay",
    "TopologyReport",
    "availability_experiment",
    "availability_report",
    "bound_check_attiya_welch",
    "bound_check_lipton_sandberg",
    "classify",
    "latency_sweep",
    "replay_theorem_1",
    "replay_theorem_3",
    "topology_experiment",
]
