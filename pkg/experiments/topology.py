"""Two-level topology: cheap links inside a datacenter, expensive ones between.

Sweeps d_remote with d_local fixed and compares where a register's replicas
live: ABD confined to one site, the causal register spread over sites, and
ABD spread over sites.
"""
import logging
from typing import Sequence

from pydantic import BaseModel

from app.models import DelayModel
from experiments.latency import LatencyReport, assemble_report, run_points
from experiments.workloads import alternating_workload, build_scenario

logger = logging.getLogger(__name__)

LOCAL_SITES = ["dc0", "dc0", "dc0"]
SPREAD_SITES = ["dc0", "dc0", "dc1"]


class TopologyReport(BaseModel):
    d_local: int
    d_remote_values: list[int]
    local_abd: LatencyReport
    geo_causal: LatencyReport
    geo_abd: LatencyReport


def _label(report: LatencyReport) -> str:
    kinds = {label.value for label in (report.read_class, report.write_class) if label}
    return "/".join(sorted(kinds)) or "unclassified"


def _sweep(
    algorithm: str,
    sites: list[str],
    d_local: int,
    d_remote_values: Sequence[int],
    seed: int,
) -> LatencyReport:
    workload = alternating_workload(len(sites))
    specs = [
        build_scenario(
            algorithm,
            DelayModel(kind="topology", d_local=d_local, d_remote=d_remote),
            workload,
            seed,
            processes=len(sites),
            sites=sites,
            name=f"topology-{algorithm}-{'-'.join(sorted(set(sites)))}-r{d_remote}",
        )
        for d_remote in d_remote_values
    ]
    return assemble_report(
        algorithm, seed, list(d_remote_values), run_points(specs), sweep_variable="d_remote",
    )


def topology_experiment(
    d_local: int = 1,
    d_remote_values: Sequence[int] = (100, 200, 400),
    seed: int = 0,
) -> TopologyReport:
    if len(set(d_remote_values)) < 3:
        raise ValueError(f"need at least 3 distinct d_remote values, got {list(d_remote_values)}")
    if any(d_local > d_remote for d_remote in d_remote_values):
        raise ValueError(f"d_local={d_local} must not exceed any d_remote")
    report = TopologyReport(
        d_local=d_local,
        d_remote_values=list(d_remote_values),
        local_abd=_sweep("abd", LOCAL_SITES, d_local, d_remote_values, seed),
        geo_causal=_sweep("causal", SPREAD_SITES, d_local, d_remote_values, seed),
        geo_abd=_sweep("abd", SPREAD_SITES, d_local, d_remote_values, seed),
    )
    logger.info(
        f"Topology d_local={d_local}: local ABD {_label(report.local_abd)}, "
        f"geo causal {_label(report.geo_causal)}, geo ABD {_label(report.geo_abd)}"
    )
    return report
