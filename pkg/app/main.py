"""capsim command line: run scenarios, check histories, run experiments.

Exit status: 0 when the checked property holds (or the replay matched its
construction), 1 when it is violated, 2 on configuration or input errors.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Literal, Optional, Sequence

from pydantic import BaseModel, ValidationError, model_validator

import utils.logging_config  # noqa: F401  (configures logging before anything runs)
from app.models import ALGORITHM_NAMES
from app.scenarios import validate_scenario
from checkers import PROPERTIES, check
from experiments import (
    availability_experiment,
    bound_check_attiya_welch,
    bound_check_lipton_sandberg,
    latency_sweep,
    replay_theorem_1,
    replay_theorem_3,
    topology_experiment,
)
from experiments.reports import dump_json, write_json, write_latency_csv
from histories import is_loss_free, opportunistic, read_history, write_history
from simnet import build_sim, run_to_quiescence
from utils.config import settings
from utils.errors import CapsimError, ScenarioValidationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_ERROR = 2

Subcommand = Literal["run", "check", "sweep", "replay", "avail", "topo", "bounds", "validate"]


class RunConfig(BaseModel):
    """Validated command-line arguments."""
    subcommand: Subcommand
    scenario: Optional[Path] = None
    history: Optional[Path] = None
    output_dir: Path
    seed: Optional[int] = None
    property: Optional[str] = None
    opportunistic: bool = False
    sla: Optional[int] = None
    window: Optional[tuple[int, Optional[int]]] = None
    algorithm: Optional[str] = None
    algorithms: list[str] = ["abd", "causal"]
    delays: list[int] = []
    uncertainty: Optional[int] = None
    theorem: Optional[Literal[1, 3]] = None
    d_local: int = 1
    bound: Optional[Literal["attiya-welch", "lipton-sandberg"]] = None
    variant: str = "fast-read"
    d: int = 100
    u: int = 80

    @model_validator(mode="after")
    def _check_combination(self) -> "RunConfig":
        needs_scenario = {"run", "avail", "validate"}
        if self.subcommand in needs_scenario and self.scenario is None:
            raise ValueError(f"{self.subcommand} requires --scenario")
        if self.subcommand == "check":
            if self.property is None:
                raise ValueError("check requires --property")
            if (self.history is None) == (self.scenario is None):
                raise ValueError("check requires exactly one of --history or --scenario")
        if self.subcommand == "sweep" and self.algorithm is None and self.scenario is None:
            raise ValueError("sweep requires --algorithm or --scenario")
        if self.subcommand == "replay" and self.theorem is None:
            raise ValueError("replay requires --theorem")
        if self.subcommand == "bounds" and self.bound is None:
            raise ValueError("bounds requires --bound")
        return self


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def _window(text: str) -> tuple[int, Optional[int]]:
    start, _, end = text.partition(",")
    try:
        return int(start), int(end) if end.strip() else None
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected START[,END], got '{text}'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capsim",
        description="Simulate replicated registers in the partitionable model and check consistency.",
    )
    parser.add_argument("--output", "-o", dest="output_dir", default=None,
                        help=f"Output directory (default: $CAPSIM_OUTPUT_DIR or '{settings.output_dir}')")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    run = sub.add_parser("run", help="Run a scenario to quiescence and write its history")
    run.add_argument("--scenario", "-s", required=True)
    run.add_argument("--seed", type=int)

    chk = sub.add_parser("check", help="Check a consistency property of a history")
    source = chk.add_mutually_exclusive_group(required=True)
    source.add_argument("--history")
    source.add_argument("--scenario", "-s")
    chk.add_argument("--property", "-p", required=True, choices=sorted(PROPERTIES))
    chk.add_argument("--opportunistic", action="store_true",
                     help="Check the opportunistic form (holds on partitioned executions)")
    chk.add_argument("--seed", type=int)

    sweep = sub.add_parser("sweep", help="Latency sweep over network delays")
    sweep.add_argument("--algorithm", "-a", choices=ALGORITHM_NAMES)
    sweep.add_argument("--delays", type=_int_list, default=[10, 50, 100])
    sweep.add_argument("--scenario", "-s", help="Take workload and process layout from this scenario")
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--uncertainty", type=int, help="Use uniform delays on [d-u, d]")

    replay = sub.add_parser("replay", help="Replay an impossibility construction")
    replay.add_argument("--theorem", type=int, choices=[1, 3], required=True)

    avail = sub.add_parser("avail", help="SLA availability of a scenario under several algorithms")
    avail.add_argument("--scenario", "-s", required=True)
    avail.add_argument("--sla", type=int)
    avail.add_argument("--algorithms", type=lambda t: [a for a in t.split(",") if a],
                       default=["abd", "causal"])
    avail.add_argument("--window", type=_window, help="START[,END] over request times")
    avail.add_argument("--seed", type=int)

    topo = sub.add_parser("topo", help="Two-level topology experiment")
    topo.add_argument("--d-local", type=int, default=1)
    topo.add_argument("--d-remote", dest="delays", type=_int_list, default=[100, 200, 400])
    topo.add_argument("--seed", type=int)

    bounds = sub.add_parser("bounds", help="Check measured latencies against a lower bound")
    bounds.add_argument("--bound", choices=["attiya-welch", "lipton-sandberg"], required=True)
    bounds.add_argument("--variant", default="fast-read", choices=["fast-read", "fast-write"])
    bounds.add_argument("-d", type=int, default=100)
    bounds.add_argument("-u", type=int, default=80)
    bounds.add_argument("--seed", type=int)

    validate = sub.add_parser("validate", help="Validate a scenario file")
    validate.add_argument("--scenario", "-s", required=True)
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    args["output_dir"] = args.get("output_dir") or settings.output_dir
    return RunConfig.model_validate({k: v for k, v in args.items() if v is not None})


def _load_spec(config: RunConfig):
    spec = validate_scenario(config.scenario)
    return spec if config.seed is None else spec.with_seed(config.seed)


def _run(config: RunConfig) -> int:
    spec = _load_spec(config)
    history = run_to_quiescence(build_sim(spec))
    path = write_history(history, config.output_dir / f"{spec.name}.ndjson")
    print(
        f"run {spec.name}: {len(history.ops)} ops, {len(history.unfinished)} unfinished, "
        f"loss-free={is_loss_free(history)}, history={path}"
    )
    return EXIT_OK


def _check(config: RunConfig) -> int:
    if config.history is not None:
        history = read_history(config.history)
    else:
        history = run_to_quiescence(build_sim(_load_spec(config)))
    if config.opportunistic:
        verdict = opportunistic(PROPERTIES[config.property], history)
    else:
        verdict = check(history, config.property)
    print(json.dumps(verdict.model_dump(mode="json", exclude_none=True), sort_keys=True))
    return EXIT_OK if verdict.satisfied else EXIT_VIOLATED


def _sweep(config: RunConfig) -> int:
    seed = config.seed
    workload, processes, sites = None, 3, None
    algorithm = config.algorithm
    if config.scenario is not None:
        spec = validate_scenario(config.scenario)
        workload, processes, sites = spec.workload, spec.processes.count, spec.processes.sites
        algorithm = algorithm or spec.algorithm.name
        seed = spec.seed if seed is None else seed
    seed = 0 if seed is None else seed
    report = latency_sweep(
        algorithm, config.delays, workload, seed,
        processes=processes, uncertainty=config.uncertainty, sites=sites,
    )
    stem = config.output_dir / f"sweep-{algorithm}-s{seed}"
    write_latency_csv(report, stem.with_suffix(".csv"))
    write_json(report, stem.with_suffix(".json"))
    print(
        f"sweep {algorithm} d={config.delays}: reads "
        f"{report.read_class.value if report.read_class else '-'}, writes "
        f"{report.write_class.value if report.write_class else '-'} ({stem}.csv)"
    )
    return EXIT_OK


def _replay(config: RunConfig) -> int:
    replay = replay_theorem_1() if config.theorem == 1 else replay_theorem_3()
    out = config.output_dir / f"replay-theorem{config.theorem}"
    for label, history in replay.histories.items():
        write_history(history, out / f"{label}.ndjson")
    write_json(replay, out / "summary.json")
    if config.theorem == 1:
        print(
            f"theorem 1: E1 linearizable={replay.e1_verdict.satisfied} "
            f"loss-free={replay.e1_loss_free}; E2 linearizable={replay.e2_verdict.satisfied} "
            f"loss-free={replay.e2_loss_free}"
        )
    else:
        print(
            f"theorem 3: eventual={replay.verdict.satisfied}, "
            f"opportunistic={replay.opportunistic_verdict.satisfied}, "
            f"healed={replay.healed_verdict.satisfied}"
        )
    return EXIT_OK if replay.matches_construction else EXIT_VIOLATED


def _avail(config: RunConfig) -> int:
    spec = _load_spec(config)
    reports = availability_experiment(spec, config.sla, config.algorithms, config.window)
    write_json(reports, config.output_dir / f"avail-{spec.name}.json")
    summary = ", ".join(f"{r.algorithm}={r.fraction_within_bound:.3f}" for r in reports)
    print(f"avail {spec.name} sla={reports[0].latency_bound}: {summary}")
    return EXIT_OK


def _topo(config: RunConfig) -> int:
    seed = 0 if config.seed is None else config.seed
    report = topology_experiment(config.d_local, config.delays, seed)
    out = config.output_dir / f"topology-s{seed}"
    write_latency_csv([report.local_abd, report.geo_causal, report.geo_abd], out.with_suffix(".csv"))
    write_json(report, out.with_suffix(".json"))
    print(
        f"topo d_local={config.d_local} d_remote={config.delays}: "
        f"local abd {report.local_abd.write_class.value}, "
        f"geo causal {report.geo_causal.write_class.value}, "
        f"geo abd {report.geo_abd.write_class.value}"
    )
    return EXIT_OK


def _bounds(config: RunConfig) -> int:
    seed = 0 if config.seed is None else config.seed
    if config.bound == "attiya-welch":
        report = bound_check_attiya_welch(config.d, config.u, seed)
    else:
        report = bound_check_lipton_sandberg(config.variant, config.d, seed)
    sys.stdout.write(dump_json(report))
    return EXIT_OK


def _validate(config: RunConfig) -> int:
    spec = validate_scenario(config.scenario)
    print(f"{config.scenario}: valid scenario '{spec.name}' ({spec.algorithm.name})")
    return EXIT_OK


HANDLERS = {
    "run": _run,
    "check": _check,
    "sweep": _sweep,
    "replay": _replay,
    "avail": _avail,
    "topo": _topo,
    "bounds": _bounds,
    "validate": _validate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_config(argv)
        return HANDLERS[config.subcommand](config)
    except ScenarioValidationError as e:
        for error in e.errors:
            print(f"{e.path}: {error['loc']}: {error['msg']}", file=sys.stderr)
        logger.error(f"Invalid scenario {e.path}")
        return EXIT_ERROR
    except (CapsimError, ValidationError, OSError, ValueError) as e:
        logger.error(f"capsim failed: {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
