"""Randomized acceptance runs: checkers against a brute-force oracle, registers against checkers."""
import random

import pytest
from hypothesis import HealthCheck, given, settings as hypothesis_settings
from hypothesis import strategies as st

from app.models import DelayModel, FaultSpec
from app.models_history import INITIAL_TAG, History, Value
from checkers import check_causal, check_eventual, check_linearizable, check_sequential, replay_witness
from experiments.workloads import build_scenario, random_workload
from histories import check_link_invariants, dump_history, is_loss_free
from simnet import build_sim, run_to_quiescence
from tests.fixtures.histories import HistoryBuilder


def random_history(rng: random.Random, max_ops: int = 7, processes: int = 3) -> History:
    builder = HistoryBuilder(process_count=processes)
    cursor = [0] * processes
    written = []
    payload = 1
    for _ in range(rng.randint(1, max_ops)):
        pid = rng.randrange(processes)
        invoke = cursor[pid] + rng.randint(0, 6)
        response = invoke + rng.randint(1, 8)
        cursor[pid] = response + 1
        if rng.random() < 0.5:
            written.append(builder.write(pid, payload, invoke, response))
            payload += 1
        else:
            returns = rng.choice([None, *written])
            builder.read(pid, invoke, response, returns=returns or Value.initial(builder.initial))
    return builder.build()


def brute_force(history: History, real_time: bool) -> bool:
    """Try every order that respects the precedence constraints."""
    ops = list(history.ops)

    def precedes(a, b) -> bool:
        if a.process == b.process and a.invoke_time < b.invoke_time:
            return True
        return real_time and a.response_time < b.invoke_time

    def extend(placed: list, tag) -> bool:
        if len(placed) == len(ops):
            return True
        for op in ops:
            if op in placed:
                continue
            if any(precedes(other, op) for other in ops if other is not op and other not in placed):
                continue
            if op.kind == "write":
                following = op.value_in.tag
            elif op.value_out.tag == tag:
                following = tag
            else:
                continue
            if extend([*placed, op], following):
                return True
        return False

    return extend([], INITIAL_TAG)


def random_faults(rng: random.Random, processes: int = 3) -> list[FaultSpec]:
    faults = []
    for _ in range(rng.randint(0, 2)):
        start = rng.randint(0, 300)
        end = rng.choice([None, start + rng.randint(1, 400)])
        if rng.random() < 0.5:
            members = list(range(processes))
            rng.shuffle(members)
            cut = rng.randint(1, processes - 1)
            faults.append(FaultSpec(
                kind="partition", groups=[members[:cut], members[cut:]],
                start=start, end=end, retransmit=rng.random() < 0.5,
            ))
        elif rng.random() < 0.5:
            faults.append(FaultSpec(
                kind="drop", probability=rng.random(), start=start, end=end,
                retransmit=rng.random() < 0.5,
            ))
        else:
            low = rng.randint(0, 20)
            faults.append(FaultSpec(kind="drop", ids=(low, low + rng.randint(0, 5)), start=start, end=end))
    return faults


def random_run(algorithm: str, seed: int, faults=(), probes: bool = False, max_ops: int = 8):
    rng = random.Random(seed)
    workload = random_workload(rng, processes=3, max_ops=max_ops, max_time=200)
    spec = build_scenario(
        algorithm, DelayModel(kind="uniform", d=rng.randint(1, 30)), workload, seed,
        faults=faults, probes=probes,
    )
    return run_to_quiescence(build_sim(spec))


class TestCheckersAgainstOracle:
    """Tests for the checkers against brute-force search on random histories."""

    @pytest.mark.integration
    @pytest.mark.slow
    def test_linearizability_matches_exhaustive_search(self):
        """Test the linearizability checker agrees with trying every permutation."""
        rng = random.Random(2024)
        outcomes = set()
        for _ in range(500):
            history = random_history(rng)
            expected = brute_force(history, real_time=True)
            verdict = check_linearizable(history)
            assert verdict.satisfied == expected, dump_history(history)
            if verdict.satisfied:
                assert replay_witness(history, verdict.witness.order)
            outcomes.add(expected)
        assert outcomes == {True, False}

    @pytest.mark.integration
    @pytest.mark.slow
    def test_sequential_matches_exhaustive_search(self):
        """Test the sequential checker agrees with trying every permutation."""
        rng = random.Random(7)
        for _ in range(500):
            history = random_history(rng)
            assert check_sequential(history).satisfied == brute_force(history, real_time=False)

    @pytest.mark.integration
    @pytest.mark.slow
    def test_linearizable_implies_sequential(self):
        """Test no history is linearizable without also being sequential."""
        rng = random.Random(99)
        for _ in range(500):
            history = random_history(rng)
            if check_linearizable(history).satisfied:
                assert check_sequential(history).satisfied


class TestRegistersAgainstCheckers:
    """Tests for random register runs against the checkers."""

    @pytest.mark.integration
    @pytest.mark.slow
    def test_loss_free_abd_runs_are_linearizable(self):
        """Test every loss-free abd run is linearizable."""
        for seed in range(100):
            history = random_run("abd", seed)
            assert is_loss_free(history)
            assert history.unfinished == []
            assert check_linearizable(history).satisfied, dump_history(history)

    @pytest.mark.integration
    @pytest.mark.slow
    def test_causal_runs_are_causal_with_and_without_drops(self):
        """Test causal runs stay causal whether or not messages drop."""
        for seed in range(100):
            assert check_causal(random_run("causal", seed)).satisfied
            drops = [FaultSpec(kind="drop", probability=0.3, start=0, end=150)]
            assert check_causal(random_run("causal", seed, faults=drops)).satisfied

    @pytest.mark.integration
    @pytest.mark.slow
    def test_loss_free_eventual_runs_converge(self):
        """Test loss-free eventual runs converge at every probe."""
        for seed in range(50):
            history = random_run("eventual", seed, probes=True)
            assert is_loss_free(history)
            assert check_eventual(history).satisfied


class TestLinkInvariants:
    """Tests for link invariants under random fault schedules."""

    @pytest.mark.integration
    @pytest.mark.slow
    def test_random_fault_schedules_keep_link_invariants(self):
        """Test random drops never break the link invariants."""
        for seed in range(1000):
            rng = random.Random(seed)
            faults = random_faults(rng)
            algorithm = rng.choice(["abd", "causal", "eventual", "leader-fast-read"])
            history = random_run(algorithm, seed, faults=faults, max_ops=4)
            assert check_link_invariants(history) == [], seed
            if seed % 50 == 0:
                again = random_run(algorithm, seed, faults=faults, max_ops=4)
                assert dump_history(again) == dump_history(history)

    @pytest.mark.integration
    @hypothesis_settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(
        seed=st.integers(min_value=0, max_value=10_000),
        start=st.integers(min_value=0, max_value=200),
        length=st.one_of(st.none(), st.integers(min_value=1, max_value=300)),
        retransmit=st.booleans(),
        isolated=st.integers(min_value=0, max_value=2),
    )
    def test_partitions_never_duplicate_or_create(self, seed, start, length, retransmit, isolated):
        """Test partitions only ever lose messages."""
        others = [p for p in range(3) if p != isolated]
        fault = FaultSpec(
            kind="partition", groups=[[isolated], others], start=start,
            end=None if length is None else start + length, retransmit=retransmit,
        )
        history = random_run("eventual", seed, faults=[fault], max_ops=4)
        assert check_link_invariants(history) == []
        if length is not None and retransmit:
            assert is_loss_free(history)
