"""Tests for scenario model validation."""
import pytest
from pydantic import ValidationError

from app.models import AlgorithmSpec, DelayModel, FaultSpec, ProcessLayout, ScenarioSpec, WorkloadOp
from app.models_history import Value, Verdict, Witness


class TestDelayModel:
    """Tests for DelayModel validation."""

    @pytest.mark.unit
    def test_uncertainty_defaults_to_d(self):
        """Test u falls back to d."""
        assert DelayModel(kind="uniform", d=40).uncertainty == 40
        assert DelayModel(kind="fixed", d=40).uncertainty == 0

    @pytest.mark.unit
    def test_rejects_uncertainty_above_delay(self):
        """Test u > d is rejected."""
        with pytest.raises(ValidationError, match="exceeds delay"):
            DelayModel(kind="uniform", d=10, u=11)

    @pytest.mark.unit
    def test_topology_needs_both_delays(self):
        """Test a topology model needs d_local and d_remote."""
        with pytest.raises(ValidationError):
            DelayModel(kind="topology", d_local=1)
        with pytest.raises(ValidationError, match="d_local"):
            DelayModel(kind="topology", d_local=10, d_remote=5)
        assert DelayModel(kind="topology", d_local=1, d_remote=100).max_delay == 100


class TestFaultSpec:
    """Tests for FaultSpec validation and activity windows."""

    @pytest.mark.unit
    def test_partition_groups_must_be_disjoint(self):
        """Test a process may sit in one group only."""
        with pytest.raises(ValidationError, match="overlap"):
            FaultSpec(kind="partition", groups=[[0, 1], [1, 2]])

    @pytest.mark.unit
    def test_partition_needs_two_non_empty_groups(self):
        """Test a partition has at least two non-empty groups."""
        with pytest.raises(ValidationError):
            FaultSpec(kind="partition", groups=[[0, 1]])
        with pytest.raises(ValidationError):
            FaultSpec(kind="partition", groups=[[0], []])

    @pytest.mark.unit
    def test_end_must_follow_start(self):
        """Test end must be after start."""
        with pytest.raises(ValidationError):
            FaultSpec(kind="partition", groups=[[0], [1]], start=10, end=10)

    @pytest.mark.unit
    def test_drop_needs_exactly_one_selector(self):
        """Test a drop fault takes ids or probability, not both."""
        with pytest.raises(ValidationError):
            FaultSpec(kind="drop")
        with pytest.raises(ValidationError):
            FaultSpec(kind="drop", probability=0.5, ids=(0, 3))
        assert FaultSpec(kind="drop", ids=(2, 4)).ids == (2, 4)

    @pytest.mark.unit
    def test_active_window_and_separation(self):
        """Test the window is half-open and only listed processes are separated."""
        fault = FaultSpec(kind="partition", groups=[[0, 1], [2]], start=100, end=200)
        assert not fault.active_at(99)
        assert fault.active_at(100)
        assert not fault.active_at(200)
        assert fault.separates(0, 2)
        assert not fault.separates(0, 1)
        # process 3 is in no group, so the partition does not touch it
        assert not fault.separates(0, 3)

    @pytest.mark.unit
    def test_forever_partition(self):
        fault = FaultSpec(kind="partition", groups=[[0], [1]])
        assert fault.forever
        assert fault.active_at(10**9)


class TestScenarioSpec:
    """Tests for ScenarioSpec cross-field checks."""

    @pytest.mark.unit
    def test_write_needs_value(self):
        """Test a write request must carry a value."""
        with pytest.raises(ValidationError, match="need a value"):
            WorkloadOp(time=0, process=0, op="write")

    @pytest.mark.unit
    def test_rejects_unknown_process_ids(self, make_scenario):
        """Test requests at missing processes are rejected."""
        with pytest.raises(ValidationError, match="unknown process"):
            make_scenario(processes=2, workload=[{"time": 0, "process": 5, "op": "read"}])
        with pytest.raises(ValidationError, match="unknown process id"):
            make_scenario(processes=2, faults=[{"kind": "partition", "groups": [[0], [3]]}])

    @pytest.mark.unit
    def test_rejects_requests_past_horizon(self, make_scenario):
        """Test requests after the horizon are rejected."""
        with pytest.raises(ValidationError, match="past the horizon"):
            make_scenario(horizon=100, workload=[{"time": 101, "process": 0, "op": "read"}])

    @pytest.mark.unit
    def test_rejects_unknown_algorithm(self):
        """Test unknown algorithm names are rejected."""
        with pytest.raises(ValidationError, match="leader-fast-read"):
            ScenarioSpec.model_validate({
                "processes": {"count": 1},
                "algorithm": {"name": "paxos"},
                "delay": {"kind": "fixed", "d": 1},
                "seed": 0,
                "horizon": 10,
            })

    @pytest.mark.unit
    def test_sites_must_match_count(self):
        """Test one site per process."""
        with pytest.raises(ValidationError):
            ProcessLayout(count=3, sites=["dc0"])
        assert ProcessLayout(count=2).site_of(1) == "dc0"

    @pytest.mark.unit
    def test_retry_interval_scales_with_delay(self, make_scenario):
        """Test the default retry interval is a multiple of the largest delay."""
        assert make_scenario(d=10).retry_interval(5) == 50
        assert make_scenario(d=0).retry_interval(5) == 1
        spec = make_scenario().model_copy(
            update={"algorithm": AlgorithmSpec(name="abd", retry_interval=7)}
        )
        assert spec.retry_interval(5) == 7


class TestVerdict:
    @pytest.mark.unit
    def test_exactly_one_of_witness_or_counterexample(self):
        """Test a verdict carries a witness or a counterexample, never both."""
        Verdict(property="x", satisfied=True, witness=Witness(kind="partitioned"))
        Verdict(property="x", satisfied=False, counterexample={"reason": "r"})
        with pytest.raises(ValidationError):
            Verdict(property="x", satisfied=True)
        with pytest.raises(ValidationError):
            Verdict(
                property="x",
                satisfied=False,
                witness=Witness(kind="partitioned"),
                counterexample={"reason": "r"},
            )

    @pytest.mark.unit
    def test_initial_value(self):
        assert Value.initial(3).is_initial
        assert not Value(payload=3, writer=0, tag=(1, 0)).is_initial
