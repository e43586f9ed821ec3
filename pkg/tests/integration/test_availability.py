"""SLA availability under a mid-run partition isolating a client from the majority."""
import pytest

from app.scenarios import shipped
from experiments import availability_experiment, availability_report
from simnet import build_sim, run_to_quiescence


@pytest.fixture(scope="module")
def reports():
    return {r.algorithm: r for r in availability_experiment(shipped("availability_partition"), 500)}


class TestAvailability:
    """Tests for the availability experiment on the shipped partition scenario."""

    @pytest.mark.integration
    def test_delay_independent_register_is_unaffected(self, reports):
        """Test every causal request finishes within the bound."""
        causal = reports["causal"]
        assert causal.invoked == 30
        assert causal.fraction_within_bound == 1.0

    @pytest.mark.integration
    def test_quorum_register_misses_during_partition(self, reports):
        """Test abd misses exactly the nine requests that queue past the bound."""
        abd = reports["abd"]
        assert abd.invoked == 30
        # requests at 1000..1800 finish at 2040 + 40k, the one at 1900 lands on 500 exactly
        assert abd.within_bound == 21
        assert abd.fraction_within_bound == pytest.approx(0.7)

    @pytest.mark.integration
    def test_misses_are_the_requests_issued_during_the_partition(self):
        """Test windowed reports split the run at the partition."""
        history = run_to_quiescence(build_sim(shipped("availability_partition")))
        before = availability_report(history, 500, window=(0, 1000))
        during = availability_report(history, 500, window=(1000, 1500))
        after = availability_report(history, 500, window=(2100, None))
        assert before.fraction_within_bound == 1.0
        assert during.within_bound == 0
        assert after.fraction_within_bound == 1.0

    @pytest.mark.integration
    def test_all_operations_eventually_complete(self):
        history = run_to_quiescence(build_sim(shipped("availability_partition")))
        assert history.unfinished == []
        assert history.unstarted == []
