"""
Tests for secretary_cutoffs.simulation
"""

import math

import numpy as np
import pytest

from secretary_cutoffs.exceptions import DomainError, SimulationError
from secretary_cutoffs.models import SimConfig, Variant
from secretary_cutoffs.simulation import BlockStreams, MonteCarloSimulator, RunningStats
from secretary_cutoffs.simulation.montecarlo import DEBUG_ENV, debug_enabled
from secretary_cutoffs.utility import UtilityFunction
from tests.conftest import CORPUS


def drawn_triples(count, seed):
    """Seeded (utility name, n <= 100, c) triples"""
    rng = np.random.default_rng(seed)
    names = sorted(CORPUS)
    triples = []
    for _ in range(count):
        n = int(rng.integers(2, 101))
        triples.append((names[int(rng.integers(len(names)))], n, int(rng.integers(1, n + 1))))
    return triples


class TestBlockStreams:
    """Tests for counter-keyed streams"""

    def test_same_key_same_numbers(self):
        """Test a block stream is a pure function of its key"""
        first = BlockStreams(42, 1).generator(3).random(5)
        second = BlockStreams(42, 1).generator(3).random(5)
        np.testing.assert_array_equal(first, second)

    def test_tags_separate_streams(self):
        """Test variant tags give independent draws"""
        assert not np.array_equal(BlockStreams(42, 1).generator(0).random(5), BlockStreams(42, 2).generator(0).random(5))


class TestRunningStats:
    """Tests for mergeable statistics"""

    def test_matches_numpy(self):
        """Test block merging equals one pass over the data"""
        values = np.random.default_rng(0).normal(size=1000)
        stats = RunningStats()
        for chunk in np.array_split(values, 7):
            stats.add_block(chunk)

        assert stats.count == 1000
        assert stats.mean == pytest.approx(float(np.mean(values)), abs=1e-12)
        assert stats.variance == pytest.approx(float(np.var(values, ddof=1)), rel=1e-10)

    def test_single_value(self):
        """Test no spread from one value"""
        stats = RunningStats()
        stats.add_block(np.array([2.0]))

        assert stats.stderr == 0.0
        assert stats.variance == 0.0


class TestAcceptPositions:
    """Tests for vectorized cutoff decisions"""

    def test_first_record_after_cutoff(self):
        """Test the first strict record past the rejected prefix"""
        values = np.array([[3, 5, 1, 2, 4], [2, 1, 3, 4, 5], [1, 2, 3, 4, 5]])
        np.testing.assert_array_equal(MonteCarloSimulator.accept_positions(values, 2), [2, 1, 4])

    def test_forced_last(self):
        """Test no record means the last applicant"""
        values = np.array([[1, 4, 3, 2]])
        np.testing.assert_array_equal(MonteCarloSimulator.accept_positions(values, 3), [3])

    def test_ties_are_not_records(self):
        """Test records must be strictly better"""
        values = np.array([[0.5, 0.5, 0.7]])
        np.testing.assert_array_equal(MonteCarloSimulator.accept_positions(values, 2), [2])

    @pytest.mark.parametrize("c, expected", [(1, 0), (4, 3)])
    def test_boundaries(self, c, expected):
        """Test c = 1 and c = n"""
        values = np.array([[2, 3, 1, 4]])
        np.testing.assert_array_equal(MonteCarloSimulator.accept_positions(values, c), [expected])


class TestMonteCarloSimulator:
    """Tests for MonteCarloSimulator"""

    def test_topk_two_applicants(self, simulator):
        """Test Pr[best] = 1/2 at n = 2, c = 2"""
        result = simulator.simulate(None, SimConfig(Variant.TOPK, 2, 2, 1_000_000, 7, k=1))

        assert result.trials == 1_000_000
        assert abs(result.mean - 0.5) <= 4 * result.stderr

    def test_constant_payoff(self, simulator):
        """Test w = -1 has no variance"""
        result = simulator.simulate(UtilityFunction.constant(-1.0), SimConfig(Variant.P2, 20, 5, 5000, 1))

        assert result.mean == pytest.approx(-1.0)
        assert result.stderr == 0.0

    def test_p2_three_applicants(self, simulator, neg_linear):
        """Test P2 against -5/12"""
        result = simulator.simulate(neg_linear, SimConfig(Variant.P2, 3, 2, 1_000_000, 11))
        assert abs(result.mean + 5.0 / 12.0) <= 4 * result.stderr

    @pytest.mark.parametrize("name, n, c", [("linear", 20, 5), ("nsqrt", 50, 8), ("step", 30, 10), ("pwl_concave", 100, 12)])
    def test_p2_matches_exact(self, simulator, evaluator, name, n, c):
        """Test uniform-type episodes agree with quadrature"""
        w = CORPUS[name]
        result = simulator.simulate(w, SimConfig(Variant.P2, n, c, 200_000, 3))
        expected = evaluator.expected_utility(w, n, c).expected_utility
        assert abs(result.mean - expected) <= 4 * result.stderr

    @pytest.mark.slow
    @pytest.mark.parametrize("name, n, c", drawn_triples(10, seed=2024))
    def test_p2_matches_exact_drawn(self, simulator, evaluator, name, n, c):
        """Test a million uniform-type episodes agree with quadrature on drawn (w, n, c)"""
        w = CORPUS[name]
        result = simulator.simulate(w, SimConfig(Variant.P2, n, c, 1_000_000, 17))
        expected = evaluator.expected_utility(w, n, c).expected_utility
        assert abs(result.mean - expected) <= 4 * result.stderr + 1e-9

    def test_p1_matches_ranked(self, simulator, evaluator):
        """Test rank-order episodes agree with the exact rank payoff"""
        w = UtilityFunction.linear()
        result = simulator.simulate(w, SimConfig(Variant.P1, 10, 4, 200_000, 5))
        assert abs(result.mean - evaluator.ranked_expected_utility(w, 10, 4)) <= 4 * result.stderr

    def test_topk_matches_closed_form(self, simulator, topk_analyzer):
        """Test top-k episodes against the exact probability"""
        result = simulator.simulate(None, SimConfig(Variant.TOPK, 40, 12, 200_000, 9, k=3))
        assert abs(result.mean - topk_analyzer.success_probability_closed(40, 3, 12)) <= 4 * result.stderr

    def test_deterministic(self, neg_linear):
        """Test the same seed gives the same result for any worker count"""
        config = SimConfig(Variant.P2, 50, 7, 30_000, 123)
        single = MonteCarloSimulator(max_workers=1, block_cells=10_000).simulate(neg_linear, config)
        pooled = MonteCarloSimulator(max_workers=4, block_cells=10_000).simulate(neg_linear, config)
        repeat = MonteCarloSimulator(max_workers=4, block_cells=10_000).simulate(neg_linear, config)

        assert single == pooled == repeat

    def test_seed_changes_result(self, simulator, neg_linear):
        """Test different seeds draw different episodes"""
        first = simulator.simulate(neg_linear, SimConfig(Variant.P2, 10, 3, 1000, 1))
        second = simulator.simulate(neg_linear, SimConfig(Variant.P2, 10, 3, 1000, 2))
        assert first.mean != second.mean

    def test_missing_utility(self, simulator):
        """Test P1 and P2 need a utility"""
        with pytest.raises(DomainError):
            simulator.simulate(None, SimConfig(Variant.P2, 10, 3, 10, 0))

    def test_debug_checks_permutations(self, neg_linear):
        """Test debug mode validates rank rows"""
        result = MonteCarloSimulator(debug=True).simulate(neg_linear, SimConfig(Variant.P1, 10, 3, 1000, 0))
        assert result.trials == 1000

    def test_bad_permutation_raises(self):
        """Test a repeated rank is reported"""
        with pytest.raises(SimulationError):
            MonteCarloSimulator._check_permutations(np.array([[1, 2, 2]]))

    @pytest.mark.parametrize("value, expected", [("1", True), ("on", True), ("0", False), ("", False)])
    def test_debug_env(self, monkeypatch, value, expected):
        """Test the debug toggle is read from the environment"""
        monkeypatch.setenv(DEBUG_ENV, value)
        assert debug_enabled() is expected

    def test_progress_bar(self, neg_linear):
        """Test the progress path returns the same result"""
        config = SimConfig(Variant.P2, 10, 3, 5000, 8)
        quiet = MonteCarloSimulator(block_cells=1000).simulate(neg_linear, config)
        loud = MonteCarloSimulator(block_cells=1000, show_progress=True).simulate(neg_linear, config)
        assert quiet == loud

    def test_p1_p2_gap_constant(self, simulator):
        """Test no gap for constant utility"""
        assert simulator.p1_p2_gap(UtilityFunction.constant(-1.0), 10, 3, 1000, 0) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.slow
    def test_p1_p2_gap_shrinks(self, simulator):
        """Test the rank-order and uniform-type problems converge"""
        w = UtilityFunction.linear()
        small = np.mean([simulator.p1_p2_gap(w, 10, 3, 200_000, seed) for seed in range(5)])
        large = np.mean([simulator.p1_p2_gap(w, 1000, 32, 20_000, seed) for seed in range(5)])
        assert large < small


class TestConfigValidation:
    """Tests for SimConfig"""

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"variant": Variant.P2, "n": 10, "c": 3, "trials": 10, "seed": 0, "k": 2},
            {"variant": Variant.TOPK, "n": 10, "c": 3, "trials": 10, "seed": 0},
            {"variant": Variant.P2, "n": 10, "c": 11, "trials": 10, "seed": 0},
            {"variant": Variant.P2, "n": 10, "c": 3, "trials": 0, "seed": 0},
            {"variant": Variant.P2, "n": 10, "c": 3, "trials": 10, "seed": -1},
            {"variant": Variant.P2, "n": 10, "c": 3, "trials": 10, "seed": 2**64},
        ],
    )
    def test_invalid(self, kwargs):
        """Test invalid run descriptions"""
        with pytest.raises(DomainError):
            SimConfig(**kwargs)


class TestConcentration:
    """Tests for order-statistic experiments"""

    def test_two_applicants(self, simulator):
        """Test the fraction of a single trial is 0 or 1"""
        assert simulator.order_stat_deviation(2, 1, 0) in (0.0, 1.0)

    @pytest.mark.slow
    def test_deviation_rare(self, simulator):
        """Test sorted uniforms hug i/n at n = 1e4"""
        assert simulator.order_stat_deviation(10_000, 1000, 0) <= 0.01

    def test_tail_below_chernoff(self, simulator):
        """Test the empirical tail respects exp(-2 n epsilon^2)"""
        empirical, bound = simulator.order_stat_tail(2000, 1000, 0.02, 2000, 0)

        assert bound == pytest.approx(math.exp(-1.6))
        assert empirical <= bound + 3 * math.sqrt(bound * (1 - bound) / 2000)

    @pytest.mark.parametrize("n, i, epsilon, trials", [(1, 1, 0.1, 10), (10, 0, 0.1, 10), (10, 11, 0.1, 10), (10, 5, 0.0, 10), (10, 5, 0.1, 0)])
    def test_tail_domain(self, simulator, n, i, epsilon, trials):
        """Test invalid tail arguments"""
        with pytest.raises(DomainError):
            simulator.order_stat_tail(n, i, epsilon, trials, 0)
