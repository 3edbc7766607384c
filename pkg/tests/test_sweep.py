"""
Tests for secretary_cutoffs.sweep
"""

import math

import pytest

from secretary_cutoffs.exceptions import DomainError, FitError, SpecParseError
from secretary_cutoffs.infrastructure import ResultCache
from secretary_cutoffs.models import QuadratureConfig, SweepConfig, SweepRecord, TopKScoring
from secretary_cutoffs.sweep import ObjectiveParser, PowerLawFitter, SweepRunner, TopKObjective, UtilityObjective, TOPK_GRID, UTILITY_GRID
from secretary_cutoffs.utility import UtilityFunction, UtilityKind


def records_for(pairs, objective="utility:test"):
    return [SweepRecord(objective=objective, n=n, c_opt=c, value=0.0) for n, c in pairs]


class TestObjectiveParser:
    """Tests for objective parsing"""

    def test_topk(self):
        """Test topk:<k>"""
        objective = ObjectiveParser.parse("topk:3")

        assert objective == TopKObjective(3)
        assert objective.label == "topk:3"

    def test_topk_model(self):
        """Test topk:<k>:model"""
        objective = ObjectiveParser.parse("topk:2:model")

        assert objective.scoring is TopKScoring.MODEL
        assert objective.label == "topk:2:model"

    @pytest.mark.parametrize("text", ["utility:linear", "linear"])
    def test_utility(self, text):
        """Test prefixed and bare w-specs"""
        objective = ObjectiveParser.parse(text)

        assert isinstance(objective, UtilityObjective)
        assert objective.utility.kind is UtilityKind.LINEAR
        assert objective.label == "utility:linear"

    @pytest.mark.parametrize("text", ["topk:", "topk:0", "topk:x", "topk:2:fast", "utility:", "cubic"])
    def test_invalid(self, text):
        """Test malformed objectives"""
        with pytest.raises(SpecParseError):
            ObjectiveParser.parse(text)


class TestSweepRunner:
    """Tests for SweepRunner"""

    def test_linear_grid(self):
        """Test c_opt doubles as n quadruples"""
        records = SweepRunner(config=SweepConfig(max_workers=2)).run_sweep(UtilityObjective(UtilityFunction.linear()), [100, 400, 1600])

        assert [r.n for r in records] == [100, 400, 1600]
        assert [r.c_opt for r in records] == [10, 20, 40]
        assert records[0].bound == pytest.approx(math.sqrt(200), rel=1e-6)
        assert records[0].objective == "utility:linear"

    def test_constant_grid(self):
        """Test constant utility has c_opt = 1 and no bound"""
        records = SweepRunner().run_sweep(UtilityObjective(UtilityFunction.constant(-1.0)), [10, 100])

        assert [r.c_opt for r in records] == [1, 1]
        assert all(r.bound is None for r in records)

    def test_step_below_default_epsilon(self):
        """Test a jump inside the default bound neighborhood still yields one record per n"""
        runner = SweepRunner()
        records = runner.run_sweep(UtilityObjective(UtilityFunction.step(0.05)), [100, 200, 400])

        assert [r.n for r in records] == [100, 200, 400]
        assert all(r.bound is None for r in records)
        assert [r.c_opt for r in records] == [runner.optimizer.optimal_cutoff(UtilityFunction.step(0.05), n).c_opt for n in (100, 200, 400)]

    def test_epsilon_is_part_of_key(self):
        """Test records with bounds from another neighborhood are not reused"""
        cache = ResultCache()
        objective = UtilityObjective(UtilityFunction.linear())
        SweepRunner(cache=cache).run_sweep(objective, [100])
        SweepRunner(cache=cache, config=SweepConfig(epsilon=0.05)).run_sweep(objective, [100])

        assert cache.size == 2

    def test_stale_cache_entry_recomputed(self, caplog):
        """Test a cached record with unknown fields counts as a miss"""
        runner = SweepRunner()
        objective = UtilityObjective(UtilityFunction.linear())
        key = ResultCache.make_key(objective.label, 100, runner.optimizer.evaluator.config.cache_key() + ";epsilon=0.1")
        runner.cache.set(key, {"objective": objective.label, "n": 100, "cutoff": 10})

        records = runner.run_sweep(objective, [100])

        assert records[0].c_opt == 10
        assert "Ignoring cached entry" in caplog.text
        assert runner.cache.get(key)["c_opt"] == 10

    def test_topk_grid(self):
        """Test c_opt / n stays near 1/e for k = 1"""
        records = SweepRunner().run_sweep(TopKObjective(1), [200, 400, 800])

        assert all(abs(r.c_opt / r.n - 1 / math.e) < 0.01 for r in records)
        assert all(r.bound is None for r in records)

    @pytest.mark.parametrize("grid", [[], [2, 10], [10, 10], [100, 50]])
    def test_invalid_grid(self, grid):
        """Test grid validation"""
        with pytest.raises(DomainError):
            SweepRunner().run_sweep(TopKObjective(1), grid)

    def test_default_grid(self):
        """Test default grids per objective kind"""
        assert SweepRunner.default_grid(TopKObjective(1)) == TOPK_GRID
        assert SweepRunner.default_grid(UtilityObjective(UtilityFunction.linear())) == UTILITY_GRID

    def test_cache_reused(self):
        """Test a second sweep is served from the cache"""
        runner = SweepRunner()
        first = runner.run_sweep(TopKObjective(2), [50, 100])
        second = runner.run_sweep(TopKObjective(2), [50, 100])

        assert first == second
        assert runner.cache.stats()["hits"] == 2

    def test_persistent_cache_skips_work(self, tmp_path, mocker):
        """Test a new runner resumes from the cache file"""
        path = tmp_path / "cache.json"
        objective = UtilityObjective(UtilityFunction.linear())
        first = SweepRunner(cache=ResultCache(path)).run_sweep(objective, [100, 400])

        runner = SweepRunner(cache=ResultCache(path))
        spy = mocker.spy(runner.optimizer, "optimal_cutoff")
        second = runner.run_sweep(objective, [100, 400])

        assert second == first
        assert spy.call_count == 0

    def test_quadrature_override_changes_key(self):
        """Test records computed under other tolerances are not reused"""
        runner = SweepRunner()
        objective = UtilityObjective(UtilityFunction.linear())
        runner.run_sweep(objective, [100])
        runner.run_sweep(objective, [100], quadrature=QuadratureConfig(abs_tol=1e-9))

        assert runner.cache.size == 2

    def test_progress_bar(self):
        """Test the progress path returns ordered records"""
        records = SweepRunner(show_progress=True).run_sweep(TopKObjective(1), [50, 100, 200])
        assert [r.n for r in records] == [50, 100, 200]

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_topk_linear_growth(self, k):
        """Test top-k cutoffs grow linearly with constant success"""
        records = SweepRunner().run_sweep(TopKObjective(k), TOPK_GRID)
        fit = PowerLawFitter().fit(records)

        assert 0.9 <= fit.exponent <= 1.1
        assert records[-1].value >= 1 / math.e - 0.01

    @pytest.mark.slow
    def test_linear_square_root_growth(self):
        """Test the exponent of 1 - x is 1/2 and the bound holds"""
        records = SweepRunner().run_sweep(UtilityObjective(UtilityFunction.linear()), UTILITY_GRID)
        fit = PowerLawFitter().fit(records)

        assert [r.c_opt for r in records if r.n in (100, 1000, 10000, 100000)] == [10, 32, 100, 316]
        assert 0.45 <= fit.exponent <= 0.55
        assert all(check.passed for check in PowerLawFitter.check_bound(records, slack=2.0))

    @pytest.mark.slow
    @pytest.mark.parametrize("spec", ["pwl:0,0;0.5,-0.2;1,-1", "pwl:0,0;0.2,-0.6;1,-1"])
    def test_lipschitz_square_root_growth(self, spec):
        """Test utilities with a finite nonzero slope at the top grow like sqrt(n)"""
        objective = ObjectiveParser.parse(spec)
        records = SweepRunner().run_sweep(objective, UTILITY_GRID)

        assert 0.45 <= PowerLawFitter().fit(records).exponent <= 0.55
        assert all(check.passed for check in PowerLawFitter.check_bound(records))

    @pytest.mark.slow
    @pytest.mark.parametrize("spec", ["power:2", "step:0.3"])
    def test_flat_top_grows_slower(self, spec):
        """Test utilities flat at the top stay at or below square-root growth"""
        records = SweepRunner().run_sweep(ObjectiveParser.parse(spec), UTILITY_GRID)
        assert PowerLawFitter().fit(records).exponent <= 0.6


class TestPowerLawFitter:
    """Tests for PowerLawFitter"""

    def test_square_root(self):
        """Test an exact sqrt(n) series"""
        fit = PowerLawFitter().fit(records_for([(100, 10), (400, 20), (1600, 40)]))

        assert fit.exponent == pytest.approx(0.5)
        assert fit.log_intercept == pytest.approx(0.0, abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0)
        assert fit.points == 3

    def test_linear(self):
        """Test an exact n / 3 series"""
        fit = PowerLawFitter().fit(records_for([(300, 100), (600, 200), (1200, 400)]))
        assert fit.exponent == pytest.approx(1.0)

    def test_unsorted_input(self):
        """Test records are ordered by n before fitting"""
        fit = PowerLawFitter().fit(records_for([(1600, 40), (100, 10), (400, 20)]))
        assert fit.exponent == pytest.approx(0.5)

    def test_drop_smallest(self):
        """Test the pre-asymptotic point is left out"""
        fit = PowerLawFitter(drop_smallest=True).fit(records_for([(10, 9), (100, 10), (400, 20), (1600, 40)]))

        assert fit.exponent == pytest.approx(0.5)
        assert fit.points == 3

    def test_too_few_points(self):
        """Test fewer than three points"""
        with pytest.raises(FitError, match="at least 3"):
            PowerLawFitter().fit(records_for([(100, 10), (400, 20)]))

    def test_constant_series(self):
        """Test a constant c_opt series"""
        with pytest.raises(FitError, match="constant series"):
            PowerLawFitter().fit(records_for([(10, 1), (100, 1), (1000, 1)]))

    def test_running_exponents(self):
        """Test prefixes shorter than three points have no exponent"""
        exponents = PowerLawFitter().running_exponents(records_for([(100, 10), (400, 20), (1600, 40), (6400, 80)]))

        assert exponents[:2] == [None, None]
        assert exponents[2:] == [pytest.approx(0.5), pytest.approx(0.5)]

    def test_check_bound(self):
        """Test slack comparison and vacuous passes"""
        records = [
            SweepRecord("utility:linear", 100, 10, -0.1, bound=14.1),
            SweepRecord("utility:linear", 400, 60, -0.1, bound=28.3),
            SweepRecord("utility:nsqrt", 400, 60, -0.1),
        ]
        checks = PowerLawFitter.check_bound(records, slack=2.0)

        assert [check.passed for check in checks] == [True, False, True]
        assert checks[0].slack == 2.0
