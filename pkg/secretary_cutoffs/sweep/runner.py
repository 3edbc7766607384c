"""
Sweeps of the optimal cutoff over a grid of n
"""

import logging
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Dict, List, Optional, Sequence

from alive_progress import alive_bar

from secretary_cutoffs.exceptions import DomainError
from secretary_cutoffs.infrastructure.cache_manager import ResultCache
from secretary_cutoffs.models import CutoffBound, QuadratureConfig, SweepConfig, SweepRecord
from secretary_cutoffs.optimization import CutoffOptimizer
from secretary_cutoffs.sweep.objectives import Objective, TopKObjective, UtilityObjective
from secretary_cutoffs.topk import TopKAnalyzer

UTILITY_GRID = (100, 316, 1000, 3162, 10000, 100000)
TOPK_GRID = (200, 400, 800, 1600, 3200)


class SweepRunner:
    """Compute one SweepRecord per n, in parallel, ordered by n"""

    def __init__(
        self,
        optimizer: Optional[CutoffOptimizer] = None,
        topk: Optional[TopKAnalyzer] = None,
        cache: Optional[ResultCache] = None,
        config: Optional[SweepConfig] = None,
        show_progress: bool = False,
    ):
        """
        Initialize sweep runner

        Args:
            optimizer: Cutoff search for utility objectives
            topk: Top-k analyzer for top-k objectives
            cache: Result cache (in-memory if omitted)
            config: Bound neighborhood and worker count
            show_progress: Draw a progress bar on stderr
        """
        self.optimizer = optimizer or CutoffOptimizer()
        self.topk = topk or TopKAnalyzer()
        self.cache = cache or ResultCache()
        self.config = config or SweepConfig()
        self.show_progress = show_progress
        self.logger = logging.getLogger(__name__)

    @staticmethod
    def default_grid(objective: Objective) -> Sequence[int]:
        return TOPK_GRID if isinstance(objective, TopKObjective) else UTILITY_GRID

    def run_sweep(self, objective: Objective, n_grid: Sequence[int], quadrature: Optional[QuadratureConfig] = None) -> List[SweepRecord]:
        """
        Optimal cutoff at every n of the grid

        Args:
            objective: Utility or top-k objective
            n_grid: Strictly increasing sizes, each >= 3
            quadrature: Tolerances overriding the optimizer's

        Returns:
            Records sorted by n

        Raises:
            DomainError: For an invalid grid
        """
        grid = list(n_grid)
        if not grid or any(n < 3 for n in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
            raise DomainError("grid must be strictly increasing with every n >= 3", f"grid: {grid}")

        optimizer = self.optimizer
        if quadrature is not None and quadrature != optimizer.evaluator.config:
            optimizer = CutoffOptimizer.create_default(quadrature)
        config_key = optimizer.evaluator.config.cache_key()
        if isinstance(objective, UtilityObjective):
            config_key += f";epsilon={self.config.epsilon!r}"

        bound_template: Optional[CutoffBound] = None
        if isinstance(objective, UtilityObjective):
            bound_template = self._bound_template(objective, optimizer, grid[0])
            if not bound_template.applicable:
                self.logger.info(f"No cutoff bound for {objective.label}: {bound_template.reason}")

        self.logger.info(f"Sweeping {objective.label} over {len(grid)} grid points ({grid[0]}..{grid[-1]})")

        def compute(n: int) -> SweepRecord:
            key = ResultCache.make_key(objective.label, n, config_key)
            cached = self._cached_record(key)
            if cached is not None:
                return cached
            record = self._compute_record(objective, n, optimizer, bound_template)
            self.cache.set(key, record.to_dict())
            return record

        records: Dict[int, SweepRecord] = {}
        with ThreadPoolExecutor(max_workers=self.config.max_workers) as executor:
            future_to_n = {executor.submit(compute, n): n for n in grid}
            if self.show_progress:
                with alive_bar(len(grid), title=objective.label, file=sys.stderr) as bar:
                    for future in as_completed(future_to_n):
                        records[future_to_n[future]] = future.result()
                        bar()
            else:
                for future in as_completed(future_to_n):
                    records[future_to_n[future]] = future.result()

        self.logger.info(f"Sweep of {objective.label} finished; cache {self.cache.stats()}")
        return [records[n] for n in grid]

    def _bound_template(self, objective: UtilityObjective, optimizer: CutoffOptimizer, n: int) -> CutoffBound:
        """Constants for the cutoff ceiling, with epsilon pulled below the first jump of the utility"""
        epsilon = self.config.epsilon
        jumps = objective.utility.discontinuities
        if jumps and epsilon >= min(jumps):
            epsilon = min(jumps) / 2
            self.logger.info(f"Bound neighborhood of {objective.label} shrunk to epsilon={epsilon} below the jump at {min(jumps)}")
        return optimizer.cutoff_upper_bound(objective.utility, n, epsilon)

    def _cached_record(self, key: str) -> Optional[SweepRecord]:
        cached = self.cache.get(key)
        if cached is None:
            return None
        try:
            return SweepRecord.from_dict(cached)
        except DomainError as e:
            self.logger.warning(f"Ignoring cached entry {key}: {e}")
            return None

    def _compute_record(self, objective: Objective, n: int, optimizer: CutoffOptimizer, bound_template: Optional[CutoffBound]) -> SweepRecord:
        if isinstance(objective, TopKObjective):
            optimum = self.topk.optimal_cutoff_topk(n, objective.k, objective.scoring)
            return SweepRecord(objective=objective.label, n=n, c_opt=optimum.c_opt, value=optimum.probability)

        result = optimizer.optimal_cutoff(objective.utility, n)
        bound = None
        if bound_template is not None and bound_template.applicable:
            bound = CutoffOptimizer.bound_from_constants(bound_template.constants, n, zero_tol=0.0).value
        self.logger.debug(f"{objective.label} n={n}: c_opt={result.c_opt}")
        return SweepRecord(objective=objective.label, n=n, c_opt=result.c_opt, value=result.value, bound=bound)
