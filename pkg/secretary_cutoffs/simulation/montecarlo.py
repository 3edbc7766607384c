"""
Seeded Monte Carlo simulation of the cutoff rule
"""

import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, List, Optional, Tuple, TypeVar

import numpy as np
from alive_progress import alive_bar

from secretary_cutoffs.exceptions import DomainError, SimulationError
from secretary_cutoffs.models import MAX_SEED, SimConfig, SimResult, Variant
from secretary_cutoffs.simulation.streams import BlockStreams, RunningStats
from secretary_cutoffs.utility import UtilityFunction

DEBUG_ENV = "SECRETARY_MC_DEBUG"
BLOCK_CELLS = 1 << 20

VARIANT_TAGS = {Variant.P1: 1, Variant.P2: 2, Variant.TOPK: 3}
ORDER_STATS_TAG = 4
ORDER_TAIL_TAG = 5

T = TypeVar("T")


def debug_enabled() -> bool:
    return os.getenv(DEBUG_ENV, "").strip().lower() in ("1", "true", "yes", "on")


class MonteCarloSimulator:
    """
    Run episodes of the cutoff rule in blocks

    Trials are split into blocks of max(1, BLOCK_CELLS // n) episodes; block
    sizes depend on (trials, n) only. Blocks run on a thread pool and their
    statistics are merged in block order, so results are bit-identical for
    any worker count.
    """

    def __init__(self, max_workers: int = 4, block_cells: int = BLOCK_CELLS, debug: Optional[bool] = None, show_progress: bool = False):
        """
        Initialize simulator

        Args:
            max_workers: Threads running blocks
            block_cells: Random draws per block (trials * n)
            debug: Check permutations in P1 (defaults to SECRETARY_MC_DEBUG)
            show_progress: Draw a progress bar on stderr
        """
        self.max_workers = max(1, max_workers)
        self.block_cells = block_cells
        self.debug = debug_enabled() if debug is None else debug
        self.show_progress = show_progress
        self.logger = logging.getLogger(__name__)

    def simulate(self, w: Optional[UtilityFunction], config: SimConfig) -> SimResult:
        """
        Mean payoff of the cutoff rule over config.trials episodes

        P1 pays w(r/n) for a random rank order, P2 pays w(t) for i.i.d.
        uniform types, topk pays 1 when the accepted rank is at most k.

        Raises:
            DomainError: If w is missing for P1/P2
            SimulationError: If a debug check fails
        """
        if config.variant is not Variant.TOPK and w is None:
            raise DomainError("utility required for P1 and P2", f"variant: {config.variant.value}")

        streams = BlockStreams(config.seed, VARIANT_TAGS[config.variant])
        sizes = self._block_sizes(config.n, config.trials)
        self.logger.info(f"Simulating {config.variant.value} n={config.n} c={config.c}: {config.trials} trials in {len(sizes)} blocks")

        def run_block(block: int) -> Tuple[int, float, float]:
            payoff = self._episode_payoffs(w, config, streams.generator(block), sizes[block])
            mean = float(np.mean(payoff))
            return payoff.size, mean, float(np.sum((payoff - mean) ** 2))

        stats = RunningStats()
        for count, mean, m2 in self._run_blocks(len(sizes), run_block, f"sim {config.variant.value}"):
            stats.merge(count, mean, m2)

        return SimResult(
            mean=stats.mean,
            stderr=stats.stderr,
            trials=stats.count,
            seed=config.seed,
            variant=config.variant,
            n=config.n,
            c=config.c,
        )

    def compare_p1_p2(self, w: UtilityFunction, n: int, c: int, trials: int, seed: int) -> Tuple[SimResult, SimResult]:
        """Paired P1 and P2 runs; the variant tag keeps their streams independent"""
        p1 = self.simulate(w, SimConfig(Variant.P1, n, c, trials, seed))
        p2 = self.simulate(w, SimConfig(Variant.P2, n, c, trials, seed))
        return p1, p2

    def p1_p2_gap(self, w: UtilityFunction, n: int, c: int, trials: int, seed: int) -> float:
        p1, p2 = self.compare_p1_p2(w, n, c, trials, seed)
        return abs(p1.mean - p2.mean)

    def order_stat_deviation(self, n: int, trials: int, seed: int) -> float:
        """
        Fraction of trials whose sorted uniforms stray from i/n by more than ln(n)/sqrt(n)

        Raises:
            DomainError: For n < 2 or trials < 1
        """
        self._check_sample(n, trials, seed)
        streams = BlockStreams(seed, ORDER_STATS_TAG)
        sizes = self._block_sizes(n, trials)
        expected = np.arange(1, n + 1) / n
        threshold = math.log(n) / math.sqrt(n)

        def run_block(block: int) -> int:
            sample = np.sort(streams.generator(block).random((sizes[block], n)), axis=1)
            deviation = np.max(np.abs(sample - expected), axis=1)
            return int(np.count_nonzero(deviation > threshold))

        violations = sum(self._run_blocks(len(sizes), run_block, "order statistics"))
        return violations / trials

    def order_stat_tail(self, n: int, i: int, epsilon: float, trials: int, seed: int) -> Tuple[float, float]:
        """
        Empirical Pr[s_(n,i) < i/n - epsilon] next to the Chernoff bound exp(-2 n epsilon^2)
        """
        self._check_sample(n, trials, seed)
        if not 1 <= i <= n:
            raise DomainError("order statistic index must lie in [1, n]", f"i: {i}, n: {n}")
        if epsilon <= 0:
            raise DomainError("epsilon must be positive", f"epsilon: {epsilon}")

        streams = BlockStreams(seed, ORDER_TAIL_TAG)
        sizes = self._block_sizes(n, trials)
        cutoff = i / n - epsilon

        def run_block(block: int) -> int:
            sample = streams.generator(block).random((sizes[block], n))
            order_stat = np.partition(sample, i - 1, axis=1)[:, i - 1]
            return int(np.count_nonzero(order_stat < cutoff))

        hits = sum(self._run_blocks(len(sizes), run_block, "order statistic tail"))
        return hits / trials, math.exp(-2.0 * n * epsilon * epsilon)

    # Episodes

    def _episode_payoffs(self, w: Optional[UtilityFunction], config: SimConfig, rng: np.random.Generator, episodes: int) -> np.ndarray:
        n, c = config.n, config.c
        rows = np.arange(episodes)

        if config.variant is Variant.P2:
            types = rng.random((episodes, n))
            accepted = types[rows, self.accept_positions(types, c)]
            return np.asarray(w(accepted), dtype=float)

        ranks = rng.permuted(np.tile(np.arange(1, n + 1), (episodes, 1)), axis=1)
        if self.debug:
            self._check_permutations(ranks)
        accepted = ranks[rows, self.accept_positions(ranks, c)]

        if config.variant is Variant.TOPK:
            return (accepted <= config.k).astype(float)
        return np.asarray(w(accepted / n), dtype=float)

    @staticmethod
    def accept_positions(values: np.ndarray, c: int) -> np.ndarray:
        """
        0-based position accepted in each row (smaller value is better)

        Rows reject positions 0..c-2, then take the first strict record;
        without one the last position is taken.
        """
        episodes, n = values.shape
        if c == 1:
            return np.zeros(episodes, dtype=np.intp)
        if c >= n:
            return np.full(episodes, n - 1, dtype=np.intp)

        best_before = np.minimum.accumulate(values, axis=1)
        # position p is a record when it beats the best of 0..p-1
        window = values[:, c - 1 : n - 1] < best_before[:, c - 2 : n - 2]
        found = window.any(axis=1)
        return np.where(found, window.argmax(axis=1) + c - 1, n - 1)

    @staticmethod
    def _check_permutations(ranks: np.ndarray) -> None:
        n = ranks.shape[1]
        if not np.array_equal(np.sort(ranks, axis=1), np.broadcast_to(np.arange(1, n + 1), ranks.shape)):
            raise SimulationError("rank rows are not permutations of 1..n", f"n: {n}")

    # Block plumbing

    def _block_sizes(self, n: int, trials: int) -> List[int]:
        per_block = max(1, self.block_cells // n)
        full, rest = divmod(trials, per_block)
        return [per_block] * full + ([rest] if rest else [])

    def _run_blocks(self, blocks: int, worker: Callable[[int], T], title: str) -> List[T]:
        """Run worker over block indices; results come back in block order"""
        results: List[Optional[T]] = [None] * blocks

        def collect(bar=None) -> None:
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                future_to_index = {executor.submit(worker, index): index for index in range(blocks)}
                for future in as_completed(future_to_index):
                    results[future_to_index[future]] = future.result()
                    if bar is not None:
                        bar()

        if self.show_progress:
            with alive_bar(blocks, title=title, file=sys.stderr) as bar:
                collect(bar)
        else:
            collect()
        return results

    @staticmethod
    def _check_sample(n: int, trials: int, seed: int) -> None:
        if n < 2:
            raise DomainError("order statistics need n >= 2", f"n: {n}")
        if trials < 1:
            raise DomainError("trials must be positive", f"trials: {trials}")
        if not 0 <= seed <= MAX_SEED:
            raise DomainError("seed must be a 64-bit unsigned integer", f"seed: {seed}")
