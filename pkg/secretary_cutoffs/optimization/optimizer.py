"""
Optimal cutoff search
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

from secretary_cutoffs.evaluation import PolicyEvaluator, Quadrature
from secretary_cutoffs.exceptions import DomainError
from secretary_cutoffs.models import CutoffBound, CutoffMethod, CutoffResult, OptimizerConfig, QuadratureConfig, UtilityConstants
from secretary_cutoffs.utility import UtilityAnalyzer, UtilityFunction

# E_c sums several quadrature pieces, each accurate to abs_tol
QUADRATURE_NOISE_FACTOR = 10.0


class CutoffOptimizer:
    """
    Find the cutoff c maximizing E_c

    E_c is concave in c (its second difference is never positive for a
    nonincreasing utility), so the optimum is the last c whose first
    difference is still positive and a binary search needs O(log n) deltas.
    """

    def __init__(
        self,
        evaluator: Optional[PolicyEvaluator] = None,
        analyzer: Optional[UtilityAnalyzer] = None,
        config: Optional[OptimizerConfig] = None,
        max_workers: int = 1,
    ):
        """
        Initialize optimizer

        Args:
            evaluator: Policy evaluator
            analyzer: Constant extraction for the cutoff bound
            config: Sign and tie tolerances
            max_workers: Threads used by the full scan
        """
        self.evaluator = evaluator or PolicyEvaluator()
        self.analyzer = analyzer or UtilityAnalyzer(self.evaluator.quadrature)
        self.config = config or OptimizerConfig()
        self.max_workers = max(1, max_workers)
        self.logger = logging.getLogger(__name__)

    @classmethod
    def create_default(cls, quadrature_config: Optional[QuadratureConfig] = None, max_workers: int = 1) -> "CutoffOptimizer":
        quadrature = Quadrature(quadrature_config)
        return cls(PolicyEvaluator(quadrature), UtilityAnalyzer(quadrature), max_workers=max_workers)

    @property
    def tie_tolerance(self) -> float:
        """Values of E_c closer than this are tied; never below the quadrature noise of the values compared"""
        return max(self.config.tie_tol, QUADRATURE_NOISE_FACTOR * self.evaluator.config.abs_tol)

    def optimal_cutoff_scan(self, w: UtilityFunction, n: int) -> CutoffResult:
        """
        Evaluate every cutoff and return the smallest maximizer

        Raises:
            DomainError: For n < 2
        """
        self._check_n(n)
        values = self.scan_values(w, n)
        best = max(values)
        c_opt = next(c for c, value in enumerate(values, start=1) if value >= best - self.tie_tolerance)
        return CutoffResult(n=n, c_opt=c_opt, value=values[c_opt - 1], method=CutoffMethod.FULL_SCAN)

    def scan_values(self, w: UtilityFunction, n: int) -> List[float]:
        """E_c for c = 1..n, in order"""
        cutoffs = range(1, n + 1)
        if self.max_workers == 1:
            return [self._value(w, n, c) for c in cutoffs]
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            return list(executor.map(lambda c: self._value(w, n, c), cutoffs))

    def optimal_cutoff(self, w: UtilityFunction, n: int, with_bound: bool = False) -> CutoffResult:
        """
        Binary search for the largest c with a positive first difference

        A first difference within sign_tol of zero means a plateau of equal
        values; it is walked back to its smallest cutoff.

        Args:
            w: Utility
            n: Number of applicants (>= 2)
            with_bound: Attach the sqrt((L / w_hat) n) ceiling when it applies

        Returns:
            CutoffResult with method BINARY_SEARCH
        """
        self._check_n(n)
        sign_tol = self.config.sign_tol

        # Invariant: delta(lo) > sign_tol (c = 1 is a sentinel), delta(hi) <= sign_tol (n + 1 is a sentinel)
        lo, hi = 1, n + 1
        plateau = False
        probes = 0
        while hi - lo > 1:
            mid = (lo + hi) // 2
            difference = self.evaluator.delta(w, n, mid)
            probes += 1
            if abs(difference) <= sign_tol:
                plateau = True
            if difference > sign_tol:
                lo = mid
            else:
                hi = mid

        c_opt, value = lo, self._value(w, n, lo)
        if plateau:
            c_opt, value = self._walk_plateau(w, n, c_opt, value)
        self.logger.debug(f"Binary search on {w.label}, n={n}: c_opt={c_opt} after {probes} probes (plateau: {plateau})")

        bound = None
        if with_bound:
            bound = self.cutoff_upper_bound(w, n).value
        return CutoffResult(n=n, c_opt=c_opt, value=value, method=CutoffMethod.BINARY_SEARCH, bound=bound)

    def cutoff_upper_bound(self, w: UtilityFunction, n: int, epsilon: Optional[float] = None) -> CutoffBound:
        """
        Asymptotic ceiling sqrt((L / w_hat) * n) on the optimal cutoff

        Inapplicable when the slope at the top rank is unbounded, when the
        utility is constant, or when it is flat near the top (L = 0).
        """
        self._check_n(n)
        constants = self.analyzer.extract_constants(w, epsilon if epsilon is not None else self.config.epsilon)
        return self.bound_from_constants(constants, n, zero_tol=10 * self.evaluator.config.abs_tol)

    @staticmethod
    def bound_from_constants(constants: UtilityConstants, n: int, zero_tol: float = 1e-9) -> CutoffBound:
        if not constants.is_lipschitz:
            return CutoffBound(n, None, "slope at the top rank is unbounded", constants)
        if constants.w_hat <= zero_tol:
            return CutoffBound(n, None, "utility is constant", constants)
        if constants.L <= 0.0:
            return CutoffBound(n, None, "utility is flat near the top rank", constants)
        return CutoffBound(n, math.sqrt(constants.L / constants.w_hat * n), None, constants)

    def _walk_plateau(self, w: UtilityFunction, n: int, c: int, value: float) -> Tuple[int, float]:
        while c > 1:
            previous = self._value(w, n, c - 1)
            if previous < value - self.tie_tolerance:
                break
            c, value = c - 1, previous
        return c, value

    def _value(self, w: UtilityFunction, n: int, c: int) -> float:
        return self.evaluator.expected_utility(w, n, c).expected_utility

    @staticmethod
    def _check_n(n: int) -> None:
        if n < 2:
            raise DomainError("optimization needs at least two applicants", f"n: {n}")
