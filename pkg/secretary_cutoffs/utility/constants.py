"""
Constants of a utility that control how large the optimal cutoff can grow
"""

import logging
import math
from typing import Optional

import numpy as np

from secretary_cutoffs.evaluation.quadrature import Quadrature
from secretary_cutoffs.exceptions import DomainError, UtilityValidationError
from secretary_cutoffs.models import LipschitzConfig, UtilityConstants
from secretary_cutoffs.utility.functions import UtilityFunction


class UtilityAnalyzer:
    """Extract the Lipschitz constant L, bound M and mean gap w_hat of a utility"""

    def __init__(self, quadrature: Optional[Quadrature] = None, config: Optional[LipschitzConfig] = None):
        """
        Initialize analyzer

        Args:
            quadrature: Integration backend for w_hat
            config: Grid and refinement settings of the Lipschitz estimate
        """
        self.quadrature = quadrature or Quadrature()
        self.config = config or LipschitzConfig()
        self.logger = logging.getLogger(__name__)

    @staticmethod
    def evaluate(w: UtilityFunction, x: float) -> float:
        return w.evaluate(x)

    @staticmethod
    def normalize(w: UtilityFunction) -> UtilityFunction:
        return w.normalize()

    def lipschitz_near_zero(self, w: UtilityFunction, epsilon: float, grid: Optional[int] = None) -> float:
        """
        Grid estimate of the Lipschitz constant of w on [0, epsilon]

        The largest adjacent slope on ``grid`` subintervals is refined
        ``refinements`` times by ``refinement_factor``; if the finest estimate
        exceeds growth_ratio times the base one the slope diverges near 0.

        Args:
            w: Utility
            epsilon: Width of the neighborhood of the top rank, in (0, 1]
            grid: Number of subintervals (defaults to config.grid)

        Returns:
            Slope estimate, or math.inf when unbounded

        Raises:
            DomainError: For epsilon outside (0, 1] or grid < 2
        """
        grid = grid if grid is not None else self.config.grid
        if not 0.0 < epsilon <= 1.0:
            raise DomainError("epsilon must lie in (0, 1]", f"epsilon: {epsilon}")
        if grid < 2:
            raise DomainError("grid needs at least 2 subintervals", f"grid: {grid}")

        base = self._max_slope(w, epsilon, grid)
        finest = base
        for _ in range(self.config.refinements):
            grid *= self.config.refinement_factor
            finest = self._max_slope(w, epsilon, grid)

        if finest > self.config.growth_ratio * base:
            self.logger.debug(f"Slope of {w.label} grows from {base:.6g} to {finest:.6g} on [0, {epsilon}]: unbounded")
            return math.inf
        return base

    def w_hat(self, w: UtilityFunction, tol: Optional[float] = None) -> float:
        """
        Mean utility gap: integral of w(0) - w(x) over [0, 1]

        Raises:
            QuadratureError: If the integral does not converge
        """
        top = w(0.0)
        value = self.quadrature.integrate(lambda x: top - w(x), 0.0, 1.0, w.breakpoints, abs_tol=tol)
        return max(0.0, value)

    def extract_constants(self, w: UtilityFunction, epsilon: float = 0.1) -> UtilityConstants:
        """
        Constants (L, epsilon, M, w_hat) of normalize(w)

        Raises:
            UtilityValidationError: If epsilon reaches a discontinuity of w
        """
        jumps = w.discontinuities
        if jumps and epsilon >= min(jumps):
            raise UtilityValidationError(f"epsilon {epsilon} must lie below the first discontinuity {min(jumps)}", w.label)

        normalized = w.normalize()
        constants = UtilityConstants(
            L=self.lipschitz_near_zero(normalized, epsilon),
            epsilon=epsilon,
            M=max(0.0, -normalized(1.0)),
            w_hat=self.w_hat(normalized),
        )
        self.logger.debug(f"Constants of {w.label}: {constants}")
        return constants

    @staticmethod
    def _max_slope(w: UtilityFunction, epsilon: float, intervals: int) -> float:
        xs = np.linspace(0.0, epsilon, intervals + 1)
        return float(np.max(np.abs(np.diff(w(xs)) / np.diff(xs))))
