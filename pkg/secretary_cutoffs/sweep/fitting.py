"""
Power-law fits of optimal cutoffs
"""

import logging
import math
from typing import List, Optional, Sequence

from scipy import stats

from secretary_cutoffs.exceptions import FitError
from secretary_cutoffs.models import BoundCheck, PowerLawFit, SweepConfig, SweepRecord


class PowerLawFitter:
    """Least squares of log(c_opt) on log(n)"""

    MIN_POINTS = 3

    def __init__(self, drop_smallest: bool = False):
        """
        Initialize fitter

        Args:
            drop_smallest: Leave out the smallest n (pre-asymptotic point)
        """
        self.drop_smallest = drop_smallest
        self.logger = logging.getLogger(__name__)

    def fit(self, records: Sequence[SweepRecord]) -> PowerLawFit:
        """
        Fit c_opt ~ exp(log_intercept) * n^exponent

        Raises:
            FitError: With fewer than 3 points or a constant c_opt series
        """
        points = sorted(records, key=lambda record: record.n)
        if self.drop_smallest:
            points = points[1:]
        if len(points) < self.MIN_POINTS:
            raise FitError(f"needs at least {self.MIN_POINTS} points", len(points))
        if len({record.c_opt for record in points}) == 1:
            raise FitError("constant series", len(points))

        result = stats.linregress([math.log(r.n) for r in points], [math.log(r.c_opt) for r in points])
        r_squared = min(1.0, max(0.0, float(result.rvalue) ** 2))
        fit = PowerLawFit(exponent=float(result.slope), log_intercept=float(result.intercept), r_squared=r_squared, points=len(points))
        self.logger.debug(f"Power-law fit over {fit.points} points: exponent={fit.exponent:.4f}, r^2={fit.r_squared:.4f}")
        return fit

    def running_exponents(self, records: Sequence[SweepRecord]) -> List[Optional[float]]:
        """Exponent of the fit over each prefix of the sweep (None while undefined)"""
        points = sorted(records, key=lambda record: record.n)
        exponents: List[Optional[float]] = []
        for end in range(1, len(points) + 1):
            try:
                exponents.append(self.fit(points[:end]).exponent)
            except FitError:
                exponents.append(None)
        return exponents

    @staticmethod
    def check_bound(records: Sequence[SweepRecord], slack: float = SweepConfig.slack) -> List[BoundCheck]:
        """Compare every record with slack times its bound; records without bound pass"""
        return [BoundCheck(n=r.n, c_opt=r.c_opt, bound=r.bound, slack=slack) for r in records]
