"""
Adaptive quadrature over bounded intervals
"""

import logging
import math
from typing import Callable, Iterable, Optional, Tuple

from scipy import integrate

from secretary_cutoffs.exceptions import DomainError, QuadratureError
from secretary_cutoffs.models import QuadratureConfig


class Quadrature:
    """Adaptive Gauss-Kronrod integration with mandatory break points"""

    def __init__(self, config: Optional[QuadratureConfig] = None):
        """
        Initialize quadrature

        Args:
            config: Tolerances (abs_tol, max_depth)
        """
        self.config = config or QuadratureConfig()
        self.logger = logging.getLogger(__name__)

    def integrate(
        self,
        f: Callable[[float], float],
        a: float,
        b: float,
        breakpoints: Iterable[float] = (),
        abs_tol: Optional[float] = None,
    ) -> float:
        """
        Integrate f over [a, b] to an absolute tolerance

        Break points strictly inside (a, b) split the interval before the
        adaptive scheme starts; each piece gets max_depth subdivisions.

        Args:
            f: Bounded integrand
            a: Lower limit
            b: Upper limit
            breakpoints: Points where f is not smooth
            abs_tol: Overrides config.abs_tol

        Returns:
            Integral estimate

        Raises:
            DomainError: If the limits are not finite or a > b
            QuadratureError: If the tolerance is not reached
        """
        if not (math.isfinite(a) and math.isfinite(b)) or a > b:
            raise DomainError("integration limits must be finite with a <= b", f"a: {a}, b: {b}")
        if a == b:
            return 0.0

        tolerance = abs_tol if abs_tol is not None else self.config.abs_tol
        points = sorted({float(p) for p in breakpoints if a < p < b})
        limit = self.config.max_depth * (len(points) + 1) + len(points) + 2

        options = {"epsabs": tolerance, "epsrel": 0.0, "limit": limit, "full_output": 1}
        if points:
            options["points"] = points

        result = integrate.quad(f, a, b, **options)
        value, error = float(result[0]), float(result[1])

        # quad appends a message only when it gave up
        if len(result) > 3:
            self.logger.debug(f"Quadrature failed on [{a}, {b}] with {len(points)} break points: {result[3]}")
            raise QuadratureError(value, error, str(result[3]).strip().splitlines()[0])

        return value

    @staticmethod
    def scale_ladder(smallest: float, factor: float = 4.0) -> Tuple[float, ...]:
        """
        Geometric break points smallest, factor * smallest, ... below 1

        Kernels like (1 - x)^t concentrate their mass within 1/t of zero;
        splitting there keeps the first subdivisions where the mass is.
        """
        if not 0.0 < smallest < 1.0:
            return ()
        points = []
        x = smallest
        while x < 1.0:
            points.append(x)
            x *= factor
        return tuple(points)
