"""
Exact expected utility of cutoff policies

A cutoff-c policy rejects applicants 1..c-1, then accepts the first applicant
that is the best seen so far; applicant n is accepted by force. With i.i.d.
uniform types the policy accepts position t < n with probability
(c-1)/(t(t-1)) and position n with probability (c-1)/(n-1). An accepted record
at t < n is the best of t uniforms, whose expected utility is
t * integral of w(x)(1-x)^(t-1); the forced last applicant is a plain uniform draw.
"""

import logging
import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.special import gammaln

from secretary_cutoffs.evaluation.quadrature import Quadrature
from secretary_cutoffs.exceptions import DomainError
from secretary_cutoffs.models import InnerSumStrategy, PolicyEval, QuadratureConfig
from secretary_cutoffs.utility.functions import UtilityFunction


def survival_power(x: float, power: int) -> float:
    """(1 - x)^power via exp(power * log1p(-x))"""
    if x >= 1.0:
        return 1.0 if power == 0 else 0.0
    return math.exp(power * math.log1p(-x))


def log_binomial(n: np.ndarray, k: np.ndarray) -> np.ndarray:
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


class PolicyEvaluator:
    """Evaluate E_c, its first and second differences, and acceptance probabilities"""

    def __init__(self, quadrature: Optional[Quadrature] = None):
        """
        Initialize evaluator

        Args:
            quadrature: Integration backend (default tolerances if omitted)
        """
        self.quadrature = quadrature or Quadrature()
        self.logger = logging.getLogger(__name__)

    @classmethod
    def create_default(cls, config: Optional[QuadratureConfig] = None) -> "PolicyEvaluator":
        return cls(Quadrature(config))

    @property
    def config(self) -> QuadratureConfig:
        return self.quadrature.config

    @property
    def kernel_tolerance(self) -> float:
        return self.config.abs_tol / 10.0

    def integrate(self, f: Callable[[float], float], a: float, b: float) -> float:
        """Integrate f over [a, b] with this evaluator's tolerances"""
        return self.quadrature.integrate(f, a, b)

    @staticmethod
    def accept_probability(n: int, c: int, t: int) -> float:
        """
        Probability that the cutoff-c rule stops at position t

        Raises:
            DomainError: Unless 2 <= c <= t <= n
        """
        if not 2 <= c <= n:
            raise DomainError("acceptance probabilities need 2 <= c <= n", f"n: {n}, c: {c}")
        if not c <= t <= n:
            raise DomainError("position must lie in [c, n]", f"c: {c}, t: {t}, n: {n}")
        if t == n:
            return (c - 1) / (n - 1)
        return (c - 1) / (t * (t - 1))

    def best_of_t_expectation(self, w: UtilityFunction, t: int) -> float:
        """Expected utility of the best of t uniform types"""
        if t < 1:
            raise DomainError("t must be positive", f"t: {t}")
        return t * self._moment(w, t)

    def expected_utility(self, w: UtilityFunction, n: int, c: int) -> PolicyEval:
        """
        Exact expected utility of the cutoff-c policy

        c = 1 accepts applicant 1 unconditionally, so E_1 is the mean of w.

        Args:
            w: Utility over relative rank
            n: Number of applicants (>= 2)
            c: Cutoff in [1, n]

        Returns:
            PolicyEval with E_c and the acceptance distribution

        Raises:
            DomainError: For n < 2 or c outside [1, n]
            QuadratureError: If an integral does not converge
        """
        self._check_policy(n, c)

        if c == 1:
            return PolicyEval(n=n, c=1, expected_utility=self._moment(w, 1), accept_probs=((1, 1.0),))

        if self.config.inner_sum_strategy is InnerSumStrategy.PER_TERM:
            terms = [self._moment(w, t) / (t - 1) for t in range(c, n)]
            value = (c - 1) * math.fsum(terms) + (c - 1) / (n - 1) * self._moment(w, 1)
        else:
            weight, tail = c - 1, (c - 1) / (n - 1)
            first, last = c - 1, n - 2

            def integrand(x: float) -> float:
                return w(x) * (weight * self._record_kernel(x, first, last) + tail)

            value = self.quadrature.integrate(integrand, 0.0, 1.0, self._kernel_points(w, first, last))

        accept_probs = tuple((t, self.accept_probability(n, c, t)) for t in range(c, n + 1))
        return PolicyEval(n=n, c=c, expected_utility=value, accept_probs=accept_probs)

    def delta(self, w: UtilityFunction, n: int, c: int) -> float:
        """
        First difference E_c - E_{c-1}

        For c >= 3 the closed form integral of
        w(x) * (sum_{t=c}^{n-1} (1-x)^(t-1)/(t-1) - (1-x)^(c-2) + 1/(n-1)) is used;
        c = 2 subtracts the c = 1 case directly.
        """
        if not 2 <= c <= n:
            raise DomainError("delta needs 2 <= c <= n", f"n: {n}, c: {c}")
        self._check_policy(n, c)

        if c == 2:
            return self.expected_utility(w, n, 2).expected_utility - self.expected_utility(w, n, 1).expected_utility

        if self.config.inner_sum_strategy is InnerSumStrategy.PER_TERM:
            terms = [self._moment(w, t) / (t - 1) for t in range(c, n)]
            terms.append(-self._moment(w, c - 1))
            terms.append(self._moment(w, 1) / (n - 1))
            return math.fsum(terms)

        first, last = c - 1, n - 2
        tail = 1.0 / (n - 1)

        def integrand(x: float) -> float:
            return w(x) * (self._record_kernel(x, first, last) - survival_power(x, c - 2) + tail)

        points = self._kernel_points(w, first, last) + Quadrature.scale_ladder(1.0 / (c - 2))
        return self.quadrature.integrate(integrand, 0.0, 1.0, points)

    def second_delta(self, w: UtilityFunction, n: int, c: int) -> float:
        """
        Second difference of E_c, independent of n:
        (1/(c-2)) * integral of w(x)(1-x)^(c-3)((c-1)x - 1)
        """
        if c < 3:
            raise DomainError("second difference needs c >= 3", f"c: {c}")
        if c > n:
            raise DomainError("cutoff must not exceed n", f"n: {n}, c: {c}")

        def integrand(x: float) -> float:
            return w(x) * survival_power(x, c - 3) * ((c - 1) * x - 1.0)

        points = w.breakpoints + (1.0 / (c - 1),) + Quadrature.scale_ladder(1.0 / (c - 2))
        return self.quadrature.integrate(integrand, 0.0, 1.0, points) / (c - 2)

    def ranked_expected_utility(self, w: UtilityFunction, n: int, c: int) -> float:
        """
        Exact expected payoff w(r/n) of the cutoff rule on a random rank order

        A record accepted at position i < n is the minimum rank of i random
        positions: Pr[min = r] = C(n-r, i-1) / C(n, i).
        """
        self._check_policy(n, c)

        payoff = np.asarray(w(np.arange(1, n + 1) / n), dtype=float)
        uniform_mean = math.fsum(payoff.tolist()) / n
        if c == 1:
            return uniform_mean

        terms: List[float] = []
        for i in range(c, n):
            ranks = np.arange(1, n - i + 2)
            weights = np.exp(log_binomial(n - ranks, np.full_like(ranks, i - 1)) - log_binomial(np.asarray(n), np.asarray(i)))
            terms.append((c - 1) / (i * (i - 1)) * float(np.dot(weights, payoff[: n - i + 1])))
        terms.append((c - 1) / (n - 1) * uniform_mean)
        return math.fsum(terms)

    # Kernels

    def _moment(self, w: UtilityFunction, t: int) -> float:
        """Integral of w(x)(1-x)^(t-1) over [0, 1]"""
        power = t - 1
        if power == 0:
            return self.quadrature.integrate(w, 0.0, 1.0, w.breakpoints)

        def integrand(x: float) -> float:
            return w(x) * survival_power(x, power)

        return self.quadrature.integrate(integrand, 0.0, 1.0, w.breakpoints + Quadrature.scale_ladder(1.0 / power))

    def _record_kernel(self, x: float, first: int, last: int) -> float:
        """
        Sum of y^j / j for j in [first, last] with y = 1 - x

        Terms past the index where the geometric tail bound y^j / (j x)
        drops below kernel_tolerance are dropped.
        """
        if first > last or x >= 1.0:
            return 0.0
        if x <= 0.0:
            return math.fsum(1.0 / j for j in range(first, last + 1))

        log_y = math.log1p(-x)
        # smallest j with y^j < tol * first * x bounds every later term
        threshold = math.log(self.kernel_tolerance * first * x)
        if threshold < 0.0:
            stop = min(last, max(first, math.ceil(threshold / log_y)))
        else:
            stop = first
        j = np.arange(first, stop + 1, dtype=float)
        return float(np.sum(np.exp(j * log_y) / j))

    def _kernel_points(self, w: UtilityFunction, first: int, last: int) -> Tuple[float, ...]:
        if last < 1 or first > last:
            return w.breakpoints
        return w.breakpoints + Quadrature.scale_ladder(1.0 / last)

    @staticmethod
    def _check_policy(n: int, c: int) -> None:
        if n < 2:
            raise DomainError("policies need at least two applicants", f"n: {n}")
        if not 1 <= c <= n:
            raise DomainError("cutoff must lie in [1, n]", f"n: {n}, c: {c}")
