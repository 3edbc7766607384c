"""
Top-k objective: accept one of the k best applicants
"""

import logging
import math
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.special import gammaln

from secretary_cutoffs.exceptions import DomainError
from secretary_cutoffs.models import TopKModel, TopKOptimum, TopKScoring
from secretary_cutoffs.topk.enumeration import RankOrderEnumerator


class TopKAnalyzer:
    """
    Success probability of the cutoff rule for the top-k objective

    Two scorings are offered. The model sums, over stopping positions i,
    Pr[the best of the first i is top-k] times the probability of reaching
    i with every earlier applicant rejected; it ignores that a good applicant
    may be skipped inside the first c - 1, so it is exact for k = 1 and a
    lower bound for larger k. The exact scoring is a closed form over the
    minimum rank of the first i applicants and matches full enumeration.
    """

    EXACT_RATIONAL_LIMIT = 30

    def __init__(self, enumerator: Optional[RankOrderEnumerator] = None, tie_tol: float = 1e-12):
        """
        Initialize analyzer

        Args:
            enumerator: Brute-force oracle for small n
            tie_tol: Probabilities closer than this count as tied
        """
        self.enumerator = enumerator or RankOrderEnumerator()
        self.tie_tol = tie_tol
        self.logger = logging.getLogger(__name__)

    def success_probability(self, n: int, k: int, c: int) -> float:
        """
        Model probability sum_{i=c}^{n} [C(n-i, k-1) / C(n, k)] * (c-1)/(i-1)

        Exact rationals for n <= 30, log-gamma ratios beyond.
        """
        self._check_model(n, k, c)
        if n <= self.EXACT_RATIONAL_LIMIT:
            total = sum(Fraction(math.comb(n - i, k - 1), math.comb(n, k)) * Fraction(c - 1, i - 1) for i in range(c, n + 1))
            return float(total)

        i = np.arange(c, n - k + 2, dtype=float)
        terms = np.exp(self._log_model_ratio(n, k, i)) * (c - 1) / (i - 1)
        return math.fsum(terms.tolist())

    def success_probability_closed(self, n: int, k: int, c: int) -> float:
        """
        Exact probability of accepting a top-k applicant

        A record accepted at i < n is the best of the first i, which is top-k
        unless all i of them rank below k: 1 - C(n-k, i)/C(n, i). The forced
        last applicant is top-k with probability k/n.
        """
        if n < 1 or not 1 <= c <= n:
            raise DomainError("cutoff must lie in [1, n]", f"n: {n}, c: {c}")
        if k < 1:
            raise DomainError("k must be positive", f"k: {k}")
        k = min(k, n)
        if c == 1:
            return k / n

        i = np.arange(c, n, dtype=float)
        terms = (c - 1) / (i * (i - 1)) * (1.0 - self._all_outside(n, k, i))
        return math.fsum(terms.tolist()) + (c - 1) / (n - 1) * k / n

    def success_probability_exact(self, n: int, k: int, c: int) -> float:
        """Enumeration over all n! orders (n <= 12)"""
        return float(self.enumerator.success_probability(n, k, c))

    def success_delta(self, n: int, k: int, c: int) -> float:
        """
        Continuum form of P(c) - P(c-1):
        (k/n) * (sum_{i=c}^{n} (1 - i/n)^(k-1) / (i-1) - (1 - (c-1)/n)^(k-1))
        """
        if not 3 <= c <= n:
            raise DomainError("success delta needs 3 <= c <= n", f"n: {n}, c: {c}")
        if not 1 <= k <= n - 1:
            raise DomainError("k must lie in [1, n-1]", f"n: {n}, k: {k}")

        i = np.arange(c, n + 1, dtype=float)
        total = math.fsum((np.power(1.0 - i / n, k - 1) / (i - 1)).tolist())
        return k / n * (total - (1.0 - (c - 1) / n) ** (k - 1))

    def success_profile(self, n: int, k: int, scoring: TopKScoring = TopKScoring.EXACT) -> TopKModel:
        """
        P(c) for every c in [2, n] via suffix sums

        Raises:
            DomainError: For n < 2 or k outside [1, n-1]
        """
        self._check_model(n, k, 2)
        c = np.arange(2, n + 1, dtype=float)

        if scoring is TopKScoring.MODEL:
            if n <= self.EXACT_RATIONAL_LIMIT:
                probs = [self.success_probability(n, k, int(cutoff)) for cutoff in c]
            else:
                i = np.arange(2, n + 1, dtype=float)
                weights = np.zeros_like(i)
                valid = i <= n - k + 1
                weights[valid] = np.exp(self._log_model_ratio(n, k, i[valid])) / (i[valid] - 1)
                probs = ((c - 1) * self._suffix_sums(weights)).tolist()
        else:
            # g_i for i in [2, n-1]; the suffix sum at i = n is empty
            i = np.arange(2, n, dtype=float)
            weights = (1.0 - self._all_outside(n, k, i)) / (i * (i - 1))
            suffix = np.append(self._suffix_sums(weights), 0.0)
            probs = ((c - 1) * suffix + (c - 1) / (n - 1) * k / n).tolist()

        return TopKModel(n=n, k=k, scoring=scoring, success_probs=tuple(zip(range(2, n + 1), probs)))

    def optimal_cutoff_topk(self, n: int, k: int, scoring: TopKScoring = TopKScoring.EXACT) -> TopKOptimum:
        """
        Full scan over c in [2, n]; ties go to the smallest c

        Raises:
            DomainError: For n < 3 or k outside [1, n-1]
        """
        if n < 3:
            raise DomainError("top-k scan needs n >= 3", f"n: {n}")
        profile = self.success_profile(n, k, scoring)
        best = max(p for _, p in profile.success_probs)
        c_opt, probability = next((c, p) for c, p in profile.success_probs if p >= best - self.tie_tol)
        self.logger.debug(f"Top-{k} optimum for n={n} ({scoring.value}): c={c_opt}, P={probability:.6f}")
        return TopKOptimum(n=n, k=k, c_opt=c_opt, probability=probability, scoring=scoring)

    @staticmethod
    def model_gap_bound(n: int, k: int, c: int) -> float:
        """Probability that some top-k applicant sits in the first c-1: 1 - C(n-c+1, k)/C(n, k)"""
        return 1.0 - math.comb(n - c + 1, k) / math.comb(n, k)

    @staticmethod
    def _log_model_ratio(n: int, k: int, i: np.ndarray) -> np.ndarray:
        """log C(n-i, k-1) - log C(n, k), valid for n - i >= k - 1"""
        m = n - i
        log_top = gammaln(m + 1) - gammaln(k) - gammaln(m - k + 2)
        log_all = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
        return log_top - log_all

    @staticmethod
    def _all_outside(n: int, k: int, i: np.ndarray) -> np.ndarray:
        """C(n-k, i) / C(n, i) = prod_{j<k} (n-i-j) / (n-j)"""
        product = np.ones_like(i)
        for j in range(k):
            product *= np.clip(n - i - j, 0.0, None) / (n - j)
        return product

    @staticmethod
    def _suffix_sums(values: np.ndarray) -> np.ndarray:
        return np.cumsum(values[::-1])[::-1]

    @staticmethod
    def _check_model(n: int, k: int, c: int) -> None:
        if n < 2 or not 2 <= c <= n:
            raise DomainError("model needs 2 <= c <= n", f"n: {n}, c: {c}")
        if not 1 <= k <= n - 1:
            raise DomainError("k must lie in [1, n-1]", f"n: {n}, k: {k}")
