"""
Exact top-k success probability by enumerating rank orders
"""

import logging
import math
from fractions import Fraction
from typing import Dict

from secretary_cutoffs.exceptions import CapacityError, DomainError


class RankOrderEnumerator:
    """
    Count, over all n! arrival orders, how often the cutoff-c rule accepts
    an applicant of overall rank <= k

    Orders are processed position by position; the state is the set of
    ranks seen so far (a bitmask), weighted by the number of prefixes that
    reach it without having stopped. The best rank seen is the lowest set bit.
    """

    MAX_N = 12

    def __init__(self, max_n: int = MAX_N):
        self.max_n = max_n
        self.logger = logging.getLogger(__name__)

    def success_probability(self, n: int, k: int, c: int) -> Fraction:
        """
        Exact success probability as a fraction

        Raises:
            CapacityError: For n above max_n
            DomainError: For c outside [1, n] or k < 1
        """
        if n > self.max_n:
            raise CapacityError(n, self.max_n, "Monte Carlo simulation (sim --variant topk)")
        if n < 1 or not 1 <= c <= n:
            raise DomainError("cutoff must lie in [1, n]", f"n: {n}, c: {c}")
        if k < 1:
            raise DomainError("k must be positive", f"k: {k}")

        good = (1 << min(k, n)) - 1
        running: Dict[int, int] = {0: 1}
        successes = 0

        for position in range(1, n + 1):
            remaining = math.factorial(n - position)
            advanced: Dict[int, int] = {}
            for seen, count in running.items():
                best = seen & -seen
                for rank in range(n):
                    bit = 1 << rank
                    if seen & bit:
                        continue
                    is_record = not seen or bit < best
                    if position == n or (position >= c and is_record):
                        if bit & good:
                            successes += count * remaining
                        continue
                    state = seen | bit
                    advanced[state] = advanced.get(state, 0) + count
            running = advanced

        return Fraction(successes, math.factorial(n))
