"""
Counter-keyed random streams and mergeable running statistics
"""

import math
from dataclasses import dataclass

import numpy as np


class BlockStreams:
    """
    Independent generators for the blocks of one run

    Block b draws from Philox keyed by SeedSequence([seed, tag, b]), so its
    numbers are a pure function of (seed, tag, b) and never depend on which
    worker runs the block or in what order.
    """

    def __init__(self, seed: int, tag: int):
        self.seed = seed
        self.tag = tag

    def generator(self, block: int) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(np.random.SeedSequence([self.seed, self.tag, block])))


@dataclass
class RunningStats:
    """Count, mean and centered sum of squares, merged block by block"""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def add_block(self, values: np.ndarray) -> None:
        if values.size == 0:
            return
        block_mean = float(np.mean(values))
        block_m2 = float(np.sum((values - block_mean) ** 2))
        self.merge(values.size, block_mean, block_m2)

    def merge(self, count: int, mean: float, m2: float) -> None:
        total = self.count + count
        delta = mean - self.mean
        self.mean += delta * count / total
        self.m2 += m2 + delta * delta * self.count * count / total
        self.count = total

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0

    @property
    def stderr(self) -> float:
        return math.sqrt(self.variance / self.count) if self.count > 1 else 0.0
