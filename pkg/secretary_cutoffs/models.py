"""
Data classes for secretary cutoffs
"""

import math
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from secretary_cutoffs.exceptions import DomainError

MAX_SEED = 2**64 - 1


class InnerSumStrategy(Enum):
    """How the t-sum of the expected utility meets the quadrature"""

    PER_TERM = "per-term"
    SWAPPED_KERNEL = "swapped-kernel"


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for adaptive quadrature"""

    abs_tol: float = 1e-10
    max_depth: int = 40
    inner_sum_strategy: InnerSumStrategy = InnerSumStrategy.SWAPPED_KERNEL

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive", f"abs_tol: {self.abs_tol}")
        if self.max_depth < 1:
            raise DomainError("max_depth must be at least 1", f"max_depth: {self.max_depth}")

    def cache_key(self) -> str:
        """Stable textual key used by result caches"""
        return f"abs_tol={self.abs_tol!r};max_depth={self.max_depth};strategy={self.inner_sum_strategy.value}"


@dataclass(frozen=True)
class LipschitzConfig:
    """Grid estimate settings for Lipschitz detection near the top rank"""

    grid: int = 1024
    refinement_factor: int = 2
    growth_ratio: float = 1.5
    refinements: int = 3

    def __post_init__(self):
        if self.grid < 2:
            raise DomainError("grid needs at least 2 points", f"grid: {self.grid}")
        if self.refinement_factor < 2 or self.refinements < 1:
            raise DomainError("refinement must subdivide at least once", f"factor: {self.refinement_factor}, refinements: {self.refinements}")
        if not self.growth_ratio > 1:
            raise DomainError("growth_ratio must exceed 1", f"growth_ratio: {self.growth_ratio}")


@dataclass(frozen=True)
class UtilityConstants:
    """Constants of a normalized utility that control the cutoff bound"""

    L: float
    epsilon: float
    M: float
    w_hat: float

    @property
    def is_lipschitz(self) -> bool:
        """Finite Lipschitz estimate near the top rank"""
        return math.isfinite(self.L)


@dataclass(frozen=True)
class PolicyEval:
    """Exact evaluation of one cutoff policy"""

    n: int
    c: int
    expected_utility: float
    accept_probs: Tuple[Tuple[int, float], ...] = ()

    @property
    def total_probability(self) -> float:
        return math.fsum(p for _, p in self.accept_probs)


class CutoffMethod(Enum):
    """Search strategy that produced a cutoff"""

    BINARY_SEARCH = "binary-search"
    FULL_SCAN = "full-scan"


@dataclass(frozen=True)
class OptimizerConfig:
    """Tolerances of the cutoff search"""

    sign_tol: float = 1e-11
    tie_tol: float = 1e-11
    epsilon: float = 0.1


@dataclass(frozen=True)
class CutoffBound:
    """Asymptotic cutoff ceiling sqrt((L / w_hat) * n), or the reason it does not apply"""

    n: int
    value: Optional[float]
    reason: Optional[str] = None
    constants: Optional[UtilityConstants] = None

    @property
    def applicable(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class CutoffResult:
    """Optimal cutoff of a utility objective"""

    n: int
    c_opt: int
    value: float
    method: CutoffMethod
    bound: Optional[float] = None


class TopKScoring(Enum):
    """Which success probability a top-k scan maximizes"""

    EXACT = "exact"
    MODEL = "model"


@dataclass(frozen=True)
class TopKModel:
    """Success probabilities P(c) for c in [2, n]"""

    n: int
    k: int
    scoring: TopKScoring
    success_probs: Tuple[Tuple[int, float], ...]

    def probability(self, c: int) -> float:
        if not 2 <= c <= self.n:
            raise DomainError("cutoff outside the profile", f"c: {c}, n: {self.n}")
        return self.success_probs[c - 2][1]


@dataclass(frozen=True)
class TopKOptimum:
    """Best cutoff for the top-k objective"""

    n: int
    k: int
    c_opt: int
    probability: float
    scoring: TopKScoring

    @property
    def ratio(self) -> float:
        return self.c_opt / self.n


class Variant(Enum):
    """Simulated problem"""

    P1 = "p1"
    P2 = "p2"
    TOPK = "topk"


@dataclass(frozen=True)
class SimConfig:
    """Seeded Monte Carlo run description"""

    variant: Variant
    n: int
    c: int
    trials: int
    seed: int
    k: Optional[int] = None

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be positive", f"n: {self.n}")
        if not 1 <= self.c <= self.n:
            raise DomainError("cutoff must lie in [1, n]", f"c: {self.c}, n: {self.n}")
        if self.trials < 1:
            raise DomainError("trials must be positive", f"trials: {self.trials}")
        if not 0 <= self.seed <= MAX_SEED:
            raise DomainError("seed must be a 64-bit unsigned integer", f"seed: {self.seed}")
        if (self.k is not None) != (self.variant is Variant.TOPK):
            raise DomainError("k is required for topk and only for topk", f"variant: {self.variant.value}, k: {self.k}")
        if self.k is not None and self.k < 1:
            raise DomainError("k must be positive", f"k: {self.k}")


@dataclass(frozen=True)
class SimResult:
    """Monte Carlo estimate with its standard error"""

    mean: float
    stderr: float
    trials: int
    seed: int
    variant: Variant
    n: int
    c: int


@dataclass(frozen=True)
class SweepConfig:
    """Settings of an asymptotics sweep"""

    epsilon: float = 0.1
    slack: float = 2.0
    drop_smallest: bool = False
    max_workers: int = 4

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise DomainError("epsilon must lie in (0, 1)", f"epsilon: {self.epsilon}")
        if not self.slack > 0:
            raise DomainError("slack must be positive", f"slack: {self.slack}")
        if self.max_workers < 1:
            raise DomainError("max_workers must be at least 1", f"max_workers: {self.max_workers}")


@dataclass(frozen=True)
class SweepRecord:
    """One grid point of an asymptotics sweep"""

    objective: str
    n: int
    c_opt: int
    value: float
    bound: Optional[float] = None

    def __post_init__(self):
        if not 1 <= self.c_opt <= self.n:
            raise DomainError("c_opt must lie in [1, n]", f"c_opt: {self.c_opt}, n: {self.n}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SweepRecord":
        try:
            return cls(**data)
        except TypeError as e:
            raise DomainError("malformed sweep record", str(e)) from e


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares fit of log(c_opt) against log(n)"""

    exponent: float
    log_intercept: float
    r_squared: float
    points: int


@dataclass(frozen=True)
class BoundCheck:
    """Comparison of one sweep record against slack times its bound"""

    n: int
    c_opt: int
    bound: Optional[float]
    slack: float

    @property
    def passed(self) -> bool:
        # No bound is a vacuous pass
        return self.bound is None or self.c_opt <= self.slack * self.bound


@dataclass(frozen=True)
class RunManifest:
    """Provenance attached to every CLI output"""

    command: str
    parameters: Dict[str, Any]
    seed: Optional[int]
    tool_version: str
    timestamp: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class CacheEntry:
    """Cached sweep value with its creation time"""

    value: Dict[str, Any]
    created: float = field(default=0.0)
