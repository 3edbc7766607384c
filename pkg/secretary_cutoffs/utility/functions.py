"""
Nonincreasing utility functions over relative rank

Rank convention: x = 0 is the BEST applicant and x = 1 the worst. Every utility
is nonincreasing in x, so the record (best-so-far) applicant always has the
highest utility seen so far.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial

from secretary_cutoffs.exceptions import DomainError, UtilityValidationError

ArrayLike = Union[float, np.ndarray]


class UtilityKind(Enum):
    """Builtin utility families, valued by their w-spec keyword"""

    LINEAR = "linear"
    CONSTANT = "const"
    POWER = "power"
    NEGATED_SQRT = "nsqrt"
    STEP = "step"
    PIECEWISE_LINEAR = "pwl"
    POLYNOMIAL = "poly"


def _fmt(value: float) -> str:
    return format(value, ".12g")


@dataclass(frozen=True)
class UtilityFunction:
    """
    Utility w: [0, 1] -> R as scale * base(x) + offset

    Bases by kind (params in brackets):
        linear            1 - x
        const [v]         v
        power [p]         -x^p
        nsqrt             -sqrt(x)
        step [q, h]       0 for x < q, -h from q on
        pwl [x0, y0, ...] linear interpolation through the knots
        poly [a0, a1, ..] a0 + a1 x + a2 x^2 + ...

    Construction validates the kind parameters and checks that w is
    nonincreasing on a grid of ``validation_grid`` points.
    """

    kind: UtilityKind
    params: Tuple[float, ...] = ()
    scale: float = 1.0
    offset: float = 0.0
    validation_grid: int = field(default=1025, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        self._validate_params()
        if not self.scale > 0:
            raise UtilityValidationError("scale must be positive", self.label)
        self._validate_monotone()

    # Construction helpers

    @classmethod
    def linear(cls) -> "UtilityFunction":
        return cls(UtilityKind.LINEAR)

    @classmethod
    def constant(cls, value: float) -> "UtilityFunction":
        return cls(UtilityKind.CONSTANT, (value,))

    @classmethod
    def power(cls, exponent: float) -> "UtilityFunction":
        return cls(UtilityKind.POWER, (exponent,))

    @classmethod
    def negated_sqrt(cls) -> "UtilityFunction":
        return cls(UtilityKind.NEGATED_SQRT)

    @classmethod
    def step(cls, threshold: float, height: float = 1.0) -> "UtilityFunction":
        return cls(UtilityKind.STEP, (threshold, height))

    @classmethod
    def piecewise_linear(cls, knots: Sequence[Tuple[float, float]]) -> "UtilityFunction":
        flat = tuple(value for knot in knots for value in knot)
        return cls(UtilityKind.PIECEWISE_LINEAR, flat)

    @classmethod
    def polynomial(cls, coefficients: Sequence[float]) -> "UtilityFunction":
        return cls(UtilityKind.POLYNOMIAL, tuple(coefficients))

    # Evaluation

    def __call__(self, x: ArrayLike) -> ArrayLike:
        """Evaluate without domain checks (callers guarantee x in [0, 1])"""
        values = np.asarray(x, dtype=float)
        result = self.scale * self._base(values) + self.offset
        if result.ndim == 0:
            return float(result)
        return result

    def evaluate(self, x: ArrayLike) -> ArrayLike:
        """
        Evaluate w at relative rank x

        Args:
            x: Relative rank (scalar or array) in [0, 1]

        Returns:
            w(x)

        Raises:
            DomainError: If any x lies outside [0, 1]
        """
        values = np.asarray(x, dtype=float)
        if values.size and (np.isnan(values).any() or values.min() < 0.0 or values.max() > 1.0):
            raise DomainError("relative rank must lie in [0, 1]", f"x: {x}")
        return self(x)

    def _base(self, x: np.ndarray) -> np.ndarray:
        kind = self.kind
        if kind is UtilityKind.LINEAR:
            return 1.0 - x
        if kind is UtilityKind.CONSTANT:
            return np.full_like(x, self.params[0])
        if kind is UtilityKind.POWER:
            return -np.power(x, self.params[0])
        if kind is UtilityKind.NEGATED_SQRT:
            return -np.sqrt(x)
        if kind is UtilityKind.STEP:
            threshold, height = self.params
            return np.where(x < threshold, 0.0, -height)
        if kind is UtilityKind.PIECEWISE_LINEAR:
            xs, ys = zip(*self.knots)
            return np.interp(x, xs, ys)
        return polynomial.polyval(x, self.params)

    # Transformations

    def normalize(self) -> "UtilityFunction":
        """Shift so that w(0) = 0; the result is <= 0 on [0, 1]"""
        return replace(self, offset=-self.scale * float(self._base(np.asarray(0.0))))

    def affine(self, scale: float, offset: float = 0.0) -> "UtilityFunction":
        """Return scale * w + offset for scale > 0"""
        if not scale > 0:
            raise UtilityValidationError("affine scale must be positive", self.label)
        return replace(self, scale=self.scale * scale, offset=self.offset * scale + offset)

    # Structure

    @property
    def knots(self) -> Tuple[Tuple[float, float], ...]:
        if self.kind is not UtilityKind.PIECEWISE_LINEAR:
            return ()
        return tuple(zip(self.params[0::2], self.params[1::2]))

    @property
    def discontinuities(self) -> Tuple[float, ...]:
        """Points where w jumps"""
        if self.kind is UtilityKind.STEP:
            return (self.params[0],)
        return ()

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        """Interior points where w is not smooth (mandatory quadrature splits)"""
        if self.kind is UtilityKind.PIECEWISE_LINEAR:
            return tuple(x for x, _ in self.knots[1:-1])
        return self.discontinuities

    @property
    def label(self) -> str:
        """Canonical w-spec text, with a suffix for affine transforms"""
        kind = self.kind
        if kind in (UtilityKind.LINEAR, UtilityKind.NEGATED_SQRT):
            base = kind.value
        elif kind is UtilityKind.STEP:
            threshold, height = self.params
            base = f"step:{_fmt(threshold)}" if height == 1.0 else f"step:{_fmt(threshold)}:{_fmt(height)}"
        elif kind is UtilityKind.PIECEWISE_LINEAR:
            base = "pwl:" + ";".join(f"{_fmt(x)},{_fmt(y)}" for x, y in self.knots)
        elif kind is UtilityKind.POLYNOMIAL:
            base = "poly:" + ",".join(_fmt(a) for a in self.params)
        else:
            base = f"{kind.value}:{_fmt(self.params[0])}"
        if self.scale == 1.0 and self.offset == 0.0:
            return base
        return f"{base}*{_fmt(self.scale)}{'+' if self.offset >= 0 else ''}{_fmt(self.offset)}"

    # Validation

    def _validate_params(self) -> None:
        kind, params = self.kind, self.params
        expected = {
            UtilityKind.LINEAR: 0,
            UtilityKind.NEGATED_SQRT: 0,
            UtilityKind.CONSTANT: 1,
            UtilityKind.POWER: 1,
            UtilityKind.STEP: 2,
        }
        if kind in expected and len(params) != expected[kind]:
            raise UtilityValidationError(f"{kind.value} takes {expected[kind]} parameter(s), got {len(params)}")
        if not all(np.isfinite(params)):
            raise UtilityValidationError("parameters must be finite", kind.value)

        if kind is UtilityKind.POWER and not params[0] > 0:
            raise UtilityValidationError("power exponent must be positive", kind.value)
        if kind is UtilityKind.STEP:
            threshold, height = params
            if not 0.0 < threshold < 1.0:
                raise UtilityValidationError("step threshold must lie in (0, 1)", kind.value)
            if height < 0.0:
                raise UtilityValidationError("step height must be nonnegative", kind.value)
        if kind is UtilityKind.POLYNOMIAL and not params:
            raise UtilityValidationError("polynomial needs at least one coefficient", kind.value)
        if kind is UtilityKind.PIECEWISE_LINEAR:
            self._validate_knots()

    def _validate_knots(self) -> None:
        if len(self.params) < 4 or len(self.params) % 2:
            raise UtilityValidationError("piecewise-linear needs at least two (x, y) knots", "pwl")
        xs = [x for x, _ in self.knots]
        ys = [y for _, y in self.knots]
        if xs[0] != 0.0 or xs[-1] != 1.0:
            raise UtilityValidationError("knots must start at x = 0 and end at x = 1", "pwl")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise UtilityValidationError("knot x values must be strictly increasing", "pwl")
        for (x0, y0), (x1, y1) in zip(self.knots, self.knots[1:]):
            if y1 > y0:
                raise UtilityValidationError(f"utility rises between x = {_fmt(x0)} and x = {_fmt(x1)}", "pwl")

    def _validate_monotone(self) -> None:
        grid = np.linspace(0.0, 1.0, self.validation_grid)
        values = self(grid)
        if not np.all(np.isfinite(values)):
            raise UtilityValidationError("utility must be finite on [0, 1]", self.label)
        tolerance = 1e-12 * max(1.0, float(np.max(np.abs(values))))
        rises = np.flatnonzero(np.diff(values) > tolerance)
        if rises.size:
            at = rises[0]
            raise UtilityValidationError(f"utility rises between x = {_fmt(grid[at])} and x = {_fmt(grid[at + 1])}", self.label)
