"""
Parsers for utility specs, integer ranges and key=value config files
"""

import logging
import re
from typing import Callable, Dict, List, Tuple

from secretary_cutoffs.exceptions import SpecParseError
from secretary_cutoffs.utility import UtilityFunction, UtilityKind

logger = logging.getLogger(__name__)

W_SPEC_FORMAT = "linear | const:<v> | power:<p> | nsqrt | step:<q>[:<h>] | pwl:<x0>,<y0>;<x1>,<y1>;... | poly:<a0>,<a1>,..."


def _number(token: str, expected: str = W_SPEC_FORMAT) -> float:
    try:
        return float(token)
    except ValueError:
        raise SpecParseError(token, expected) from None


def _integer(token: str, expected: str) -> int:
    token = token.strip()
    try:
        return int(token)
    except ValueError:
        pass
    # 1e4 style sizes
    value = _number(token, expected)
    if not value.is_integer():
        raise SpecParseError(token, expected)
    return int(value)


class UtilitySpecParser:
    """
    Parse textual utility specs

    Grammar (x = 0 is the best rank):
        linear              w(x) = 1 - x
        const:<v>           w(x) = v
        power:<p>           w(x) = -x^p, p > 0
        nsqrt               w(x) = -sqrt(x)
        step:<q>[:<h>]      w(x) = 0 for x < q, else -h (h defaults to 1)
        pwl:x0,y0;x1,y1;... linear interpolation, x0 = 0 and x_last = 1
        poly:a0,a1,...      w(x) = a0 + a1 x + a2 x^2 + ...
    """

    @staticmethod
    def parse(spec: str, validation_grid: int = 1025) -> UtilityFunction:
        """
        Parse a w-spec

        Args:
            spec: Spec text
            validation_grid: Grid density of the monotonicity check

        Returns:
            Validated UtilityFunction

        Raises:
            SpecParseError: If the text does not follow the grammar
            UtilityValidationError: If the utility is not nonincreasing
        """
        text = (spec or "").strip()
        if not text:
            raise SpecParseError(spec or "", W_SPEC_FORMAT)

        name, _, argument = text.partition(":")
        name = name.strip().lower()
        builders: Dict[str, Callable[[str], Tuple]] = {
            "linear": UtilitySpecParser._no_argument,
            "nsqrt": UtilitySpecParser._no_argument,
            "const": UtilitySpecParser._single,
            "power": UtilitySpecParser._single,
            "step": UtilitySpecParser._step,
            "pwl": UtilitySpecParser._knots,
            "poly": UtilitySpecParser._coefficients,
        }
        if name not in builders:
            raise SpecParseError(name, W_SPEC_FORMAT)

        params = builders[name](argument.strip())
        utility = UtilityFunction(UtilityKind(name), params, validation_grid=validation_grid)
        logger.debug(f"Parsed utility spec '{spec}' as {utility.label}")
        return utility

    @staticmethod
    def _no_argument(argument: str) -> Tuple:
        if argument:
            raise SpecParseError(argument, W_SPEC_FORMAT)
        return ()

    @staticmethod
    def _single(argument: str) -> Tuple[float]:
        return (_number(argument),)

    @staticmethod
    def _step(argument: str) -> Tuple[float, float]:
        parts = argument.split(":")
        if len(parts) > 2:
            raise SpecParseError(argument, "step:<q>[:<h>]")
        threshold = _number(parts[0])
        height = _number(parts[1]) if len(parts) == 2 else 1.0
        return threshold, height

    @staticmethod
    def _knots(argument: str) -> Tuple[float, ...]:
        values: List[float] = []
        for knot in filter(None, (part.strip() for part in argument.split(";"))):
            coordinates = knot.split(",")
            if len(coordinates) != 2:
                raise SpecParseError(knot, "pwl:<x0>,<y0>;<x1>,<y1>;...")
            values.extend(_number(c.strip()) for c in coordinates)
        return tuple(values)

    @staticmethod
    def _coefficients(argument: str) -> Tuple[float, ...]:
        if not argument:
            raise SpecParseError("poly:", "poly:<a0>,<a1>,...")
        return tuple(_number(part.strip()) for part in argument.split(","))


class RangeParser:
    """Parse cutoff ranges and n grids"""

    CUTOFF_FORMAT = "<c> | <a>..<b> | <c1>,<c2>,..."
    GRID_FORMAT = "<n1>,<n2>,... (integers, 1e4 style allowed)"

    @staticmethod
    def parse_cutoffs(text: str) -> List[int]:
        """'5' -> [5], '1..20' -> [1, ..., 20], '3,5,7' -> [3, 5, 7]"""
        text = (text or "").strip()
        match = re.fullmatch(r"(\d+)\s*\.\.\s*(\d+)", text)
        if match:
            start, stop = int(match.group(1)), int(match.group(2))
            if stop < start:
                raise SpecParseError(text, RangeParser.CUTOFF_FORMAT)
            return list(range(start, stop + 1))
        if not text:
            raise SpecParseError(text, RangeParser.CUTOFF_FORMAT)
        return [_integer(part, RangeParser.CUTOFF_FORMAT) for part in text.split(",")]

    @staticmethod
    def parse_grid(text: str) -> List[int]:
        text = (text or "").strip()
        if not text:
            raise SpecParseError(text, RangeParser.GRID_FORMAT)
        return [_integer(part, RangeParser.GRID_FORMAT) for part in text.split(",")]


class ConfigFileParser:
    """Parse key=value config files ('#' comments, '-' and '_' interchangeable in keys)"""

    @staticmethod
    def parse(content: str) -> Dict[str, str]:
        """
        Parse config text

        Raises:
            SpecParseError: For a line without '='
        """
        values: Dict[str, str] = {}
        for raw_line in content.splitlines():
            line = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            key, separator, value = line.partition("=")
            if not separator or not key.strip():
                raise SpecParseError(raw_line.strip(), "key=value")
            values[key.strip().replace("-", "_").lower()] = value.strip()
        return values
