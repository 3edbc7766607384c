"""
Sweep objectives
"""

from dataclasses import dataclass
from typing import Union

from secretary_cutoffs.exceptions import SpecParseError
from secretary_cutoffs.infrastructure.parsers import UtilitySpecParser
from secretary_cutoffs.models import TopKScoring
from secretary_cutoffs.utility import UtilityFunction


@dataclass(frozen=True)
class UtilityObjective:
    """Maximize expected utility of w"""

    utility: UtilityFunction

    @property
    def label(self) -> str:
        return f"utility:{self.utility.label}"


@dataclass(frozen=True)
class TopKObjective:
    """Maximize the probability of accepting one of the k best"""

    k: int
    scoring: TopKScoring = TopKScoring.EXACT

    @property
    def label(self) -> str:
        if self.scoring is TopKScoring.MODEL:
            return f"topk:{self.k}:model"
        return f"topk:{self.k}"


Objective = Union[UtilityObjective, TopKObjective]


class ObjectiveParser:
    """Parse 'topk:<k>[:model]', 'utility:<w-spec>' or a bare w-spec"""

    FORMAT = "topk:<k>[:model] | utility:<w-spec> | <w-spec>"

    @staticmethod
    def parse(text: str) -> Objective:
        """
        Raises:
            SpecParseError: For a malformed objective
        """
        text = (text or "").strip()
        head, _, rest = text.partition(":")
        if head.lower() == "topk":
            k_text, _, scoring = rest.partition(":")
            try:
                k = int(k_text)
            except ValueError:
                raise SpecParseError(text, ObjectiveParser.FORMAT) from None
            if k < 1 or scoring.lower() not in ("", TopKScoring.MODEL.value, TopKScoring.EXACT.value):
                raise SpecParseError(text, ObjectiveParser.FORMAT)
            return TopKObjective(k, TopKScoring(scoring.lower() or TopKScoring.EXACT.value))
        if head.lower() == "utility":
            return UtilityObjective(UtilitySpecParser.parse(rest))
        return UtilityObjective(UtilitySpecParser.parse(text))
