"""
Shared fixtures and configuration for tests
"""

import logging

import pytest

from secretary_cutoffs.evaluation import PolicyEvaluator, Quadrature
from secretary_cutoffs.models import InnerSumStrategy, QuadratureConfig
from secretary_cutoffs.optimization import CutoffOptimizer
from secretary_cutoffs.simulation import MonteCarloSimulator
from secretary_cutoffs.topk import TopKAnalyzer
from secretary_cutoffs.utility import UtilityAnalyzer, UtilityFunction

CORPUS_SPECS = {
    "linear": "linear",
    "power2": "power:2",
    "nsqrt": "nsqrt",
    "step": "step:0.3",
    "pwl_convex": "pwl:0,0;0.5,-0.2;1,-1",
    "pwl_concave": "pwl:0,0;0.2,-0.6;1,-1",
    "const": "const:-1",
}


def build_corpus():
    return {
        "linear": UtilityFunction.linear(),
        "power2": UtilityFunction.power(2.0),
        "nsqrt": UtilityFunction.negated_sqrt(),
        "step": UtilityFunction.step(0.3),
        "pwl_convex": UtilityFunction.piecewise_linear([(0.0, 0.0), (0.5, -0.2), (1.0, -1.0)]),
        "pwl_concave": UtilityFunction.piecewise_linear([(0.0, 0.0), (0.2, -0.6), (1.0, -1.0)]),
        "const": UtilityFunction.constant(-1.0),
    }


CORPUS = build_corpus()


@pytest.fixture
def corpus():
    """Utility corpus keyed by name"""
    return dict(CORPUS)


@pytest.fixture
def neg_linear():
    """w(x) = -x"""
    return UtilityFunction.power(1.0)


@pytest.fixture
def quadrature_config():
    return QuadratureConfig()


@pytest.fixture
def evaluator(quadrature_config):
    """Evaluator with the swapped kernel"""
    return PolicyEvaluator(Quadrature(quadrature_config))


@pytest.fixture
def per_term_evaluator():
    """Evaluator summing one integral per position"""
    return PolicyEvaluator(Quadrature(QuadratureConfig(inner_sum_strategy=InnerSumStrategy.PER_TERM)))


@pytest.fixture
def analyzer():
    return UtilityAnalyzer()


@pytest.fixture
def optimizer(evaluator):
    return CutoffOptimizer(evaluator, UtilityAnalyzer(evaluator.quadrature))


@pytest.fixture
def topk_analyzer():
    return TopKAnalyzer()


@pytest.fixture
def simulator():
    return MonteCarloSimulator(max_workers=2, debug=False)


@pytest.fixture(autouse=True)
def reset_logging():
    """Drop handlers installed by CLI runs so later tests never log to a closed stream"""
    yield
    package = logging.getLogger("secretary_cutoffs")
    for handler in list(package.handlers):
        package.removeHandler(handler)
        handler.close()
    root = logging.getLogger()
    for handler in list(root.handlers):
        if type(handler) is logging.StreamHandler:
            root.removeHandler(handler)
    package.propagate = True
    package.setLevel(logging.NOTSET)
