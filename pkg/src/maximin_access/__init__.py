"""Seed selection for maximin access to information under the independent cascade model."""
__version__ = "0.1.0"

from .cascade import CascadeConfig, ExactEvaluator, MonteCarloEvaluator, exact_probabilities, prob_est
from .graph import Graph, load_edge_list, read_edge_list, write_edge_list
from .welfare import MIN, REACH, WelfareSpec, phi_mean

__all__ = [
    "__version__",
    "CascadeConfig",
    "ExactEvaluator",
    "Graph",
    "MIN",
    "MonteCarloEvaluator",
    "REACH",
    "WelfareSpec",
    "exact_probabilities",
    "load_edge_list",
    "phi_mean",
    "prob_est",
    "read_edge_list",
    "write_edge_list",
]
