"""soskp: SOS optimality certificates and exact SOS rank for unweighted
minimum knapsack, plus the smoothed-analysis experiment around them."""

from ._version import __version__
from .model import KnapsackInstance, OptValue, frac_decompose, optimum, parse_instance, parse_q, trivial_rank

__all__ = [
    "__version__",
    "KnapsackInstance",
    "OptValue",
    "optimum",
    "frac_decompose",
    "trivial_rank",
    "parse_q",
    "parse_instance",
]
