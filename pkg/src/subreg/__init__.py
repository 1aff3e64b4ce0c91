"""Metric subregularity and quadratic growth on a catalog of convex
functions with exact subdifferential oracles."""

from .catalog import (
    Abs,
    BasePair,
    IndicatorBox,
    InvalidBasePair,
    MaxAffine,
    PowerEven,
    Quadratic,
    Scaled,
    Separable,
    Sum,
    Tilted,
    function_from_json,
    function_to_json,
    prox,
    solution_set,
    subdifferential,
    value,
)
from .sets import Box, Empty, Polytope, Singleton, UnsupportedError, set_distance, set_excess

__version__ = "0.1.0"

__all__ = [
    "Abs",
    "BasePair",
    "Box",
    "Empty",
    "IndicatorBox",
    "InvalidBasePair",
    "MaxAffine",
    "Polytope",
    "PowerEven",
    "Quadratic",
    "Scaled",
    "Separable",
    "Singleton",
    "Sum",
    "Tilted",
    "UnsupportedError",
    "function_from_json",
    "function_to_json",
    "prox",
    "set_distance",
    "set_excess",
    "solution_set",
    "subdifferential",
    "value",
]
