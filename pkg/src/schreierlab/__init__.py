"""Exact computations with Schreier families, Schreier-type norms and
injective tensor norms, plus seeded verification suites."""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    ConfigError,
    ContractError,
    OrdinalSyntaxError,
    SchreierLabError,
    SpaceSyntaxError,
)
from .ordinal import Ordinal, parse_ordinal
from .spaces import RatVec, parse_space

__all__ = [
    "CapacityError",
    "ConfigError",
    "ContractError",
    "OrdinalSyntaxError",
    "Ordinal",
    "RatVec",
    "SchreierLabError",
    "SpaceSyntaxError",
    "__version__",
    "parse_ordinal",
    "parse_space",
]
