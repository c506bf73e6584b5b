"""extci: exact computer algebra for Ext asymptotics over graded complete
intersections."""

from .fields import QQ, DEFAULT_PRIME, PrimeField, RationalField
from .hilbert import HilbertSeries, series_arith
from .laurent import (
    InsufficientPrecision,
    LaurentExpansion,
    ORDER_INFINITY,
    expand_at_one,
    laurent_arith,
    series_g,
    series_order,
)
from .poly import PolyRing, Polynomial, is_homogeneous, make_ring, poly_arith
from .quotient import QuotientRing

__version__ = "0.1.0"

__all__ = [
    "QQ",
    "DEFAULT_PRIME",
    "PrimeField",
    "RationalField",
    "PolyRing",
    "Polynomial",
    "QuotientRing",
    "HilbertSeries",
    "LaurentExpansion",
    "InsufficientPrecision",
    "ORDER_INFINITY",
    "make_ring",
    "poly_arith",
    "is_homogeneous",
    "series_arith",
    "expand_at_one",
    "laurent_arith",
    "series_order",
    "series_g",
    "__version__",
]
