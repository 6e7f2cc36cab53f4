"""Exact computations with finitely presented connected graded algebras."""

from .freealg import FreePoly, GeneratorSet, OrderSpec, Presentation, Q
from .gbasis import GBasis, complete, dimension_sequence, reduce, reduced_words
from .hilbert import RationalSeries, expand, fit_rational, growth_verdict
from .regularity import as_regular_report, minimal_free_resolution
from .algfile import AlgebraFile, ParseError, parse_algebra, print_algebra, read_algebra

__version__ = "0.1.0"

__all__ = [
    "FreePoly", "GeneratorSet", "OrderSpec", "Presentation", "Q",
    "GBasis", "complete", "dimension_sequence", "reduce", "reduced_words",
    "RationalSeries", "expand", "fit_rational", "growth_verdict",
    "as_regular_report", "minimal_free_resolution",
    "AlgebraFile", "ParseError", "parse_algebra", "print_algebra", "read_algebra",
]
